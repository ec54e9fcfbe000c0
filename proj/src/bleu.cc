#include "stylestat/bleu.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "stylestat/error.h"
#include "stylestat/text.h"

namespace stylestat {

namespace {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

// Tokens never contain whitespace, so a space-joined key is unambiguous.
NgramCounts CountNgrams(const std::vector<std::string> &tokens, std::size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key += ' ';
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

std::vector<std::string> Surfaces(const Sentence &s) {
  std::vector<std::string> out;
  out.reserve(s.size());
  for (const auto &t : s.tokens()) out.push_back(t.surface);
  return out;
}

}  // namespace

BleuScore CorpusBleu(std::span<const std::vector<std::string>> hypotheses,
                     std::span<const std::vector<std::string>> references) {
  if (hypotheses.size() != references.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "hypotheses: " + std::to_string(hypotheses.size()) +
                    ", references: " + std::to_string(references.size()));
  }
  if (hypotheses.empty()) throw Error(ErrorCode::kEmptyCorpus, "no sentences to score");

  BleuScore s;
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    const auto &hyp = hypotheses[i];
    const auto &ref = references[i];
    s.hypothesis_length += hyp.size();
    s.reference_length += ref.size();
    for (std::size_t n = 1; n <= 4; ++n) {
      const NgramCounts h = CountNgrams(hyp, n);
      const NgramCounts r = CountNgrams(ref, n);
      for (const auto &[gram, count] : h) {
        auto it = r.find(gram);
        if (it != r.end()) s.matches[n - 1] += std::min(count, it->second);
      }
      if (hyp.size() >= n) s.totals[n - 1] += hyp.size() - n + 1;
    }
  }

  bool any_zero = false;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    s.precisions[n] = s.totals[n] == 0 ? 0.0
                                       : static_cast<double>(s.matches[n]) /
                                             static_cast<double>(s.totals[n]);
    if (s.matches[n] == 0) {
      any_zero = true;
    } else {
      log_sum += std::log(s.precisions[n]);
    }
  }
  const double c = static_cast<double>(s.hypothesis_length);
  const double r = static_cast<double>(s.reference_length);
  if (s.hypothesis_length == 0) {
    s.brevity_penalty = 0.0;
  } else if (c < r) {
    s.brevity_penalty = std::exp(1.0 - r / c);
  } else {
    s.brevity_penalty = 1.0;
  }
  s.score = any_zero ? 0.0 : 100.0 * s.brevity_penalty * std::exp(log_sum / 4.0);
  return s;
}

BleuScore CorpusBleu(std::span<const Sentence> hypotheses,
                     std::span<const Sentence> references) {
  std::vector<std::vector<std::string>> h, r;
  h.reserve(hypotheses.size());
  r.reserve(references.size());
  for (const auto &s : hypotheses) h.push_back(Surfaces(s));
  for (const auto &s : references) r.push_back(Surfaces(s));
  return CorpusBleu(std::span<const std::vector<std::string>>(h),
                    std::span<const std::vector<std::string>>(r));
}

std::vector<Sentence> LoadTokenizedLines(const std::filesystem::path &path) {
  const std::string content = ReadTextFile(path);
  std::vector<Sentence> out;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    std::string line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(Sentence::FromSurfaces(SplitWhitespace(line)));
    start = end + 1;
  }
  return out;
}

}  // namespace stylestat
