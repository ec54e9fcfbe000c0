#include "stylestat/similarity.h"

#include <algorithm>
#include <set>
#include <vector>

#include "stylestat/error.h"

namespace stylestat {

namespace {

std::vector<std::string> Lowered(const Sentence &sentence) {
  std::vector<std::string> out;
  out.reserve(sentence.size());
  for (const auto &t : sentence.tokens()) out.push_back(t.lower);
  return out;
}

void CheckNonEmpty(const SentencePair &pair) {
  if (pair.source.empty() || pair.target.empty()) {
    throw Error(ErrorCode::kEmptySentence,
                "pair " + std::to_string(pair.id) + " has an empty side");
  }
}

struct TypeOverlap {
  std::size_t both = 0;
  std::size_t source_only = 0;
  std::size_t target_only = 0;
};

TypeOverlap CountTypes(const SentencePair &pair) {
  CheckNonEmpty(pair);
  std::set<std::string> s;
  std::set<std::string> t;
  for (const auto &tok : pair.source.tokens()) s.insert(tok.lower);
  for (const auto &tok : pair.target.tokens()) t.insert(tok.lower);
  TypeOverlap o;
  for (const auto &w : s) {
    if (t.count(w)) {
      ++o.both;
    } else {
      ++o.source_only;
    }
  }
  o.target_only = t.size() - o.both;
  return o;
}

}  // namespace

std::size_t EditDistance(std::span<const std::string> a,
                         std::span<const std::string> b) {
  // Two-row DP over (prefix of a) x (prefix of b).
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double Jaccard(const SentencePair &pair) {
  const TypeOverlap o = CountTypes(pair);
  return static_cast<double>(o.both) /
         static_cast<double>(o.both + o.source_only + o.target_only);
}

std::size_t Levenshtein(const SentencePair &pair) {
  CheckNonEmpty(pair);
  const auto s = Lowered(pair.source);
  const auto t = Lowered(pair.target);
  return EditDistance(s, t);
}

double LevenshteinNorm(const SentencePair &pair) {
  const std::size_t d = Levenshtein(pair);
  return static_cast<double>(d) /
         static_cast<double>(std::max(pair.source.size(), pair.target.size()));
}

double F1Overlap(const SentencePair &pair) {
  const TypeOverlap o = CountTypes(pair);
  if (o.both == 0) return 0.0;
  const double tp = static_cast<double>(o.both);
  const double precision = tp / (tp + static_cast<double>(o.source_only));
  const double recall = tp / (tp + static_cast<double>(o.target_only));
  return 2.0 * precision * recall / (precision + recall);
}

SimilarityReport Summarize(const Split &split) {
  if (split.pairs.empty()) {
    throw Error(ErrorCode::kEmptySplit, "cannot summarize an empty split");
  }
  SimilarityReport r;
  for (const auto &pair : split.pairs) {
    r.jaccard_mean += Jaccard(pair);
    r.ld_mean += static_cast<double>(Levenshtein(pair));
    r.ld_norm_mean += LevenshteinNorm(pair);
    r.f1_mean += F1Overlap(pair);
  }
  const double n = static_cast<double>(split.pairs.size());
  r.n_pairs = split.pairs.size();
  r.jaccard_mean /= n;
  r.ld_mean /= n;
  r.ld_norm_mean /= n;
  r.f1_mean /= n;
  return r;
}

}  // namespace stylestat
