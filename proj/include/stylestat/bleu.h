#ifndef STYLESTAT_BLEU_H_
#define STYLESTAT_BLEU_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stylestat/corpus.h"

namespace stylestat {

struct BleuScore {
  double score = 0.0;  // [0, 100]
  std::array<double, 4> precisions{};
  std::array<std::size_t, 4> matches{};
  std::array<std::size_t, 4> totals{};
  double brevity_penalty = 1.0;
  std::size_t hypothesis_length = 0;
  std::size_t reference_length = 0;
};

// Single-reference corpus BLEU over surface tokens (case-sensitive): clipped
// n-gram precisions for n = 1..4 pooled over the corpus, uniform geometric
// mean, brevity penalty min(1, exp(1 - r/c)). The score is 0 when any
// precision is 0. Throws LengthMismatch and EmptyCorpus.
BleuScore CorpusBleu(std::span<const Sentence> hypotheses,
                     std::span<const Sentence> references);
BleuScore CorpusBleu(std::span<const std::vector<std::string>> hypotheses,
                     std::span<const std::vector<std::string>> references);

// Reads one pre-tokenized sentence per line (tokens separated by
// whitespace). Blank lines are kept as empty sentences.
std::vector<Sentence> LoadTokenizedLines(const std::filesystem::path &path);

}  // namespace stylestat

#endif  // STYLESTAT_BLEU_H_
