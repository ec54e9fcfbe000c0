#ifndef STYLESTAT_SIMILARITY_H_
#define STYLESTAT_SIMILARITY_H_

#include <cstddef>
#include <span>
#include <string>

#include "stylestat/corpus.h"

namespace stylestat {

// Source/target similarity of one aligned pair. All metrics compare
// lowercased tokens, punctuation included, and throw EmptySentence if either
// side has no tokens. Each is symmetric in source and target.

// |V_s ∩ V_t| / |V_s ∪ V_t| over token types.
double Jaccard(const SentencePair &pair);

// Word-level edit distance with unit-cost insert/delete/substitute.
std::size_t Levenshtein(const SentencePair &pair);

// Levenshtein / max(|s|, |t|) in tokens.
double LevenshteinNorm(const SentencePair &pair);

// Type-level F1 treating the target as reference; 0 when nothing overlaps.
double F1Overlap(const SentencePair &pair);

// Raw edit distance over arbitrary string sequences.
std::size_t EditDistance(std::span<const std::string> a,
                         std::span<const std::string> b);

struct SimilarityReport {
  double jaccard_mean = 0.0;
  double ld_mean = 0.0;
  double ld_norm_mean = 0.0;
  double f1_mean = 0.0;
  std::size_t n_pairs = 0;
};

// Arithmetic means over every pair of the split. Throws EmptySplit.
SimilarityReport Summarize(const Split &split);

}  // namespace stylestat

#endif  // STYLESTAT_SIMILARITY_H_
