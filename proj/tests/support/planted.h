#ifndef STYLESTAT_TESTS_SUPPORT_PLANTED_H_
#define STYLESTAT_TESTS_SUPPORT_PLANTED_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "stylestat/corpus.h"

namespace stylestat::testing {

struct PlantedOptions {
  std::size_t train_pairs = 800;
  std::size_t test_pairs = 400;
  std::uint64_t seed = 7;
};

// Sentences of pseudo-words built from consonant-vowel-consonant syllables.
// Words of one family share their first three letters, last three letters,
// length and syllable count, so every non-lexical feature (and the tagger's
// affix and shape cues) treats family members alike.
//
// Length corpus: the target of each pair is the source followed by a copy of
// the source whose words are swapped for unused members of the same family,
// with the same punctuation. The target is therefore exactly twice as long
// while per-word statistics, type/token ratios and phrase structure match the
// source. Syllables per word, vocabulary repetition and phrase length vary
// widely from sentence to sentence, identically for both classes.
ParallelDataset MakeLengthCorpus(const PlantedOptions &options = {});

// Vocabulary corpus: source and target are identical except that two source
// marker words are replaced by two target marker words from the same
// families. Only bag-of-words columns can tell the classes apart.
ParallelDataset MakeVocabularyCorpus(const PlantedOptions &options = {});

// Pairs whose source and target sentences are identical.
ParallelDataset MakeIdenticalCorpus(const PlantedOptions &options = {});

// Writes <dir>/<split>.src, <dir>/<split>.tgt and <dir>/dataset.conf and
// returns the config path.
std::filesystem::path WriteDataset(const ParallelDataset &dataset,
                                   const std::filesystem::path &dir);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string &prefix = "stylestat-test");
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace stylestat::testing

#endif  // STYLESTAT_TESTS_SUPPORT_PLANTED_H_
