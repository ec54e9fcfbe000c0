#ifndef STYLESTAT_CORPUS_H_
#define STYLESTAT_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace stylestat {

// Bumped whenever tokenization output can change; part of cache keys.
inline constexpr std::string_view kTokenizerVersion = "ptb-rules-1";

struct Token {
  std::string surface;
  std::string lower;
  bool is_punct = false;
  bool is_stopword = false;

  // Derives lower/is_punct/is_stopword from the surface form.
  static Token FromSurface(std::string surface);

  bool operator==(const Token &other) const = default;
};

// Penn-Treebank-style rule tokenizer. Splits on whitespace, detaches leading
// and trailing punctuation (one token per character) and splits the English
// clitics n't 's 're 've 'll 'd 'm off their host word.
std::vector<Token> Tokenize(std::string_view text);

// The shipped 179-word English stopword list, sorted.
const std::vector<std::string> &Stopwords();
bool IsStopword(std::string_view lower);

class Sentence {
 public:
  Sentence() = default;

  // Tokenizes raw.
  explicit Sentence(std::string raw);

  // Adopts an existing tokenization (e.g. CoNLL-U forms or pre-tokenized
  // BLEU input). raw is kept verbatim.
  Sentence(std::string raw, std::vector<Token> tokens);
  static Sentence FromSurfaces(const std::vector<std::string> &surfaces);

  const std::string &raw() const { return raw_; }
  const std::vector<Token> &tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  // Number of non-punctuation tokens.
  std::size_t WordCount() const;

  bool operator==(const Sentence &other) const = default;

 private:
  std::string raw_;
  std::vector<Token> tokens_;
};

struct SentencePair {
  int id = 0;
  Sentence source;
  Sentence target;

  bool operator==(const SentencePair &other) const = default;
};

enum class SplitName { kTrain, kDev, kTest };

std::string_view ToString(SplitName name);
// Accepts train/dev/test (and "valid"/"validation" for dev).
SplitName ParseSplitName(std::string_view text);

struct Split {
  SplitName name = SplitName::kTrain;
  std::vector<SentencePair> pairs;

  std::size_t size() const { return pairs.size(); }
  bool operator==(const Split &other) const = default;
};

enum class Annotation { kManual, kAutomatic };

std::string_view ToString(Annotation annotation);
Annotation ParseAnnotation(std::string_view text);

struct DatasetCard {
  std::string name;
  std::string style_task;
  std::string source_class;
  std::string target_class;
  std::string domain;
  Annotation annotation = Annotation::kManual;
  std::map<SplitName, std::size_t> sizes;
};

struct ParallelDataset {
  DatasetCard card;
  std::map<SplitName, Split> splits;

  bool has(SplitName name) const { return splits.count(name) > 0; }
  // Throws EmptySplit if the split was not loaded.
  const Split &split(SplitName name) const;
};

// Line i of source pairs with line i of target. Lines are LF-terminated; a
// trailing CR is stripped. Fails with LineCountMismatch, EmptySplit (no
// lines), EmptySentence (blank line), InvalidEncoding or IoError.
Split LoadParallel(const std::filesystem::path &source_path,
                   const std::filesystem::path &target_path,
                   SplitName name = SplitName::kTrain);

// Writes raw sentences back out, one per line.
void WriteParallel(const Split &split,
                   const std::filesystem::path &source_path,
                   const std::filesystem::path &target_path);

// Parsed dataset config, before any corpus file is read.
struct DatasetConfig {
  std::filesystem::path path;
  DatasetCard card;
  struct SplitFiles {
    std::filesystem::path source;
    std::filesystem::path target;
  };
  std::map<SplitName, SplitFiles> split_files;
  // Optional system outputs to score: label -> (hypotheses, references).
  std::map<std::string, SplitFiles> bleu_files;
};

// Config syntax: one `key = value` per line, `#` comments, blank lines
// ignored. Keys: name, style_task, source_class, target_class, domain,
// annotation (manual|automatic), <split>.source, <split>.target,
// bleu.<label>.hypotheses, bleu.<label>.references. Relative paths resolve
// against the config file's directory.
DatasetConfig ParseDatasetConfig(const std::filesystem::path &config_path);

ParallelDataset LoadDataset(const DatasetConfig &config);
ParallelDataset LoadDataset(const std::filesystem::path &config_path);

// Reads a whole file, validating UTF-8.
std::string ReadTextFile(const std::filesystem::path &path);

}  // namespace stylestat

#endif  // STYLESTAT_CORPUS_H_
