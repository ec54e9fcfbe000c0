#ifndef STYLESTAT_ANNOTATE_H_
#define STYLESTAT_ANNOTATE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stylestat/corpus.h"

namespace stylestat {

// Tag inventories, in a fixed order that is also the feature order.
const std::vector<std::string> &UposTags();  // 17 Universal POS tags
// 36 Penn Treebank tags, PTB punctuation tags, and the EWT extras
// (HYPH NFP ADD AFX GW XX) produced by UD-trained taggers.
const std::vector<std::string> &XposTags();
bool IsUpos(std::string_view tag);
bool IsXpos(std::string_view tag);

struct PosTag {
  std::string upos;
  std::string xpos;

  bool operator==(const PosTag &other) const = default;
};

struct TaggedSentence {
  Sentence sentence;
  std::vector<PosTag> tags;  // one per token

  bool operator==(const TaggedSentence &other) const = default;
};

// Tags forced for common pure-punctuation tokens, if any.
std::optional<PosTag> PunctuationTag(std::string_view surface);

namespace internal {

// Greedy averaged perceptron over one tagset.
class Perceptron {
 public:
  using Weights = std::vector<std::pair<int, double>>;  // (class, weight)

  Perceptron() = default;
  explicit Perceptron(std::vector<std::string> classes);

  const std::vector<std::string> &classes() const { return classes_; }
  int ClassIndex(std::string_view tag) const;

  // Highest-scoring class; ties and all-zero scores go to the default class.
  int Predict(const std::vector<std::string> &features) const;

  // Perceptron update on one example (training only).
  void Update(int truth, int guess, const std::vector<std::string> &features);
  // Replaces weights with their averages over all updates seen.
  void Average();

  void set_default_class(int c) { default_class_ = c; }
  int default_class() const { return default_class_; }

  void Write(std::ostream &out) const;
  static Perceptron Read(std::istream &in, const std::string &origin);

 private:
  struct Accumulator {
    double weight = 0.0;
    double total = 0.0;
    std::int64_t stamp = 0;
  };

  std::vector<std::string> classes_;
  std::unordered_map<std::string, Weights> weights_;
  std::unordered_map<std::string, std::unordered_map<int, Accumulator>> train_;
  std::int64_t instances_ = 0;
  int default_class_ = 0;
};

}  // namespace internal

// Two greedy averaged-perceptron taggers (XPOS first, then UPOS conditioned
// on the predicted XPOS) plus a fixed punctuation dictionary.
//
// File format (text, UTF-8):
//   stylestat-tagger 1
//   version <free text>
//   xpos <n-classes> <default-class> <n-features>
//   <tag>...                  one line, tab-separated class names
//   <feature>\t<c>:<w> ...    one line per feature, sorted by feature
//   upos ...                  same layout
class TaggerModel {
 public:
  TaggerModel() = default;

  static TaggerModel Load(const std::filesystem::path &path);
  static TaggerModel Read(std::istream &in, const std::string &origin);
  void Save(const std::filesystem::path &path) const;
  void Write(std::ostream &out) const;

  bool loaded() const { return loaded_; }
  const std::string &version() const { return version_; }

  std::vector<PosTag> Predict(const Sentence &sentence) const;

 private:
  friend TaggerModel TrainTagger(std::span<const TaggedSentence>, int,
                                 std::uint64_t);

  bool loaded_ = false;
  std::string version_;
  internal::Perceptron xpos_;
  internal::Perceptron upos_;
};

// Throws ModelNotLoaded for a default-constructed model and EmptySentence for
// an empty sentence.
TaggedSentence Tag(const Sentence &sentence, const TaggerModel &model);

// Deterministic given the seed (which drives the per-epoch shuffle). With
// zero epochs the model predicts the most frequent tag of each tagset.
// Throws UnknownTag for tags outside the inventories.
TaggerModel TrainTagger(std::span<const TaggedSentence> annotated, int epochs,
                        std::uint64_t seed = 0);

// CoNLL-U reader. Comment lines (#) and blank-line sentence boundaries are
// honoured; multiword-token ranges (3-4) and empty nodes (5.1) are skipped.
// When a `# text =` comment re-tokenizes to exactly the FORM column it is
// kept as the raw text; otherwise the forms are adopted joined by spaces.
std::vector<TaggedSentence> LoadConllu(const std::filesystem::path &path);
std::vector<TaggedSentence> ParseConllu(std::string_view content,
                                        const std::string &origin);
void WriteConllu(const std::filesystem::path &path,
                 std::span<const TaggedSentence> sentences);

enum class SpanKind { kNounPhrase, kVerbPhrase, kDependentClause };

std::string_view ToString(SpanKind kind);

struct Span {
  int start = 0;
  int end = 0;  // exclusive
  SpanKind kind = SpanKind::kNounPhrase;

  int length() const { return end - start; }
  bool operator==(const Span &other) const = default;
};

// Shallow chunker over XPOS tags, left-to-right greedy, maximal matches:
//   NP  (DT|PRP$)? (JJ|JJR|JJS)* (NN|NNS|NNP|NNPS)+
//   VP  MD? (RB|RBR|RBS)* (VB|VBD|VBG|VBN|VBP|VBZ)+
//   DepClause  a subordinator (WDT/WP/WP$/WRB, or IN heading a clause) up to
//              the next clause-boundary punctuation or the sentence end.
// The clause rule approximates what a parser would call a dependent clause.
std::vector<Span> Chunk(const TaggedSentence &tagged);

// Supplies tags for corpus sentences during feature extraction.
enum class Side { kSource, kTarget };

class TagSource {
 public:
  virtual ~TagSource() = default;
  virtual TaggedSentence TagFor(SplitName split, Side side, int pair_id,
                                const Sentence &sentence) const = 0;
  // Identifies the tag provenance for cache keys.
  virtual std::string Fingerprint() const = 0;
};

class BuiltinTagSource : public TagSource {
 public:
  explicit BuiltinTagSource(std::shared_ptr<const TaggerModel> model,
                            std::string fingerprint = {});
  TaggedSentence TagFor(SplitName split, Side side, int pair_id,
                        const Sentence &sentence) const override;
  std::string Fingerprint() const override { return fingerprint_; }

 private:
  std::shared_ptr<const TaggerModel> model_;
  std::string fingerprint_;
};

// Loads every <dir>/<split>.source.conllu and <dir>/<split>.target.conllu
// present; sentence k of each file belongs to pair k.
class ConlluTagSource : public TagSource {
 public:
  explicit ConlluTagSource(const std::filesystem::path &dir);
  TaggedSentence TagFor(SplitName split, Side side, int pair_id,
                        const Sentence &sentence) const override;
  std::string Fingerprint() const override { return fingerprint_; }

 private:
  std::filesystem::path dir_;
  std::map<std::pair<SplitName, Side>, std::vector<TaggedSentence>> files_;
  std::string fingerprint_;
};

}  // namespace stylestat

#endif  // STYLESTAT_ANNOTATE_H_
