#ifndef STYLESTAT_FEATURES_H_
#define STYLESTAT_FEATURES_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stylestat/annotate.h"
#include "stylestat/corpus.h"

namespace stylestat {

// The nine linguistic feature groups, in report row order.
enum class FeatureGroup { kLexC, kRead, kLexD, kUpos, kXpos, kSenL, kPhr, kSub, kBoW };

inline constexpr std::array<FeatureGroup, 9> kAllGroups = {
    FeatureGroup::kLexC, FeatureGroup::kRead, FeatureGroup::kLexD,
    FeatureGroup::kUpos, FeatureGroup::kXpos, FeatureGroup::kSenL,
    FeatureGroup::kPhr,  FeatureGroup::kSub,  FeatureGroup::kBoW};

using GroupSet = std::set<FeatureGroup>;

std::string_view ToString(FeatureGroup group);  // "LexC", "Read", ...
FeatureGroup ParseFeatureGroup(std::string_view text);
// Comma-separated list, e.g. "SenL,LexD".
GroupSet ParseGroupList(std::string_view text);
GroupSet AllGroups();
bool NeedsTags(FeatureGroup group);

struct FeatureSpec {
  std::string name;
  FeatureGroup group;
  // Divided by sentence length (the asterisked features of the feature
  // table). POS distributions divide by token count so they sum to one.
  bool length_normalized = false;
};

class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<FeatureSpec> specs);

  std::size_t size() const { return specs_.size(); }
  const FeatureSpec &operator[](std::size_t i) const { return specs_[i]; }
  const std::vector<FeatureSpec> &specs() const { return specs_; }
  std::optional<std::size_t> Find(std::string_view name) const;
  std::vector<std::size_t> ColumnsOf(FeatureGroup group) const;
  // Groups with at least one column, in kAllGroups order.
  std::vector<FeatureGroup> Groups() const;
  // SHA-256 over names and groups.
  const std::string &hash() const { return hash_; }

  bool operator==(const FeatureSchema &other) const {
    return hash_ == other.hash_;
  }

 private:
  std::vector<FeatureSpec> specs_;
  std::unordered_map<std::string, std::size_t> index_;
  std::string hash_;
};

class FeatureVector {
 public:
  FeatureVector(std::shared_ptr<const FeatureSchema> schema,
                std::vector<double> values);

  const FeatureSchema &schema() const { return *schema_; }
  const std::shared_ptr<const FeatureSchema> &schema_ptr() const {
    return schema_;
  }
  const std::vector<double> &values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  // Throws SchemaMismatch for unknown names.
  double at(std::string_view name) const;

 private:
  std::shared_ptr<const FeatureSchema> schema_;
  std::vector<double> values_;
};

// --- Sentiment lexicon -------------------------------------------------------

struct SentimentEntry {
  double polarity = 0.0;      // [-1, 1]
  double subjectivity = 0.0;  // [0, 1]
};

// File format: `word<TAB>polarity<TAB>subjectivity`, one per line, `#`
// comments allowed. Words are matched lowercased.
class SentimentLexicon {
 public:
  SentimentLexicon() = default;
  static SentimentLexicon Load(const std::filesystem::path &path);
  static SentimentLexicon FromEntries(std::map<std::string, SentimentEntry> entries);

  bool loaded() const { return loaded_; }
  std::size_t size() const { return entries_.size(); }
  const SentimentEntry *Find(std::string_view lower) const;

 private:
  bool loaded_ = false;
  std::map<std::string, SentimentEntry, std::less<>> entries_;
};

// --- Bag-of-words vocabulary -------------------------------------------------

struct VocabularyOptions {
  std::size_t min_df = 2;
  std::size_t max_size = 10000;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  // Lowercased non-punctuation words of every source and target sentence,
  // kept if they occur in at least min_df sentences; the max_size most
  // frequent survive (ties broken alphabetically). Ordered by frequency.
  static Vocabulary Build(const Split &train, const VocabularyOptions &options = {});

  const std::vector<std::string> &words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  std::optional<std::size_t> Index(std::string_view word) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

// --- Per-sentence feature functions ----------------------------------------

// Vowel groups (a e i o u y), minus a silent final 'e' unless the word ends
// in consonant + "le"; at least 1. Throws NonAlphabetic when the word has no
// letters.
int CountSyllables(std::string_view word);

struct LexicalComplexity {
  double avg_word_length = 0.0;  // characters
  double avg_syllables = 0.0;
  double avg_syllables_no_stopwords = 0.0;
};
LexicalComplexity ComputeLexicalComplexity(const Sentence &sentence);

struct Readability {
  double complex_word_ratio = 0.0;  // words with >= 3 syllables / words
  double flesch_reading_ease = 0.0;
  double flesch_kincaid_grade = 0.0;
};
// Throws NoWords for sentences without a non-punctuation token.
Readability ComputeReadability(const Sentence &sentence);

struct LexicalDiversity {
  double unique_unigrams = 0.0;
  double unique_bigrams = 0.0;
};
LexicalDiversity ComputeLexicalDiversity(const Sentence &sentence);

enum class Tagset { kUpos, kXpos };
// One value per inventory tag (UposTags()/XposTags() order): count / tokens.
std::vector<double> PosDistribution(const TaggedSentence &tagged, Tagset tagset);

struct SentenceLength {
  double words = 0.0;
  double tokens = 0.0;
};
SentenceLength ComputeSentenceLength(const Sentence &sentence);

struct PhraseFeatures {
  double np_count = 0.0;
  double vp_count = 0.0;
  double np_avg_length = 0.0;
  double vp_avg_length = 0.0;
  double clause_count = 0.0;
  double clause_avg_length = 0.0;
};
PhraseFeatures ComputePhraseFeatures(const TaggedSentence &tagged);

struct SubjectivityFeatures {
  double first_person = 0.0;
  double second_person = 0.0;
  double third_person = 0.0;
  double polarity = 0.0;
  double subjectivity = 0.0;
};
// Throws LexiconNotLoaded.
SubjectivityFeatures ComputeSubjectivity(const Sentence &sentence,
                                         const SentimentLexicon &lexicon);

// (vocabulary index, count) for each in-vocabulary word, sorted by index.
std::vector<std::pair<std::size_t, double>> BowFeatures(const Sentence &sentence,
                                                        const Vocabulary &vocab);

// --- Matrices and scaling ----------------------------------------------------

using SparseRow = std::vector<std::pair<std::size_t, double>>;

struct ScalingParams {
  std::vector<double> mean;
  std::vector<double> stddev;  // population standard deviation
  std::vector<bool> constant;  // stddev == 0

  std::size_t size() const { return mean.size(); }
  double Scale(std::size_t col, double raw) const {
    return constant[col] ? 0.0 : (raw - mean[col]) / stddev[col];
  }
  double Unscale(std::size_t col, double z) const {
    return constant[col] ? mean[col] : z * stddev[col] + mean[col];
  }
  bool operator==(const ScalingParams &other) const = default;
};

// Rows of sparse raw feature values with class labels (0 = source style,
// 1 = target style). Scaling is applied lazily on access so bag-of-words
// columns stay sparse.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::shared_ptr<const FeatureSchema> schema,
                std::vector<SparseRow> rows, std::vector<int> labels,
                std::vector<std::string> bow_vocab = {});

  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return schema_ ? schema_->size() : 0; }
  const FeatureSchema &schema() const { return *schema_; }
  const std::shared_ptr<const FeatureSchema> &schema_ptr() const { return schema_; }
  const std::vector<int> &labels() const { return labels_; }
  int label(std::size_t row) const { return labels_[row]; }
  const std::vector<std::string> &bow_vocab() const { return bow_vocab_; }

  const std::optional<ScalingParams> &scaling() const { return scaling_; }
  bool scaled() const { return scaling_.has_value(); }

  double raw(std::size_t row, std::size_t col) const;
  // Scaled value when scaling is attached, raw otherwise.
  double at(std::size_t row, std::size_t col) const;
  FeatureVector Row(std::size_t row) const;
  std::vector<double> Column(std::size_t col) const;  // at() values

  // CSR view of the raw values.
  const std::vector<std::size_t> &row_offsets() const { return offsets_; }
  const std::vector<std::size_t> &col_indices() const { return cols_; }
  const std::vector<double> &values() const { return values_; }

  // Keeps only the columns of the given groups (scaling is dropped).
  FeatureMatrix Select(const GroupSet &groups) const;

 private:
  friend FeatureMatrix ApplyScaler(const FeatureMatrix &, const ScalingParams &);

  std::shared_ptr<const FeatureSchema> schema_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
  std::vector<int> labels_;
  std::vector<std::string> bow_vocab_;
  std::optional<ScalingParams> scaling_;
};

ScalingParams FitScaler(const FeatureMatrix &matrix);
// Throws SchemaMismatch when params do not match the column count and
// InvalidArgument when the matrix is already scaled.
FeatureMatrix ApplyScaler(const FeatureMatrix &matrix, const ScalingParams &params);

// Builds schemas and extracts feature rows for a fixed group selection.
class FeatureExtractor {
 public:
  // lexicon is required for Sub, vocab for BoW.
  FeatureExtractor(GroupSet groups, std::shared_ptr<const SentimentLexicon> lexicon,
                   Vocabulary vocab);

  const GroupSet &groups() const { return groups_; }
  const std::shared_ptr<const FeatureSchema> &schema() const { return schema_; }
  const Vocabulary &vocab() const { return vocab_; }
  bool needs_tags() const;

  // tagged may be null when no tag-based group is selected.
  SparseRow Extract(const Sentence &sentence, const TaggedSentence *tagged) const;
  FeatureVector ExtractVector(const Sentence &sentence,
                              const TaggedSentence *tagged) const;

 private:
  GroupSet groups_;
  std::shared_ptr<const SentimentLexicon> lexicon_;
  Vocabulary vocab_;
  std::shared_ptr<const FeatureSchema> schema_;
};

// Schema for a group selection; bag-of-words columns follow vocab order.
FeatureSchema BuildSchema(const GroupSet &groups, const Vocabulary &vocab);

// Each pair contributes its source (label 0) then its target (label 1), in
// pair order. Throws TagsUnavailable when a tag-based group is requested
// without a tag source.
FeatureMatrix BuildMatrix(const Split &split, const FeatureExtractor &extractor,
                          const TagSource *tags);

// Cache files: <stem>.csv holds `label,<dense columns...>,bow` rows where the
// bow cell lists `index:count` pairs separated by spaces; <stem>.json holds
// the schema (names, groups, normalization flags), bow vocabulary and
// optional scaling params.
void WriteMatrixCache(const std::filesystem::path &stem, const FeatureMatrix &matrix,
                      const ScalingParams *scaling = nullptr);
FeatureMatrix ReadMatrixCache(const std::filesystem::path &stem);

}  // namespace stylestat

#endif  // STYLESTAT_FEATURES_H_
