#include "stylestat/features.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "stylestat/error.h"
#include "stylestat/hash.h"
#include "stylestat/text.h"

namespace stylestat {

namespace {

double Ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

std::vector<const Token *> Words(const Sentence &sentence) {
  std::vector<const Token *> words;
  for (const auto &t : sentence.tokens()) {
    if (!t.is_punct) words.push_back(&t);
  }
  return words;
}

// Syllables for any token; tokens without letters count as one.
int SyllablesOrOne(std::string_view word) {
  return HasAlphabetic(word) ? CountSyllables(word) : 1;
}

bool IsVowel(char c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y': return true;
    default: return false;
  }
}

bool IsAsciiLetter(char c) { return (c >= 'a' && c <= 'z'); }

constexpr std::array<std::string_view, 10> kFirstPerson = {
    "i", "me", "my", "mine", "we", "us", "our", "ours", "myself", "ourselves"};
constexpr std::array<std::string_view, 5> kSecondPerson = {
    "you", "your", "yours", "yourself", "yourselves"};
constexpr std::array<std::string_view, 16> kThirdPerson = {
    "he",  "him",  "his",    "she",    "her",     "hers",    "it",     "its",
    "they", "them", "their", "theirs", "himself", "herself", "itself", "themselves"};

template <std::size_t N>
bool Contains(const std::array<std::string_view, N> &list, std::string_view w) {
  return std::find(list.begin(), list.end(), w) != list.end();
}

double ParseDouble(std::string_view text, const std::string &file, int line) {
  double value = 0.0;
  const auto *first = text.data();
  const auto *last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::kConfig, "bad number '" + std::string(text) + "'", file,
                line);
  }
  return value;
}

}  // namespace

// --- Groups ------------------------------------------------------------------

std::string_view ToString(FeatureGroup group) {
  switch (group) {
    case FeatureGroup::kLexC: return "LexC";
    case FeatureGroup::kRead: return "Read";
    case FeatureGroup::kLexD: return "LexD";
    case FeatureGroup::kUpos: return "UPOS";
    case FeatureGroup::kXpos: return "XPOS";
    case FeatureGroup::kSenL: return "SenL";
    case FeatureGroup::kPhr: return "Phr";
    case FeatureGroup::kSub: return "Sub";
    case FeatureGroup::kBoW: return "BoW";
  }
  return "LexC";
}

FeatureGroup ParseFeatureGroup(std::string_view text) {
  const std::string lower = ToLower(text);
  for (FeatureGroup g : kAllGroups) {
    if (ToLower(ToString(g)) == lower) return g;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown feature group '" + std::string(text) + "'");
}

GroupSet ParseGroupList(std::string_view text) {
  GroupSet groups;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) groups.insert(ParseFeatureGroup(item));
    start = comma + 1;
  }
  if (groups.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty feature group list");
  }
  return groups;
}

GroupSet AllGroups() { return GroupSet(kAllGroups.begin(), kAllGroups.end()); }

bool NeedsTags(FeatureGroup group) {
  return group == FeatureGroup::kUpos || group == FeatureGroup::kXpos ||
         group == FeatureGroup::kPhr;
}

// --- Schema and vectors ------------------------------------------------------

FeatureSchema::FeatureSchema(std::vector<FeatureSpec> specs)
    : specs_(std::move(specs)) {
  Sha256 h;
  h.Add("schema");
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto &s = specs_[i];
    if (!index_.emplace(s.name, i).second) {
      throw Error(ErrorCode::kSchemaMismatch, "duplicate feature name " + s.name);
    }
    h.Add(s.name).Add(ToString(s.group)).Add(s.length_normalized ? "1" : "0");
  }
  hash_ = h.HexDigest();
}

std::optional<std::size_t> FeatureSchema::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> FeatureSchema::ColumnsOf(FeatureGroup group) const {
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i].group == group) cols.push_back(i);
  }
  return cols;
}

std::vector<FeatureGroup> FeatureSchema::Groups() const {
  std::vector<FeatureGroup> out;
  for (FeatureGroup g : kAllGroups) {
    for (const auto &s : specs_) {
      if (s.group == g) {
        out.push_back(g);
        break;
      }
    }
  }
  return out;
}

FeatureVector::FeatureVector(std::shared_ptr<const FeatureSchema> schema,
                             std::vector<double> values)
    : schema_(std::move(schema)), values_(std::move(values)) {
  if (values_.size() != schema_->size()) {
    throw Error(ErrorCode::kSchemaMismatch, "vector length differs from schema");
  }
}

double FeatureVector::at(std::string_view name) const {
  auto idx = schema_->Find(name);
  if (!idx) {
    throw Error(ErrorCode::kSchemaMismatch, "unknown feature " + std::string(name));
  }
  return values_[*idx];
}

FeatureSchema BuildSchema(const GroupSet &groups, const Vocabulary &vocab) {
  std::vector<FeatureSpec> specs;
  auto add = [&](FeatureGroup g, std::string name, bool normalized) {
    specs.push_back(FeatureSpec{std::move(name), g, normalized});
  };
  for (FeatureGroup g : kAllGroups) {
    if (!groups.count(g)) continue;
    switch (g) {
      case FeatureGroup::kLexC:
        add(g, "lexc:avg_word_length", false);
        add(g, "lexc:avg_syllables", false);
        add(g, "lexc:avg_syllables_no_stopwords", false);
        break;
      case FeatureGroup::kRead:
        add(g, "read:complex_words", true);
        add(g, "read:flesch_reading_ease", false);
        add(g, "read:flesch_kincaid_grade", false);
        break;
      case FeatureGroup::kLexD:
        add(g, "lexd:unique_unigrams", true);
        add(g, "lexd:unique_bigrams", true);
        break;
      case FeatureGroup::kUpos:
        for (const auto &t : UposTags()) add(g, "upos:" + t, true);
        break;
      case FeatureGroup::kXpos:
        for (const auto &t : XposTags()) add(g, "xpos:" + t, true);
        break;
      case FeatureGroup::kSenL:
        add(g, "senl:words", false);
        add(g, "senl:tokens", false);
        break;
      case FeatureGroup::kPhr:
        add(g, "phr:np_count", true);
        add(g, "phr:vp_count", true);
        add(g, "phr:np_avg_length", true);
        add(g, "phr:vp_avg_length", true);
        add(g, "phr:clause_count", true);
        add(g, "phr:clause_avg_length", true);
        break;
      case FeatureGroup::kSub:
        add(g, "sub:first_person", true);
        add(g, "sub:second_person", true);
        add(g, "sub:third_person", true);
        add(g, "sub:polarity", false);
        add(g, "sub:subjectivity", false);
        break;
      case FeatureGroup::kBoW:
        for (const auto &w : vocab.words()) add(g, "bow:" + w, false);
        break;
    }
  }
  return FeatureSchema(std::move(specs));
}

// --- Sentiment lexicon ---------------------------------------------------------

SentimentLexicon SentimentLexicon::Load(const std::filesystem::path &path) {
  const std::string content = ReadTextFile(path);
  std::map<std::string, SentimentEntry> entries;
  std::istringstream in(content);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw Error(ErrorCode::kConfig, "expected word<TAB>polarity<TAB>subjectivity",
                  path.string(), line_no);
    }
    SentimentEntry e;
    e.polarity = ParseDouble(std::string_view(line).substr(t1 + 1, t2 - t1 - 1),
                             path.string(), line_no);
    e.subjectivity =
        ParseDouble(std::string_view(line).substr(t2 + 1), path.string(), line_no);
    if (e.polarity < -1.0 || e.polarity > 1.0 || e.subjectivity < 0.0 ||
        e.subjectivity > 1.0) {
      throw Error(ErrorCode::kConfig, "score out of range", path.string(), line_no);
    }
    entries[ToLower(line.substr(0, t1))] = e;
  }
  return FromEntries(std::move(entries));
}

SentimentLexicon SentimentLexicon::FromEntries(
    std::map<std::string, SentimentEntry> entries) {
  SentimentLexicon lex;
  for (auto &[word, entry] : entries) lex.entries_.emplace(word, entry);
  lex.loaded_ = true;
  return lex;
}

const SentimentEntry *SentimentLexicon::Find(std::string_view lower) const {
  auto it = entries_.find(lower);
  return it == entries_.end() ? nullptr : &it->second;
}

// --- Vocabulary ------------------------------------------------------------------

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate vocabulary word " + words_[i]);
    }
  }
}

Vocabulary Vocabulary::Build(const Split &train, const VocabularyOptions &options) {
  std::map<std::string, std::size_t> df;
  auto count = [&](const Sentence &s) {
    std::set<std::string_view> seen;
    for (const auto &t : s.tokens()) {
      if (!t.is_punct && seen.insert(t.lower).second) ++df[t.lower];
    }
  };
  for (const auto &p : train.pairs) {
    count(p.source);
    count(p.target);
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto &[w, n] : df) {
    if (n >= options.min_df) kept.emplace_back(w, n);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto &a, const auto &b) {
    return a.second > b.second;
  });
  if (kept.size() > options.max_size) kept.resize(options.max_size);
  std::vector<std::string> words;
  words.reserve(kept.size());
  for (auto &[w, n] : kept) words.push_back(std::move(w));
  return Vocabulary(std::move(words));
}

std::optional<std::size_t> Vocabulary::Index(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// --- Per-sentence features -------------------------------------------------------

int CountSyllables(std::string_view word) {
  if (!HasAlphabetic(word)) {
    throw Error(ErrorCode::kNonAlphabetic,
                "no alphabetic character in '" + std::string(word) + "'");
  }
  const std::string w = ToLower(word);
  int groups = 0;
  bool in_vowel = false;
  for (char c : w) {
    const bool v = IsVowel(c);
    if (v && !in_vowel) ++groups;
    in_vowel = v;
  }
  // Strip trailing non-letters before applying the silent-e rule.
  std::size_t end = w.size();
  while (end > 0 && !IsAsciiLetter(w[end - 1])) --end;
  const std::string_view core(w.data(), end);
  if (core.size() >= 2 && core.back() == 'e') {
    const char before = core[core.size() - 2];
    const bool consonant_le = before == 'l' && core.size() >= 3 &&
                              IsAsciiLetter(core[core.size() - 3]) &&
                              !IsVowel(core[core.size() - 3]);
    // Only a lone final 'e' forms its own vowel group; "ee", "ie" etc. do not.
    if (!consonant_le && !IsVowel(before)) --groups;
  }
  return std::max(groups, 1);
}

LexicalComplexity ComputeLexicalComplexity(const Sentence &sentence) {
  LexicalComplexity out;
  double chars = 0, syl = 0, syl_content = 0, content = 0;
  const auto words = Words(sentence);
  for (const Token *t : words) {
    chars += static_cast<double>(CodepointCount(t->surface));
    const int s = SyllablesOrOne(t->surface);
    syl += s;
    if (!t->is_stopword) {
      syl_content += s;
      content += 1;
    }
  }
  const double n = static_cast<double>(words.size());
  out.avg_word_length = Ratio(chars, n);
  out.avg_syllables = Ratio(syl, n);
  out.avg_syllables_no_stopwords = Ratio(syl_content, content);
  return out;
}

Readability ComputeReadability(const Sentence &sentence) {
  const auto words = Words(sentence);
  if (words.empty()) {
    throw Error(ErrorCode::kNoWords, "sentence has no word tokens");
  }
  double syl = 0, complex = 0;
  for (const Token *t : words) {
    const int s = SyllablesOrOne(t->surface);
    syl += s;
    if (s >= 3) complex += 1;
  }
  const double w = static_cast<double>(words.size());
  Readability r;
  r.complex_word_ratio = complex / w;
  r.flesch_reading_ease = 206.835 - 1.015 * w - 84.6 * (syl / w);
  r.flesch_kincaid_grade = 0.39 * w + 11.8 * (syl / w) - 15.59;
  return r;
}

LexicalDiversity ComputeLexicalDiversity(const Sentence &sentence) {
  const auto words = Words(sentence);
  std::set<std::string_view> unigrams;
  std::set<std::pair<std::string_view, std::string_view>> bigrams;
  for (std::size_t i = 0; i < words.size(); ++i) {
    unigrams.insert(words[i]->lower);
    if (i + 1 < words.size()) bigrams.emplace(words[i]->lower, words[i + 1]->lower);
  }
  const double n = static_cast<double>(words.size());
  return LexicalDiversity{Ratio(static_cast<double>(unigrams.size()), n),
                          Ratio(static_cast<double>(bigrams.size()), n)};
}

std::vector<double> PosDistribution(const TaggedSentence &tagged, Tagset tagset) {
  const auto &inventory = tagset == Tagset::kUpos ? UposTags() : XposTags();
  std::vector<double> out(inventory.size(), 0.0);
  for (const auto &tag : tagged.tags) {
    const std::string &t = tagset == Tagset::kUpos ? tag.upos : tag.xpos;
    auto it = std::find(inventory.begin(), inventory.end(), t);
    if (it == inventory.end()) {
      throw Error(ErrorCode::kUnknownTag, "tag '" + t + "' not in inventory");
    }
    out[static_cast<std::size_t>(it - inventory.begin())] += 1.0;
  }
  const double n = static_cast<double>(tagged.tags.size());
  for (double &v : out) v = Ratio(v, n);
  return out;
}

SentenceLength ComputeSentenceLength(const Sentence &sentence) {
  return SentenceLength{static_cast<double>(sentence.WordCount()),
                        static_cast<double>(sentence.size())};
}

PhraseFeatures ComputePhraseFeatures(const TaggedSentence &tagged) {
  const auto &tokens = tagged.sentence.tokens();
  const double w = static_cast<double>(tagged.sentence.WordCount());
  double count[3] = {0, 0, 0};
  double length[3] = {0, 0, 0};
  for (const Span &s : Chunk(tagged)) {
    const int k = static_cast<int>(s.kind);
    count[k] += 1;
    for (int i = s.start; i < s.end; ++i) {
      if (!tokens[i].is_punct) length[k] += 1;
    }
  }
  auto avg = [&](int k) { return Ratio(Ratio(length[k], count[k]), w); };
  PhraseFeatures out;
  out.np_count = Ratio(count[0], w);
  out.vp_count = Ratio(count[1], w);
  out.np_avg_length = avg(0);
  out.vp_avg_length = avg(1);
  out.clause_count = Ratio(count[2], w);
  out.clause_avg_length = avg(2);
  return out;
}

SubjectivityFeatures ComputeSubjectivity(const Sentence &sentence,
                                         const SentimentLexicon &lexicon) {
  if (!lexicon.loaded()) {
    throw Error(ErrorCode::kLexiconNotLoaded, "sentiment lexicon not loaded");
  }
  const auto words = Words(sentence);
  double first = 0, second = 0, third = 0, pol = 0, subj = 0, matched = 0;
  for (const Token *t : words) {
    if (Contains(kFirstPerson, t->lower)) first += 1;
    if (Contains(kSecondPerson, t->lower)) second += 1;
    if (Contains(kThirdPerson, t->lower)) third += 1;
    if (const SentimentEntry *e = lexicon.Find(t->lower)) {
      pol += e->polarity;
      subj += e->subjectivity;
      matched += 1;
    }
  }
  const double n = static_cast<double>(words.size());
  return SubjectivityFeatures{Ratio(first, n), Ratio(second, n), Ratio(third, n),
                              Ratio(pol, matched), Ratio(subj, matched)};
}

std::vector<std::pair<std::size_t, double>> BowFeatures(const Sentence &sentence,
                                                        const Vocabulary &vocab) {
  std::map<std::size_t, double> counts;
  for (const auto &t : sentence.tokens()) {
    if (t.is_punct) continue;
    if (auto idx = vocab.Index(t.lower)) counts[*idx] += 1.0;
  }
  return {counts.begin(), counts.end()};
}

// --- Extractor -----------------------------------------------------------------

FeatureExtractor::FeatureExtractor(GroupSet groups,
                                   std::shared_ptr<const SentimentLexicon> lexicon,
                                   Vocabulary vocab)
    : groups_(std::move(groups)), lexicon_(std::move(lexicon)), vocab_(std::move(vocab)) {
  if (groups_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no feature groups selected");
  }
  if (groups_.count(FeatureGroup::kSub) && (!lexicon_ || !lexicon_->loaded())) {
    throw Error(ErrorCode::kLexiconNotLoaded,
                "the Sub group needs a sentiment lexicon");
  }
  schema_ = std::make_shared<const FeatureSchema>(BuildSchema(groups_, vocab_));
}

bool FeatureExtractor::needs_tags() const {
  return std::any_of(groups_.begin(), groups_.end(), NeedsTags);
}

SparseRow FeatureExtractor::Extract(const Sentence &sentence,
                                    const TaggedSentence *tagged) const {
  if (needs_tags() && tagged == nullptr) {
    throw Error(ErrorCode::kTagsUnavailable,
                "UPOS, XPOS and Phr features need POS tags");
  }
  SparseRow row;
  std::size_t col = 0;
  auto push = [&](double v) {
    if (v != 0.0) row.emplace_back(col, v);
    ++col;
  };
  for (FeatureGroup g : kAllGroups) {
    if (!groups_.count(g)) continue;
    switch (g) {
      case FeatureGroup::kLexC: {
        const auto f = ComputeLexicalComplexity(sentence);
        push(f.avg_word_length);
        push(f.avg_syllables);
        push(f.avg_syllables_no_stopwords);
        break;
      }
      case FeatureGroup::kRead: {
        Readability f;
        if (sentence.WordCount() > 0) f = ComputeReadability(sentence);
        push(f.complex_word_ratio);
        push(f.flesch_reading_ease);
        push(f.flesch_kincaid_grade);
        break;
      }
      case FeatureGroup::kLexD: {
        const auto f = ComputeLexicalDiversity(sentence);
        push(f.unique_unigrams);
        push(f.unique_bigrams);
        break;
      }
      case FeatureGroup::kUpos:
        for (double v : PosDistribution(*tagged, Tagset::kUpos)) push(v);
        break;
      case FeatureGroup::kXpos:
        for (double v : PosDistribution(*tagged, Tagset::kXpos)) push(v);
        break;
      case FeatureGroup::kSenL: {
        const auto f = ComputeSentenceLength(sentence);
        push(f.words);
        push(f.tokens);
        break;
      }
      case FeatureGroup::kPhr: {
        const auto f = ComputePhraseFeatures(*tagged);
        push(f.np_count);
        push(f.vp_count);
        push(f.np_avg_length);
        push(f.vp_avg_length);
        push(f.clause_count);
        push(f.clause_avg_length);
        break;
      }
      case FeatureGroup::kSub: {
        const auto f = ComputeSubjectivity(sentence, *lexicon_);
        push(f.first_person);
        push(f.second_person);
        push(f.third_person);
        push(f.polarity);
        push(f.subjectivity);
        break;
      }
      case FeatureGroup::kBoW:
        for (const auto &[idx, v] : BowFeatures(sentence, vocab_)) {
          row.emplace_back(col + idx, v);
        }
        col += vocab_.size();
        break;
    }
  }
  return row;
}

FeatureVector FeatureExtractor::ExtractVector(const Sentence &sentence,
                                              const TaggedSentence *tagged) const {
  std::vector<double> dense(schema_->size(), 0.0);
  for (const auto &[c, v] : Extract(sentence, tagged)) dense[c] = v;
  return FeatureVector(schema_, std::move(dense));
}

}  // namespace stylestat
