#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "stylestat/annotate.h"
#include "stylestat/error.h"
#include "stylestat/hash.h"
#include "stylestat/text.h"

namespace stylestat {

namespace {

constexpr std::string_view kMagic = "stylestat-tagger 1";

bool Contains(const std::vector<std::string> &v, std::string_view s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

// Code-point-aware prefix/suffix of at most n characters.
std::string Prefix(std::string_view w, std::size_t n) {
  auto cps = DecodeUtf8(w);
  std::string out;
  for (std::size_t i = 0; i < std::min(n, cps.size()); ++i) {
    AppendUtf8(cps[i], &out);
  }
  return out;
}

std::string Suffix(std::string_view w, std::size_t n) {
  auto cps = DecodeUtf8(w);
  std::string out;
  const std::size_t start = cps.size() > n ? cps.size() - n : 0;
  for (std::size_t i = start; i < cps.size(); ++i) AppendUtf8(cps[i], &out);
  return out;
}

std::string Normalize(const Token &t) {
  const std::string &w = t.lower;
  if (!w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
        return c >= '0' && c <= '9';
      })) {
    return w.size() == 4 ? "!YEAR" : "!DIGITS";
  }
  return w;
}

// Collapsed character classes: "Hello" -> Xx, "U.S." -> X.X., "3,5" -> d,d.
std::string Shape(std::string_view surface) {
  std::string out;
  char last = 0;
  for (char32_t cp : DecodeUtf8(surface)) {
    char cls;
    if (cp >= 'A' && cp <= 'Z') {
      cls = 'X';
    } else if (cp >= 'a' && cp <= 'z') {
      cls = 'x';
    } else if (cp >= '0' && cp <= '9') {
      cls = 'd';
    } else if (cp < 0x80) {
      cls = static_cast<char>(cp);
    } else {
      cls = 'u';
    }
    if (cls != last) out.push_back(cls);
    last = cls;
  }
  return out;
}

struct Context {
  std::vector<std::string> words;  // padded with two markers on each side
  std::vector<std::string> surfaces;
};

Context MakeContext(const Sentence &sentence) {
  Context ctx;
  ctx.words = {"-START-", "-START2-"};
  for (const auto &t : sentence.tokens()) {
    ctx.words.push_back(Normalize(t));
    ctx.surfaces.push_back(t.surface);
  }
  ctx.words.push_back("-END-");
  ctx.words.push_back("-END2-");
  return ctx;
}

std::vector<std::string> XposFeatures(const Context &ctx, std::size_t i,
                                      const std::string &prev,
                                      const std::string &prev2) {
  const std::size_t k = i + 2;
  const std::string &w = ctx.words[k];
  std::vector<std::string> f;
  f.reserve(20);
  f.push_back("bias");
  f.push_back("i suffix " + Suffix(w, 3));
  f.push_back("i suffix2 " + Suffix(w, 2));
  f.push_back("i suffix1 " + Suffix(w, 1));
  f.push_back("i pref1 " + Prefix(w, 1));
  f.push_back("i pref2 " + Prefix(w, 2));
  f.push_back("i pref3 " + Prefix(w, 3));
  f.push_back("i-1 tag " + prev);
  f.push_back("i-2 tag " + prev2);
  f.push_back("i tag+i-2 tag " + prev + " " + prev2);
  f.push_back("i word " + w);
  f.push_back("i-1 tag+i word " + prev + " " + w);
  f.push_back("i-1 word " + ctx.words[k - 1]);
  f.push_back("i-1 suffix " + Suffix(ctx.words[k - 1], 3));
  f.push_back("i-2 word " + ctx.words[k - 2]);
  f.push_back("i+1 word " + ctx.words[k + 1]);
  f.push_back("i+1 suffix " + Suffix(ctx.words[k + 1], 3));
  f.push_back("i+2 word " + ctx.words[k + 2]);
  f.push_back("i shape " + Shape(ctx.surfaces[i]));
  if (i > 0 && !ctx.surfaces[i].empty() && ctx.surfaces[i][0] >= 'A' &&
      ctx.surfaces[i][0] <= 'Z') {
    f.push_back("i inner-cap");
  }
  return f;
}

std::vector<std::string> UposFeatures(const Context &ctx, std::size_t i,
                                      const std::string &xpos,
                                      const std::string &prev,
                                      const std::string &prev2) {
  std::vector<std::string> f = XposFeatures(ctx, i, prev, prev2);
  f.push_back("i xpos " + xpos);
  f.push_back("i xpos+i word " + xpos + " " + ctx.words[i + 2]);
  f.push_back("i xpos+i-1 tag " + xpos + " " + prev);
  return f;
}

std::string_view RequireLine(std::istream &in, std::string *line,
                             const std::string &origin, int *line_no) {
  if (!std::getline(in, *line)) {
    throw Error(ErrorCode::kModelNotLoaded, "truncated tagger model", origin,
                *line_no);
  }
  ++*line_no;
  return *line;
}

}  // namespace

const std::vector<std::string> &UposTags() {
  static const std::vector<std::string> kTags = {
      "ADJ",  "ADP",   "ADV",  "AUX",   "CCONJ", "DET",
      "INTJ", "NOUN",  "NUM",  "PART",  "PRON",  "PROPN",
      "PUNCT", "SCONJ", "SYM", "VERB",  "X"};
  return kTags;
}

const std::vector<std::string> &XposTags() {
  static const std::vector<std::string> kTags = {
      "CC",  "CD",   "DT",  "EX",   "FW",  "IN",   "JJ",  "JJR",  "JJS",
      "LS",  "MD",   "NN",  "NNS",  "NNP", "NNPS", "PDT", "POS",  "PRP",
      "PRP$", "RB",  "RBR", "RBS",  "RP",  "SYM",  "TO",  "UH",   "VB",
      "VBD", "VBG",  "VBN", "VBP",  "VBZ", "WDT",  "WP",  "WP$",  "WRB",
      ".",   ",",    ":",   "``",   "''",  "-LRB-", "-RRB-", "#",  "$",
      "HYPH", "NFP", "ADD", "AFX",  "GW",  "XX"};
  return kTags;
}

bool IsUpos(std::string_view tag) { return Contains(UposTags(), tag); }
bool IsXpos(std::string_view tag) { return Contains(XposTags(), tag); }

std::optional<PosTag> PunctuationTag(std::string_view surface) {
  static const std::map<std::string, PosTag, std::less<>> kTable = {
      {".", {"PUNCT", "."}},      {"?", {"PUNCT", "."}},
      {"!", {"PUNCT", "."}},      {",", {"PUNCT", ","}},
      {":", {"PUNCT", ":"}},      {";", {"PUNCT", ":"}},
      {"-", {"PUNCT", ":"}},      {"--", {"PUNCT", ":"}},
      {"…", {"PUNCT", ":"}},      {"–", {"PUNCT", ":"}},
      {"—", {"PUNCT", ":"}},      {"(", {"PUNCT", "-LRB-"}},
      {"[", {"PUNCT", "-LRB-"}},  {"{", {"PUNCT", "-LRB-"}},
      {")", {"PUNCT", "-RRB-"}},  {"]", {"PUNCT", "-RRB-"}},
      {"}", {"PUNCT", "-RRB-"}},  {"\"", {"PUNCT", "''"}},
      {"``", {"PUNCT", "``"}},    {"''", {"PUNCT", "''"}},
      {"“", {"PUNCT", "``"}},     {"”", {"PUNCT", "''"}},
      {"‘", {"PUNCT", "``"}},     {"’", {"PUNCT", "''"}},
      {"'", {"PUNCT", "''"}},     {"$", {"SYM", "$"}},
      {"#", {"SYM", "#"}},
  };
  auto it = kTable.find(surface);
  if (it == kTable.end()) return std::nullopt;
  return it->second;
}

namespace internal {

Perceptron::Perceptron(std::vector<std::string> classes)
    : classes_(std::move(classes)) {}

int Perceptron::ClassIndex(std::string_view tag) const {
  auto it = std::find(classes_.begin(), classes_.end(), tag);
  return it == classes_.end() ? -1 : static_cast<int>(it - classes_.begin());
}

int Perceptron::Predict(const std::vector<std::string> &features) const {
  std::vector<double> scores(classes_.size(), 0.0);
  for (const auto &f : features) {
    if (!train_.empty()) {
      auto it = train_.find(f);
      if (it == train_.end()) continue;
      for (const auto &[c, acc] : it->second) scores[c] += acc.weight;
    } else {
      auto it = weights_.find(f);
      if (it == weights_.end()) continue;
      for (const auto &[c, w] : it->second) scores[c] += w;
    }
  }
  int best = default_class_;
  for (int c = 0; c < static_cast<int>(scores.size()); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return best;
}

void Perceptron::Update(int truth, int guess,
                        const std::vector<std::string> &features) {
  ++instances_;
  if (truth == guess) return;
  auto bump = [&](int c, const std::string &f, double v) {
    Accumulator &acc = train_[f][c];
    acc.total += static_cast<double>(instances_ - acc.stamp) * acc.weight;
    acc.stamp = instances_;
    acc.weight += v;
  };
  for (const auto &f : features) {
    bump(truth, f, 1.0);
    bump(guess, f, -1.0);
  }
}

void Perceptron::Average() {
  weights_.clear();
  for (auto &[f, by_class] : train_) {
    Weights w;
    for (const auto &[c, acc] : by_class) {
      const double total =
          acc.total + static_cast<double>(instances_ - acc.stamp) * acc.weight;
      const double avg = instances_ > 0 ? total / static_cast<double>(instances_)
                                        : 0.0;
      if (avg != 0.0) w.emplace_back(c, avg);
    }
    if (w.empty()) continue;
    std::sort(w.begin(), w.end());
    weights_.emplace(f, std::move(w));
  }
  train_.clear();
}

void Perceptron::Write(std::ostream &out) const {
  out << classes_.size() << ' ' << default_class_ << ' ' << weights_.size()
      << '\n';
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    out << (i ? "\t" : "") << classes_[i];
  }
  out << '\n';
  std::vector<const std::string *> keys;
  keys.reserve(weights_.size());
  for (const auto &kv : weights_) keys.push_back(&kv.first);
  std::sort(keys.begin(), keys.end(),
            [](const std::string *a, const std::string *b) { return *a < *b; });
  for (const std::string *k : keys) {
    out << *k << '\t';
    bool first = true;
    for (const auto &[c, w] : weights_.at(*k)) {
      out << (first ? "" : " ") << c << ':' << fmt::format("{}", w);
      first = false;
    }
    out << '\n';
  }
}

Perceptron Perceptron::Read(std::istream &in, const std::string &origin) {
  // The caller has consumed the tagset name; the header line follows.
  int line_no = 0;
  std::string line;
  RequireLine(in, &line, origin, &line_no);
  std::istringstream header(line);
  std::size_t n_classes = 0;
  int default_class = 0;
  std::size_t n_features = 0;
  if (!(header >> n_classes >> default_class >> n_features) ||
      n_classes == 0 || default_class < 0 ||
      static_cast<std::size_t>(default_class) >= n_classes) {
    throw Error(ErrorCode::kModelNotLoaded, "bad perceptron header", origin);
  }
  RequireLine(in, &line, origin, &line_no);
  std::vector<std::string> classes;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) tab = line.size();
    classes.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  if (classes.size() != n_classes) {
    throw Error(ErrorCode::kModelNotLoaded, "class count mismatch", origin);
  }
  Perceptron p(std::move(classes));
  p.default_class_ = default_class;
  p.weights_.reserve(n_features);
  for (std::size_t i = 0; i < n_features; ++i) {
    RequireLine(in, &line, origin, &line_no);
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kModelNotLoaded, "bad feature line", origin);
    }
    Weights w;
    std::istringstream entries(line.substr(tab + 1));
    std::string entry;
    while (entries >> entry) {
      const std::size_t colon = entry.find(':');
      if (colon == std::string::npos) {
        throw Error(ErrorCode::kModelNotLoaded, "bad weight entry", origin);
      }
      const int c = std::atoi(entry.substr(0, colon).c_str());
      const double v = std::strtod(entry.c_str() + colon + 1, nullptr);
      if (c < 0 || static_cast<std::size_t>(c) >= n_classes) {
        throw Error(ErrorCode::kModelNotLoaded, "class index out of range",
                    origin);
      }
      w.emplace_back(c, v);
    }
    p.weights_.emplace(line.substr(0, tab), std::move(w));
  }
  return p;
}

}  // namespace internal

std::vector<PosTag> TaggerModel::Predict(const Sentence &sentence) const {
  const Context ctx = MakeContext(sentence);
  std::vector<PosTag> tags(sentence.size());
  std::string prev = "-START-";
  std::string prev2 = "-START2-";
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (auto forced = PunctuationTag(sentence.tokens()[i].surface)) {
      tags[i].xpos = forced->xpos;
    } else {
      tags[i].xpos =
          xpos_.classes()[xpos_.Predict(XposFeatures(ctx, i, prev, prev2))];
    }
    prev2 = prev;
    prev = tags[i].xpos;
  }
  prev = "-START-";
  prev2 = "-START2-";
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (auto forced = PunctuationTag(sentence.tokens()[i].surface)) {
      tags[i].upos = forced->upos;
    } else {
      tags[i].upos = upos_.classes()[upos_.Predict(
          UposFeatures(ctx, i, tags[i].xpos, prev, prev2))];
    }
    prev2 = prev;
    prev = tags[i].upos;
  }
  return tags;
}

TaggedSentence Tag(const Sentence &sentence, const TaggerModel &model) {
  if (!model.loaded()) {
    throw Error(ErrorCode::kModelNotLoaded, "tagger model not loaded");
  }
  if (sentence.empty()) {
    throw Error(ErrorCode::kEmptySentence, "cannot tag an empty sentence");
  }
  return TaggedSentence{sentence, model.Predict(sentence)};
}

TaggerModel TrainTagger(std::span<const TaggedSentence> annotated, int epochs,
                        std::uint64_t seed) {
  if (annotated.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no training sentences");
  }
  if (epochs < 0) {
    throw Error(ErrorCode::kInvalidArgument, "epochs must be >= 0");
  }
  internal::Perceptron xpos(XposTags());
  internal::Perceptron upos(UposTags());
  std::vector<int> xpos_counts(XposTags().size(), 0);
  std::vector<int> upos_counts(UposTags().size(), 0);
  for (std::size_t s = 0; s < annotated.size(); ++s) {
    const auto &ts = annotated[s];
    if (ts.tags.size() != ts.sentence.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sentence " + std::to_string(s) + " has " +
                      std::to_string(ts.tags.size()) + " tags for " +
                      std::to_string(ts.sentence.size()) + " tokens");
    }
    for (const auto &tag : ts.tags) {
      const int x = xpos.ClassIndex(tag.xpos);
      const int u = upos.ClassIndex(tag.upos);
      if (x < 0) throw Error(ErrorCode::kUnknownTag, "XPOS '" + tag.xpos + "'");
      if (u < 0) throw Error(ErrorCode::kUnknownTag, "UPOS '" + tag.upos + "'");
      ++xpos_counts[x];
      ++upos_counts[u];
    }
  }
  auto argmax = [](const std::vector<int> &v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  };
  xpos.set_default_class(argmax(xpos_counts));
  upos.set_default_class(argmax(upos_counts));

  std::vector<std::size_t> order(annotated.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (std::size_t idx : order) {
      const auto &ts = annotated[idx];
      const Context ctx = MakeContext(ts.sentence);
      std::string prev = "-START-";
      std::string prev2 = "-START2-";
      std::vector<std::string> guessed_xpos(ts.sentence.size());
      for (std::size_t i = 0; i < ts.sentence.size(); ++i) {
        std::string guess;
        if (auto forced = PunctuationTag(ts.sentence.tokens()[i].surface)) {
          guess = forced->xpos;
        } else {
          auto feats = XposFeatures(ctx, i, prev, prev2);
          const int g = xpos.Predict(feats);
          xpos.Update(xpos.ClassIndex(ts.tags[i].xpos), g, feats);
          guess = XposTags()[g];
        }
        guessed_xpos[i] = guess;
        prev2 = prev;
        prev = guess;
      }
      prev = "-START-";
      prev2 = "-START2-";
      for (std::size_t i = 0; i < ts.sentence.size(); ++i) {
        std::string guess;
        if (auto forced = PunctuationTag(ts.sentence.tokens()[i].surface)) {
          guess = forced->upos;
        } else {
          auto feats = UposFeatures(ctx, i, guessed_xpos[i], prev, prev2);
          const int g = upos.Predict(feats);
          upos.Update(upos.ClassIndex(ts.tags[i].upos), g, feats);
          guess = UposTags()[g];
        }
        prev2 = prev;
        prev = guess;
      }
    }
    std::shuffle(order.begin(), order.end(), rng);
  }
  xpos.Average();
  upos.Average();

  TaggerModel model;
  model.loaded_ = true;
  model.version_ = fmt::format("perceptron epochs={} seed={} sentences={}",
                               epochs, seed, annotated.size());
  model.xpos_ = std::move(xpos);
  model.upos_ = std::move(upos);
  return model;
}

void TaggerModel::Write(std::ostream &out) const {
  if (!loaded_) throw Error(ErrorCode::kModelNotLoaded, "nothing to save");
  out << kMagic << '\n' << "version " << version_ << '\n';
  out << "xpos ";
  xpos_.Write(out);
  out << "upos ";
  upos_.Write(out);
}

void TaggerModel::Save(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write", path.string());
  Write(out);
  if (!out) throw Error(ErrorCode::kIo, "write failed", path.string());
}

TaggerModel TaggerModel::Read(std::istream &in, const std::string &origin) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw Error(ErrorCode::kModelNotLoaded, "not a stylestat tagger model",
                origin, 1);
  }
  TaggerModel model;
  if (!std::getline(in, line) || line.rfind("version ", 0) != 0) {
    throw Error(ErrorCode::kModelNotLoaded, "missing version line", origin, 2);
  }
  model.version_ = line.substr(8);
  std::string tagset;
  if (!(in >> tagset) || tagset != "xpos") {
    throw Error(ErrorCode::kModelNotLoaded, "missing xpos section", origin);
  }
  in.get();
  model.xpos_ = internal::Perceptron::Read(in, origin);
  if (!(in >> tagset) || tagset != "upos") {
    throw Error(ErrorCode::kModelNotLoaded, "missing upos section", origin);
  }
  in.get();
  model.upos_ = internal::Perceptron::Read(in, origin);
  if (model.xpos_.classes() != XposTags() ||
      model.upos_.classes() != UposTags()) {
    throw Error(ErrorCode::kModelNotLoaded,
                "model tag inventory differs from this build", origin);
  }
  model.loaded_ = true;
  return model;
}

TaggerModel TaggerModel::Load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kModelNotLoaded, "cannot open tagger model",
                path.string());
  }
  return Read(in, path.string());
}

BuiltinTagSource::BuiltinTagSource(std::shared_ptr<const TaggerModel> model,
                                   std::string fingerprint)
    : model_(std::move(model)), fingerprint_(std::move(fingerprint)) {
  if (!model_ || !model_->loaded()) {
    throw Error(ErrorCode::kModelNotLoaded, "builtin tag source needs a model");
  }
  if (fingerprint_.empty()) {
    std::ostringstream out;
    model_->Write(out);
    fingerprint_ = "builtin:" + Sha256Hex(out.str());
  }
}

TaggedSentence BuiltinTagSource::TagFor(SplitName, Side, int,
                                        const Sentence &sentence) const {
  return Tag(sentence, *model_);
}

}  // namespace stylestat
