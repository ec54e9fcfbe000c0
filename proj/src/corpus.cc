#include "stylestat/corpus.h"

#include <array>
#include <fstream>
#include <sstream>
#include <utility>

#include "stylestat/error.h"
#include "stylestat/text.h"

namespace stylestat {

namespace fs = std::filesystem;

namespace {

// Clitics in both ASCII and typographic apostrophe spellings.
constexpr std::array<std::string_view, 14> kClitics = {
    "n't", "'s", "'re", "'ve", "'ll", "'d", "'m",
    "n’t", "’s", "’re", "’ve", "’ll", "’d",
    "’m"};

bool IsClitic(std::string_view lower) {
  for (auto c : kClitics) {
    if (lower == c) return true;
  }
  return false;
}

// Byte length of the last code point in s (s non-empty, valid UTF-8).
std::size_t LastCodepointLength(std::string_view s) {
  std::size_t n = 1;
  while (n < s.size() &&
         (static_cast<unsigned char>(s[s.size() - n]) & 0xC0) == 0x80) {
    ++n;
  }
  return n;
}

std::size_t FirstCodepointLength(std::string_view s) {
  const auto c = static_cast<unsigned char>(s[0]);
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0) return 2;
  if ((c & 0xF0) == 0xE0) return 3;
  return 4;
}

// Splits trailing clitics off a core that has no leading/trailing
// punctuation, host first. "don't's" -> do n't 's.
void SplitClitics(std::string_view core, std::vector<std::string> *out) {
  std::vector<std::string> suffixes;
  for (;;) {
    const std::string lower = ToLower(core);
    bool split = false;
    for (auto c : kClitics) {
      if (lower.size() <= c.size()) continue;
      if (lower.compare(lower.size() - c.size(), c.size(), c) != 0) continue;
      std::string_view stem = core.substr(0, core.size() - c.size());
      std::string_view last =
          stem.substr(stem.size() - LastCodepointLength(stem));
      if (IsPunctuation(last)) continue;
      suffixes.emplace_back(core.substr(stem.size()));
      core = stem;
      split = true;
      break;
    }
    if (!split) break;
  }
  out->emplace_back(core);
  out->insert(out->end(), suffixes.rbegin(), suffixes.rend());
}

void TokenizeChunk(std::string_view chunk, std::vector<std::string> *out) {
  std::vector<std::string> trailing;
  while (!chunk.empty() && !IsClitic(ToLower(chunk))) {
    const std::size_t n = LastCodepointLength(chunk);
    std::string_view last = chunk.substr(chunk.size() - n);
    if (!IsPunctuation(last)) break;
    trailing.emplace_back(last);
    chunk.remove_suffix(n);
  }
  while (!chunk.empty() && !IsClitic(ToLower(chunk))) {
    const std::size_t n = FirstCodepointLength(chunk);
    std::string_view first = chunk.substr(0, n);
    if (!IsPunctuation(first)) break;
    out->emplace_back(first);
    chunk.remove_prefix(n);
  }
  if (!chunk.empty()) SplitClitics(chunk, out);
  out->insert(out->end(), trailing.rbegin(), trailing.rend());
}

std::vector<std::string> ReadLines(const fs::path &path) {
  const std::string content = ReadTextFile(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    std::string line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

bool IsBlank(std::string_view s) {
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) {
    --e;
  }
  return std::string(s.substr(b, e - b));
}

}  // namespace

Token Token::FromSurface(std::string surface) {
  Token t;
  t.lower = ToLower(surface);
  t.is_punct = IsPunctuation(surface);
  t.is_stopword = IsStopword(t.lower);
  t.surface = std::move(surface);
  return t;
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<std::string> pieces;
  for (const auto &chunk : SplitWhitespace(text)) TokenizeChunk(chunk, &pieces);
  std::vector<Token> tokens;
  tokens.reserve(pieces.size());
  for (auto &p : pieces) tokens.push_back(Token::FromSurface(std::move(p)));
  return tokens;
}

Sentence::Sentence(std::string raw)
    : raw_(std::move(raw)), tokens_(Tokenize(raw_)) {}

Sentence::Sentence(std::string raw, std::vector<Token> tokens)
    : raw_(std::move(raw)), tokens_(std::move(tokens)) {}

Sentence Sentence::FromSurfaces(const std::vector<std::string> &surfaces) {
  std::vector<Token> tokens;
  tokens.reserve(surfaces.size());
  std::string raw;
  for (const auto &s : surfaces) {
    if (!raw.empty()) raw.push_back(' ');
    raw += s;
    tokens.push_back(Token::FromSurface(s));
  }
  return Sentence(std::move(raw), std::move(tokens));
}

std::size_t Sentence::WordCount() const {
  std::size_t n = 0;
  for (const auto &t : tokens_) {
    if (!t.is_punct) ++n;
  }
  return n;
}

std::string_view ToString(SplitName name) {
  switch (name) {
    case SplitName::kTrain: return "train";
    case SplitName::kDev: return "dev";
    case SplitName::kTest: return "test";
  }
  return "train";
}

SplitName ParseSplitName(std::string_view text) {
  if (text == "train") return SplitName::kTrain;
  if (text == "dev" || text == "valid" || text == "validation") {
    return SplitName::kDev;
  }
  if (text == "test") return SplitName::kTest;
  throw Error(ErrorCode::kConfig, "unknown split name '" + std::string(text) +
                                      "' (expected train, dev or test)");
}

std::string_view ToString(Annotation annotation) {
  return annotation == Annotation::kManual ? "manual" : "automatic";
}

Annotation ParseAnnotation(std::string_view text) {
  const std::string lower = ToLower(text);
  if (lower == "manual") return Annotation::kManual;
  if (lower == "automatic") return Annotation::kAutomatic;
  throw Error(ErrorCode::kConfig, "annotation must be manual or automatic, got '" +
                                      std::string(text) + "'");
}

const Split &ParallelDataset::split(SplitName name) const {
  auto it = splits.find(name);
  if (it == splits.end()) {
    throw Error(ErrorCode::kEmptySplit,
                "dataset '" + card.name + "' has no " +
                    std::string(ToString(name)) + " split");
  }
  return it->second;
}

std::string ReadTextFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open file", path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed", path.string());
  std::string content = buffer.str();
  if (auto bad = FindInvalidUtf8(content)) {
    int line = 1;
    for (std::size_t i = 0; i < *bad; ++i) {
      if (content[i] == '\n') ++line;
    }
    throw Error(ErrorCode::kInvalidEncoding,
                "invalid UTF-8 at byte " + std::to_string(*bad), path.string(),
                line);
  }
  return content;
}

Split LoadParallel(const fs::path &source_path, const fs::path &target_path,
                   SplitName name) {
  std::vector<std::string> src = ReadLines(source_path);
  std::vector<std::string> tgt = ReadLines(target_path);
  if (src.size() != tgt.size()) {
    throw Error(ErrorCode::kLineCountMismatch,
                source_path.string() + " has " + std::to_string(src.size()) +
                    " lines but " + target_path.string() + " has " +
                    std::to_string(tgt.size()));
  }
  if (src.empty()) {
    throw Error(ErrorCode::kEmptySplit, "no sentence pairs",
                source_path.string());
  }
  Split split;
  split.name = name;
  split.pairs.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (IsBlank(src[i])) {
      throw Error(ErrorCode::kEmptySentence, "blank line", source_path.string(),
                  static_cast<int>(i + 1));
    }
    if (IsBlank(tgt[i])) {
      throw Error(ErrorCode::kEmptySentence, "blank line", target_path.string(),
                  static_cast<int>(i + 1));
    }
    split.pairs.push_back(SentencePair{static_cast<int>(i),
                                       Sentence(std::move(src[i])),
                                       Sentence(std::move(tgt[i]))});
  }
  return split;
}

void WriteParallel(const Split &split, const fs::path &source_path,
                   const fs::path &target_path) {
  std::ofstream src(source_path, std::ios::binary);
  std::ofstream tgt(target_path, std::ios::binary);
  if (!src) throw Error(ErrorCode::kIo, "cannot write", source_path.string());
  if (!tgt) throw Error(ErrorCode::kIo, "cannot write", target_path.string());
  for (const auto &pair : split.pairs) {
    src << pair.source.raw() << '\n';
    tgt << pair.target.raw() << '\n';
  }
}

DatasetConfig ParseDatasetConfig(const fs::path &config_path) {
  const std::string content = ReadTextFile(config_path);
  const fs::path base = config_path.parent_path();
  auto resolve = [&](const std::string &value) {
    fs::path p(value);
    return p.is_absolute() ? p : base / p;
  };

  DatasetConfig config;
  config.path = config_path;
  bool have_name = false;
  std::istringstream lines(content);
  std::string raw_line;
  int line_no = 0;
  while (std::getline(lines, raw_line)) {
    ++line_no;
    const std::string line = Trim(raw_line);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfig, "expected 'key = value'",
                  config_path.string(), line_no);
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (value.empty()) {
      throw Error(ErrorCode::kConfig, "empty value for '" + key + "'",
                  config_path.string(), line_no);
    }
    try {
      if (key == "name") {
        config.card.name = value;
        have_name = true;
      } else if (key == "style_task") {
        config.card.style_task = value;
      } else if (key == "source_class") {
        config.card.source_class = value;
      } else if (key == "target_class") {
        config.card.target_class = value;
      } else if (key == "domain") {
        config.card.domain = value;
      } else if (key == "annotation") {
        config.card.annotation = ParseAnnotation(value);
      } else if (key.rfind("bleu.", 0) == 0) {
        const std::size_t dot = key.rfind('.');
        const std::string label = key.substr(5, dot - 5);
        const std::string field = key.substr(dot + 1);
        if (label.empty() || dot <= 5) {
          throw Error(ErrorCode::kConfig, "malformed key '" + key + "'");
        }
        if (field == "hypotheses") {
          config.bleu_files[label].source = resolve(value);
        } else if (field == "references") {
          config.bleu_files[label].target = resolve(value);
        } else {
          throw Error(ErrorCode::kConfig, "unknown key '" + key + "'");
        }
      } else {
        const std::size_t dot = key.find('.');
        if (dot == std::string::npos) {
          throw Error(ErrorCode::kConfig, "unknown key '" + key + "'");
        }
        const SplitName split = ParseSplitName(key.substr(0, dot));
        const std::string side = key.substr(dot + 1);
        if (side == "source") {
          config.split_files[split].source = resolve(value);
        } else if (side == "target") {
          config.split_files[split].target = resolve(value);
        } else {
          throw Error(ErrorCode::kConfig, "unknown key '" + key + "'");
        }
      }
    } catch (const Error &e) {
      if (!e.file().empty()) throw;
      // Re-anchor to the config line.
      std::string msg = e.what();
      const std::string prefix = std::string(ErrorCodeName(e.code())) + ": ";
      if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
      throw Error(e.code(), msg, config_path.string(), line_no);
    }
  }
  if (!have_name) {
    throw Error(ErrorCode::kConfig, "missing 'name'", config_path.string());
  }
  for (const auto &[split, files] : config.split_files) {
    if (files.source.empty() || files.target.empty()) {
      throw Error(ErrorCode::kConfig,
                  std::string(ToString(split)) +
                      " split needs both .source and .target",
                  config_path.string());
    }
  }
  for (const auto &[label, files] : config.bleu_files) {
    if (files.source.empty() || files.target.empty()) {
      throw Error(ErrorCode::kConfig,
                  "bleu." + label + " needs both hypotheses and references",
                  config_path.string());
    }
  }
  if (config.split_files.count(SplitName::kTrain) == 0) {
    throw Error(ErrorCode::kMissingTrainSplit,
                "config declares no train.source/train.target",
                config_path.string());
  }
  return config;
}

ParallelDataset LoadDataset(const DatasetConfig &config) {
  if (config.split_files.count(SplitName::kTrain) == 0) {
    throw Error(ErrorCode::kMissingTrainSplit,
                "config declares no train split", config.path.string());
  }
  ParallelDataset dataset;
  dataset.card = config.card;
  for (const auto &[name, files] : config.split_files) {
    Split split = LoadParallel(files.source, files.target, name);
    dataset.card.sizes[name] = split.size();
    dataset.splits.emplace(name, std::move(split));
  }
  return dataset;
}

ParallelDataset LoadDataset(const fs::path &config_path) {
  return LoadDataset(ParseDatasetConfig(config_path));
}

}  // namespace stylestat
