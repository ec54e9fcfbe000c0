#include <fstream>

#include "stylestat/annotate.h"
#include "stylestat/error.h"
#include "stylestat/hash.h"

namespace stylestat {

namespace {

std::vector<std::string> SplitTabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

struct PendingSentence {
  std::string text;
  std::vector<std::string> forms;
  std::vector<PosTag> tags;
};

TaggedSentence Finish(PendingSentence &p) {
  std::vector<Token> tokens;
  tokens.reserve(p.forms.size());
  for (const auto &f : p.forms) tokens.push_back(Token::FromSurface(f));
  std::string raw;
  if (!p.text.empty() && Tokenize(p.text) == tokens) {
    raw = p.text;
  } else {
    for (const auto &f : p.forms) {
      if (!raw.empty()) raw.push_back(' ');
      raw += f;
    }
  }
  TaggedSentence ts{Sentence(std::move(raw), std::move(tokens)),
                    std::move(p.tags)};
  p = PendingSentence{};
  return ts;
}

}  // namespace

std::vector<TaggedSentence> ParseConllu(std::string_view content,
                                        const std::string &origin) {
  std::vector<TaggedSentence> out;
  PendingSentence pending;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      if (!pending.forms.empty()) out.push_back(Finish(pending));
      pending = PendingSentence{};
      if (end == content.size()) break;
      continue;
    }
    if (line[0] == '#') {
      constexpr std::string_view kText = "# text = ";
      if (line.substr(0, kText.size()) == kText) {
        pending.text = std::string(line.substr(kText.size()));
      }
      continue;
    }
    const auto cols = SplitTabs(line);
    if (cols.size() != 10) {
      throw Error(ErrorCode::kMalformedConllu,
                  "expected 10 tab-separated columns, found " +
                      std::to_string(cols.size()),
                  origin, line_no);
    }
    const std::string &id = cols[0];
    if (id.find('-') != std::string::npos || id.find('.') != std::string::npos) {
      continue;  // multiword range or empty node
    }
    if (id.empty() || id.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::kMalformedConllu, "bad ID '" + id + "'", origin,
                  line_no);
    }
    if (cols[1].empty() || cols[1].find(' ') != std::string::npos) {
      throw Error(ErrorCode::kMalformedConllu, "empty FORM or FORM with space",
                  origin, line_no);
    }
    if (!IsUpos(cols[3])) {
      throw Error(ErrorCode::kMalformedConllu, "unknown UPOS '" + cols[3] + "'",
                  origin, line_no);
    }
    if (!IsXpos(cols[4])) {
      throw Error(ErrorCode::kMalformedConllu, "unknown XPOS '" + cols[4] + "'",
                  origin, line_no);
    }
    pending.forms.push_back(cols[1]);
    pending.tags.push_back(PosTag{cols[3], cols[4]});
  }
  if (!pending.forms.empty()) out.push_back(Finish(pending));
  return out;
}

std::vector<TaggedSentence> LoadConllu(const std::filesystem::path &path) {
  return ParseConllu(ReadTextFile(path), path.string());
}

void WriteConllu(const std::filesystem::path &path,
                 std::span<const TaggedSentence> sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write", path.string());
  for (const auto &ts : sentences) {
    out << "# text = " << ts.sentence.raw() << '\n';
    for (std::size_t i = 0; i < ts.sentence.size(); ++i) {
      out << (i + 1) << '\t' << ts.sentence.tokens()[i].surface << "\t_\t"
          << ts.tags[i].upos << '\t' << ts.tags[i].xpos
          << "\t_\t_\t_\t_\t_\n";
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed", path.string());
}

ConlluTagSource::ConlluTagSource(const std::filesystem::path &dir) : dir_(dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kTagsUnavailable, "not a directory", dir.string());
  }
  Sha256 h;
  h.Add("conllu");
  for (SplitName split : {SplitName::kTrain, SplitName::kDev, SplitName::kTest}) {
    for (Side side : {Side::kSource, Side::kTarget}) {
      const auto file =
          dir / (std::string(ToString(split)) +
                 (side == Side::kSource ? ".source.conllu" : ".target.conllu"));
      if (!std::filesystem::exists(file)) continue;
      const std::string content = ReadTextFile(file);
      h.Add(file.filename().string()).Add(content);
      files_[{split, side}] = ParseConllu(content, file.string());
    }
  }
  if (files_.empty()) {
    throw Error(ErrorCode::kTagsUnavailable,
                "no <split>.source.conllu / <split>.target.conllu files",
                dir.string());
  }
  fingerprint_ = "conllu:" + h.HexDigest();
}

TaggedSentence ConlluTagSource::TagFor(SplitName split, Side side, int pair_id,
                                       const Sentence &) const {
  auto it = files_.find({split, side});
  const std::string name =
      std::string(ToString(split)) +
      (side == Side::kSource ? ".source.conllu" : ".target.conllu");
  if (it == files_.end()) {
    throw Error(ErrorCode::kTagsUnavailable, "missing " + name, dir_.string());
  }
  if (pair_id < 0 || static_cast<std::size_t>(pair_id) >= it->second.size()) {
    throw Error(ErrorCode::kTagsUnavailable,
                name + " has " + std::to_string(it->second.size()) +
                    " sentences; pair " + std::to_string(pair_id) +
                    " requested",
                dir_.string());
  }
  return it->second[pair_id];
}

}  // namespace stylestat
