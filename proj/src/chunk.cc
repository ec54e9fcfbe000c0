#include <algorithm>
#include <array>

#include "stylestat/annotate.h"

namespace stylestat {

namespace {

template <std::size_t N>
bool OneOf(const std::string &tag, const std::array<std::string_view, N> &set) {
  return std::find(set.begin(), set.end(), tag) != set.end();
}

constexpr std::array<std::string_view, 2> kDeterminer = {"DT", "PRP$"};
constexpr std::array<std::string_view, 3> kAdjective = {"JJ", "JJR", "JJS"};
constexpr std::array<std::string_view, 4> kNoun = {"NN", "NNS", "NNP", "NNPS"};
constexpr std::array<std::string_view, 3> kAdverb = {"RB", "RBR", "RBS"};
constexpr std::array<std::string_view, 6> kVerb = {"VB",  "VBD", "VBG",
                                                   "VBN", "VBP", "VBZ"};
constexpr std::array<std::string_view, 4> kWh = {"WDT", "WP", "WP$", "WRB"};

// IN tokens that open a clause rather than a prepositional phrase.
constexpr std::array<std::string_view, 17> kSubordinators = {
    "after",  "although", "as",     "because", "before", "if",
    "once",   "since",    "that",   "though",  "till",   "unless",
    "until",  "whereas",  "whether", "while",  "lest"};

constexpr std::array<std::string_view, 12> kClauseBoundary = {
    ",", ";", ":", ".", "!", "?", "--", "-", "(", ")", "…", "—"};

using Tags = std::vector<PosTag>;

// Length of the NP match starting at i, or 0.
int MatchNounPhrase(const Tags &tags, int i) {
  const int n = static_cast<int>(tags.size());
  int j = i;
  if (j < n && OneOf(tags[j].xpos, kDeterminer)) ++j;
  while (j < n && OneOf(tags[j].xpos, kAdjective)) ++j;
  const int nouns_start = j;
  while (j < n && OneOf(tags[j].xpos, kNoun)) ++j;
  return j > nouns_start ? j - i : 0;
}

int MatchVerbPhrase(const Tags &tags, int i) {
  const int n = static_cast<int>(tags.size());
  int j = i;
  if (j < n && tags[j].xpos == "MD") ++j;
  while (j < n && OneOf(tags[j].xpos, kAdverb)) ++j;
  const int verbs_start = j;
  while (j < n && OneOf(tags[j].xpos, kVerb)) ++j;
  return j > verbs_start ? j - i : 0;
}

bool OpensClause(const TaggedSentence &ts, int i) {
  const std::string &x = ts.tags[i].xpos;
  if (OneOf(x, kWh)) return true;
  return x == "IN" && OneOf(ts.sentence.tokens()[i].lower, kSubordinators);
}

template <typename Matcher>
void GreedyScan(const Tags &tags, SpanKind kind, Matcher match,
                std::vector<Span> *out) {
  const int n = static_cast<int>(tags.size());
  int i = 0;
  while (i < n) {
    const int len = match(tags, i);
    if (len > 0) {
      out->push_back(Span{i, i + len, kind});
      i += len;
    } else {
      ++i;
    }
  }
}

}  // namespace

std::string_view ToString(SpanKind kind) {
  switch (kind) {
    case SpanKind::kNounPhrase: return "NP";
    case SpanKind::kVerbPhrase: return "VP";
    case SpanKind::kDependentClause: return "DepClause";
  }
  return "NP";
}

std::vector<Span> Chunk(const TaggedSentence &tagged) {
  std::vector<Span> spans;
  GreedyScan(tagged.tags, SpanKind::kNounPhrase, MatchNounPhrase, &spans);
  GreedyScan(tagged.tags, SpanKind::kVerbPhrase, MatchVerbPhrase, &spans);

  const int n = static_cast<int>(tagged.tags.size());
  int i = 0;
  while (i < n) {
    if (!OpensClause(tagged, i)) {
      ++i;
      continue;
    }
    int j = i + 1;
    while (j < n &&
           !OneOf(tagged.sentence.tokens()[j].surface, kClauseBoundary)) {
      ++j;
    }
    spans.push_back(Span{i, j, SpanKind::kDependentClause});
    i = j;
  }
  return spans;
}

}  // namespace stylestat
