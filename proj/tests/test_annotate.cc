#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "stylestat/annotate.h"
#include "stylestat/error.h"
#include "stylestat/pipeline.h"
#include "support/planted.h"

using namespace stylestat;
using stylestat::testing::TempDir;

namespace {

TaggedSentence Tagged(const std::vector<std::string> &words, const std::vector<std::string> &xpos) {
  TaggedSentence t;
  t.sentence = Sentence::FromSurfaces(words);
  for (const auto &x : xpos) t.tags.push_back(PosTag{"X", x});
  return t;
}

std::vector<TaggedSentence> Silver() {
  static const auto sentences = LoadConllu(DefaultAssetDir() / "tagger" / "en-silver.conllu");
  return sentences;
}

const TaggerModel &Shipped() {
  static const TaggerModel model = TaggerModel::Load(DefaultTaggerModel());
  return model;
}

double TokenAccuracy(const TaggerModel &model, std::span<const TaggedSentence> gold) {
  std::size_t right = 0, total = 0;
  for (const auto &g : gold) {
    const auto predicted = model.Predict(g.sentence);
    for (std::size_t i = 0; i < g.tags.size(); ++i) {
      right += predicted[i].xpos == g.tags[i].xpos;
      ++total;
    }
  }
  return static_cast<double>(right) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("inventories") {
  CHECK(UposTags().size() == 17);
  CHECK(IsUpos("NOUN"));
  CHECK(IsXpos("VBZ"));
  CHECK(IsXpos("HYPH"));
  CHECK_FALSE(IsXpos("NOUN"));
}

TEST_CASE("shipped model tags determiners and punctuation") {
  const TaggedSentence t = Tag(Sentence("the dog barked ."), Shipped());
  REQUIRE(t.tags.size() == 4);
  CHECK(t.tags[0] == PosTag{"DET", "DT"});
  CHECK(t.tags[3] == PosTag{"PUNCT", "."});
  const TaggedSentence lone = Tag(Sentence("the"), Shipped());
  CHECK(lone.tags[0] == PosTag{"DET", "DT"});
}

TEST_CASE("tag errors") {
  CHECK_THROWS_AS(Tag(Sentence("hello"), TaggerModel{}), Error);
  CHECK_THROWS_AS(Tag(Sentence(""), Shipped()), Error);
}

TEST_CASE("tag output length equals token count") {
  for (const char *text : {"A", "Don't stop, please!", "He said \"no\" (twice) -- then left..."}) {
    const Sentence s(text);
    CHECK(Tag(s, Shipped()).tags.size() == s.size());
  }
}

TEST_CASE("training self-consistency and determinism") {
  const auto silver = Silver();
  REQUIRE(silver.size() > 400);
  const std::span<const TaggedSentence> sample(silver.data(), 150);
  std::size_t tokens = 0;
  for (const auto &s : sample) tokens += s.tags.size();
  REQUIRE(tokens >= 1000);
  const TaggerModel a = TrainTagger(sample, 5, 3);
  CHECK(TokenAccuracy(a, sample) >= 0.95);

  const TaggerModel b = TrainTagger(sample, 5, 3);
  const std::span<const TaggedSentence> held(silver.data() + 150, 100);
  for (const auto &s : held) CHECK(a.Predict(s.sentence) == b.Predict(s.sentence));
}

TEST_CASE("held-out silver sentences") {
  // The shipped model saw every silver sentence, so retrain without the tail.
  const auto silver = Silver();
  const std::size_t cut = silver.size() - 400;
  const TaggerModel model =
      TrainTagger(std::span<const TaggedSentence>(silver.data(), cut), 3, 1);
  const double acc = TokenAccuracy(model, std::span<const TaggedSentence>(silver.data() + cut, 400));
  MESSAGE("held-out XPOS accuracy " << acc);
  CHECK(acc >= 0.90);
}

TEST_CASE("zero epochs predicts the most frequent tag") {
  const std::vector<TaggedSentence> data = {
      Tagged({"a", "b", "c"}, {"NN", "NN", "VB"}), Tagged({"d", "e"}, {"NN", "JJ"})};
  const TaggerModel m = TrainTagger(data, 0);
  for (const auto &t : m.Predict(Sentence("x y z"))) CHECK(t.xpos == "NN");
}

TEST_CASE("unknown tags are rejected") {
  const std::vector<TaggedSentence> data = {Tagged({"a"}, {"NOTATAG"})};
  CHECK_THROWS_AS(TrainTagger(data, 1), Error);
}

TEST_CASE("model save and load round-trip") {
  TempDir dir;
  const auto silver = Silver();
  const std::span<const TaggedSentence> sample(silver.data(), 60);
  const TaggerModel m = TrainTagger(sample, 2, 9);
  m.Save(dir.path() / "m.model");
  const TaggerModel back = TaggerModel::Load(dir.path() / "m.model");
  for (const auto &s : sample) CHECK(back.Predict(s.sentence) == m.Predict(s.sentence));
}

TEST_CASE("conllu parsing") {
  const std::string two =
      "# text = The cat sat.\n"
      "1\tThe\t_\tDET\tDT\t_\t_\t_\t_\t_\n"
      "2\tcat\t_\tNOUN\tNN\t_\t_\t_\t_\t_\n"
      "3\tsat\t_\tVERB\tVBD\t_\t_\t_\t_\t_\n"
      "4\t.\t_\tPUNCT\t.\t_\t_\t_\t_\t_\n"
      "\n"
      "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
      "1\tdo\t_\tAUX\tVBP\t_\t_\t_\t_\t_\n"
      "2\tn't\t_\tPART\tRB\t_\t_\t_\t_\t_\n"
      "3\tgo\t_\tVERB\tVB\t_\t_\t_\t_\t_\n"
      "\n";
  const auto parsed = ParseConllu(two, "inline");
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].sentence.raw() == "The cat sat.");
  CHECK(parsed[0].tags[2] == PosTag{"VERB", "VBD"});
  REQUIRE(parsed[1].tags.size() == 3);
  CHECK(parsed[1].sentence.tokens()[1].surface == "n't");
}

TEST_CASE("conllu with nine columns is malformed") {
  const std::string bad = "1\tThe\t_\tDET\tDT\t_\t_\t_\t_\n\n";
  try {
    ParseConllu(bad, "bad.conllu");
    FAIL("expected MalformedConllu");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kMalformedConllu);
    CHECK(e.line() == 1);
  }
}

TEST_CASE("conllu write and load round-trip") {
  TempDir dir;
  const auto silver = Silver();
  const std::vector<TaggedSentence> sample(silver.begin(), silver.begin() + 25);
  WriteConllu(dir.path() / "x.conllu", sample);
  CHECK(LoadConllu(dir.path() / "x.conllu") == sample);
}

TEST_CASE("chunk examples") {
  CHECK(Chunk(Tagged({"the", "big", "dog"}, {"DT", "JJ", "NN"})) ==
        std::vector<Span>{{0, 3, SpanKind::kNounPhrase}});
  const auto spans = Chunk(Tagged({"she", "likes", "the", "dog"}, {"PRP", "VBZ", "DT", "NN"}));
  CHECK(std::count(spans.begin(), spans.end(), Span{1, 2, SpanKind::kVerbPhrase}) == 1);
  CHECK(std::count(spans.begin(), spans.end(), Span{2, 4, SpanKind::kNounPhrase}) == 1);
  for (const auto &s : Chunk(Tagged({"the", "red", "dog"}, {"DT", "JJ", "NN"}))) {
    CHECK(s.kind != SpanKind::kVerbPhrase);
  }
}

TEST_CASE("chunk dependent clause") {
  const auto spans = Chunk(Tagged({"I", "left", "because", "it", "rained", ",", "sadly"},
                                  {"PRP", "VBD", "IN", "PRP", "VBD", ",", "RB"}));
  CHECK(std::count(spans.begin(), spans.end(), Span{2, 5, SpanKind::kDependentClause}) == 1);
}

TEST_CASE("chunk spans are well formed and do not overlap") {
  const auto silver = Silver();
  const std::set<std::string> nouns = {"NN", "NNS", "NNP", "NNPS"};
  const std::set<std::string> verbs = {"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"};
  for (std::size_t k = 0; k < 300; ++k) {
    const auto &t = silver[k];
    const int n = static_cast<int>(t.tags.size());
    int last_end[3] = {0, 0, 0};
    for (const Span &s : Chunk(t)) {
      REQUIRE(0 <= s.start);
      REQUIRE(s.start < s.end);
      REQUIRE(s.end <= n);
      const int kind = static_cast<int>(s.kind);
      CHECK(s.start >= last_end[kind]);
      last_end[kind] = s.end;
      if (s.kind == SpanKind::kNounPhrase) CHECK(nouns.count(t.tags[s.end - 1].xpos) == 1);
      if (s.kind == SpanKind::kVerbPhrase) CHECK(verbs.count(t.tags[s.end - 1].xpos) == 1);
    }
  }
}

TEST_CASE("conllu tag source") {
  TempDir dir;
  const std::vector<TaggedSentence> src = {Tagged({"a", "b"}, {"DT", "NN"})};
  const std::vector<TaggedSentence> tgt = {Tagged({"c"}, {"NN"})};
  WriteConllu(dir.path() / "train.source.conllu", src);
  WriteConllu(dir.path() / "train.target.conllu", tgt);
  const ConlluTagSource tags(dir.path());
  const auto t = tags.TagFor(SplitName::kTrain, Side::kTarget, 0, Sentence("c"));
  CHECK(t.tags[0].xpos == "NN");
  CHECK_THROWS_AS(tags.TagFor(SplitName::kTest, Side::kSource, 0, Sentence("a b")), Error);
  CHECK_FALSE(tags.Fingerprint().empty());
}
