#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

#include "doctest.h"
#include "stylestat/error.h"
#include "stylestat/features.h"
#include "stylestat/pipeline.h"
#include "support/planted.h"

using namespace stylestat;
using stylestat::testing::TempDir;

namespace {

TaggedSentence Tagged(const std::vector<std::string> &words, const std::vector<std::string> &upos,
                      const std::vector<std::string> &xpos) {
  TaggedSentence t;
  t.sentence = Sentence::FromSurfaces(words);
  for (std::size_t i = 0; i < words.size(); ++i) t.tags.push_back(PosTag{upos[i], xpos[i]});
  return t;
}

double Get(const std::vector<double> &values, const std::vector<std::string> &names,
           const std::string &name) {
  const auto it = std::find(names.begin(), names.end(), name);
  REQUIRE(it != names.end());
  return values[static_cast<std::size_t>(it - names.begin())];
}

Split ToySplit() {
  Split s;
  s.pairs.push_back({0, Sentence("cat cat dog ."), Sentence("The cat is happy.")});
  s.pairs.push_back({1, Sentence("I love you"), Sentence("dog and cat")});
  s.pairs.push_back({2, Sentence("zebra"), Sentence("the good dog")});
  return s;
}

}  // namespace

TEST_CASE("group names") {
  CHECK(ToString(FeatureGroup::kLexC) == "LexC");
  CHECK(ToString(FeatureGroup::kBoW) == "BoW");
  CHECK(ParseFeatureGroup("senl") == FeatureGroup::kSenL);
  CHECK(ParseGroupList("SenL,LexD") == GroupSet{FeatureGroup::kSenL, FeatureGroup::kLexD});
  CHECK_THROWS_AS(ParseFeatureGroup("Nope"), Error);
  CHECK(AllGroups().size() == 9);
}

TEST_CASE("syllable counts") {
  CHECK(CountSyllables("cat") == 1);
  CHECK(CountSyllables("beautiful") == 3);
  CHECK(CountSyllables("little") == 2);
  CHECK(CountSyllables("make") == 1);
  CHECK(CountSyllables("the") == 1);
  CHECK(CountSyllables("rhythm") == 1);
  CHECK_THROWS_AS(CountSyllables("..."), Error);
}

TEST_CASE("lexical complexity") {
  const auto a = ComputeLexicalComplexity(Sentence("cat sat"));
  CHECK(a.avg_word_length == 3.0);
  CHECK(a.avg_syllables == 1.0);
  CHECK(ComputeLexicalComplexity(Sentence("the of and")).avg_syllables_no_stopwords == 0.0);
  CHECK(ComputeLexicalComplexity(Sentence("a")).avg_word_length == 1.0);
  CHECK(ComputeLexicalComplexity(Sentence("cat .")).avg_word_length == 3.0);
}

TEST_CASE("readability") {
  const auto r = ComputeReadability(Sentence("cat sat"));
  CHECK(r.flesch_reading_ease == doctest::Approx(120.205).epsilon(1e-12));
  CHECK(r.flesch_kincaid_grade == doctest::Approx(-3.01).epsilon(1e-12));
  CHECK(r.complex_word_ratio == 0.0);
  CHECK(ComputeReadability(Sentence("beautiful elephant")).complex_word_ratio == 1.0);
  CHECK_THROWS_AS(ComputeReadability(Sentence("! ?")), Error);
}

TEST_CASE("lexical diversity") {
  CHECK(ComputeLexicalDiversity(Sentence("the the the")).unique_unigrams ==
        doctest::Approx(1.0 / 3.0));
  CHECK(ComputeLexicalDiversity(Sentence("word")).unique_bigrams == 0.0);
  CHECK(ComputeLexicalDiversity(Sentence("a b c d")).unique_unigrams == 1.0);
  // Punctuation is removed before bigrams are formed.
  CHECK(ComputeLexicalDiversity(Sentence("a , b")).unique_bigrams == doctest::Approx(0.5));
}

TEST_CASE("pos distribution") {
  const auto t = Tagged({"the", "dog"}, {"DET", "NOUN"}, {"DT", "NN"});
  const auto upos = PosDistribution(t, Tagset::kUpos);
  REQUIRE(upos.size() == UposTags().size());
  CHECK(Get(upos, UposTags(), "DET") == 0.5);
  CHECK(Get(upos, UposTags(), "NOUN") == 0.5);
  CHECK(Get(upos, UposTags(), "VERB") == 0.0);
  const auto punct = PosDistribution(Tagged({".", "!"}, {"PUNCT", "PUNCT"}, {".", "."}), Tagset::kUpos);
  CHECK(Get(punct, UposTags(), "PUNCT") == 1.0);
}

TEST_CASE("pos distributions sum to one") {
  const auto model = TaggerModel::Load(DefaultTaggerModel());
  for (const char *text : {"The cat sat on the mat.", "Wherefore art thou, Romeo?", "!!", "go"}) {
    const auto t = Tag(Sentence(text), model);
    for (Tagset ts : {Tagset::kUpos, Tagset::kXpos}) {
      const auto d = PosDistribution(t, ts);
      CHECK(std::accumulate(d.begin(), d.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("sentence length") {
  const auto l = ComputeSentenceLength(Sentence("Hello, world!"));
  CHECK(l.words == 2);
  CHECK(l.tokens == 4);
  const auto empty = ComputeSentenceLength(Sentence(""));
  CHECK(empty.words == 0);
  CHECK(empty.tokens == 0);
  const auto plain = ComputeSentenceLength(Sentence("a b c"));
  CHECK(plain.words == plain.tokens);
}

TEST_CASE("phrase features") {
  const auto p = ComputePhraseFeatures(Tagged({"the", "big", "dog"}, {"DET", "ADJ", "NOUN"},
                                              {"DT", "JJ", "NN"}));
  CHECK(p.np_count == doctest::Approx(1.0 / 3.0));
  CHECK(p.np_avg_length == 1.0);
  CHECK(p.vp_count == 0.0);
  CHECK(p.vp_avg_length == 0.0);

  // Two NPs of lengths 1 and 3 in an eight-word sentence.
  const auto q = ComputePhraseFeatures(
      Tagged({"dogs", "quickly", "often", "rarely", "the", "big", "cat", "here"},
             {"NOUN", "ADV", "ADV", "ADV", "DET", "ADJ", "NOUN", "ADV"},
             {"NNS", "RB", "RB", "RB", "DT", "JJ", "NN", "RB"}));
  CHECK(q.np_count == doctest::Approx(2.0 / 8.0));
  CHECK(q.np_avg_length == doctest::Approx(2.0 / 8.0));
}

TEST_CASE("subjectivity") {
  const auto lexicon = SentimentLexicon::FromEntries({{"good", {0.7, 0.6}}});
  const auto s = ComputeSubjectivity(Sentence("I love you"), lexicon);
  CHECK(s.first_person == doctest::Approx(1.0 / 3.0));
  CHECK(s.second_person == doctest::Approx(1.0 / 3.0));
  CHECK(s.third_person == 0.0);
  CHECK(s.polarity == 0.0);
  CHECK(s.subjectivity == 0.0);
  const auto g = ComputeSubjectivity(Sentence("good good"), lexicon);
  CHECK(g.polarity == doctest::Approx(0.7));
  CHECK(g.subjectivity == doctest::Approx(0.6));
  CHECK_THROWS_AS(ComputeSubjectivity(Sentence("good"), SentimentLexicon{}), Error);
}

TEST_CASE("shipped sentiment lexicon") {
  const auto lexicon = SentimentLexicon::Load(DefaultLexicon());
  CHECK(lexicon.loaded());
  CHECK(lexicon.size() > 100);
  const SentimentEntry *good = lexicon.Find("good");
  REQUIRE(good != nullptr);
  CHECK(good->polarity > 0.0);
}

TEST_CASE("malformed lexicon") {
  TempDir dir;
  std::ofstream(dir.path() / "lex.tsv") << "good\t2.0\t0.5\n";
  CHECK_THROWS_AS(SentimentLexicon::Load(dir.path() / "lex.tsv"), Error);
}

TEST_CASE("bag of words") {
  const Vocabulary vocab({"cat", "dog"});
  const auto bow = BowFeatures(Sentence("cat cat dog"), vocab);
  CHECK(bow == std::vector<std::pair<std::size_t, double>>{{0, 2.0}, {1, 1.0}});
  CHECK(BowFeatures(Sentence("zebra yak"), vocab).empty());
}

TEST_CASE("vocabulary drops words seen once") {
  const Vocabulary v = Vocabulary::Build(ToySplit());
  CHECK(v.Index("cat").has_value());
  CHECK(v.Index("dog").has_value());
  CHECK_FALSE(v.Index("zebra").has_value());
  CHECK_FALSE(v.Index(".").has_value());
  CHECK(v.words().front() == "cat");
  const Vocabulary capped = Vocabulary::Build(ToySplit(), {1, 2});
  CHECK(capped.size() == 2);
}

TEST_CASE("schema normalization flags") {
  const FeatureSchema schema = BuildSchema(AllGroups(), Vocabulary({"cat"}));
  const std::map<std::string, bool> expected = {
      {"lexc:avg_word_length", false},  {"lexc:avg_syllables", false},
      {"lexc:avg_syllables_no_stopwords", false},
      {"read:complex_words", true},     {"read:flesch_reading_ease", false},
      {"read:flesch_kincaid_grade", false},
      {"lexd:unique_unigrams", true},   {"lexd:unique_bigrams", true},
      {"senl:words", false},            {"senl:tokens", false},
      {"phr:np_count", true},           {"phr:vp_count", true},
      {"phr:np_avg_length", true},      {"phr:vp_avg_length", true},
      {"phr:clause_count", true},       {"phr:clause_avg_length", true},
      {"sub:first_person", true},       {"sub:second_person", true},
      {"sub:third_person", true},       {"sub:polarity", false},
      {"sub:subjectivity", false},      {"bow:cat", false}};
  for (const auto &[name, flag] : expected) {
    const auto idx = schema.Find(name);
    REQUIRE_MESSAGE(idx.has_value(), name);
    CHECK_MESSAGE(schema[*idx].length_normalized == flag, name);
  }
  for (const auto &spec : schema.specs()) {
    if (spec.group == FeatureGroup::kUpos || spec.group == FeatureGroup::kXpos) {
      CHECK(spec.length_normalized);
    }
  }
  CHECK(schema.size() == expected.size() + UposTags().size() + XposTags().size());
}

TEST_CASE("schema restricted to one group") {
  const FeatureSchema senl = BuildSchema({FeatureGroup::kSenL}, Vocabulary{});
  CHECK(senl.size() == 2);
  CHECK(senl.Groups() == std::vector<FeatureGroup>{FeatureGroup::kSenL});
  CHECK_FALSE(senl == BuildSchema({FeatureGroup::kLexD}, Vocabulary{}));
}

TEST_CASE("extractor requires a lexicon for subjectivity") {
  CHECK_THROWS_AS(FeatureExtractor({FeatureGroup::kSub}, nullptr, Vocabulary{}), Error);
}

TEST_CASE("build_matrix layout") {
  const FeatureExtractor ex({FeatureGroup::kSenL}, nullptr, Vocabulary{});
  const Split split = ToySplit();
  const FeatureMatrix m = BuildMatrix(split, ex, nullptr);
  CHECK(m.rows() == 6);
  CHECK(m.cols() == 2);
  CHECK(std::count(m.labels().begin(), m.labels().end(), 0) == 3);
  CHECK(m.label(0) == 0);
  CHECK(m.label(1) == 1);
  CHECK(m.raw(0, 0) == 3.0);
  CHECK(m.raw(0, 1) == 4.0);
  CHECK(m.Row(1).at("senl:tokens") == 5.0);
}

TEST_CASE("build_matrix needs tags for tag groups") {
  const FeatureExtractor ex({FeatureGroup::kUpos}, nullptr, Vocabulary{});
  CHECK(ex.needs_tags());
  try {
    BuildMatrix(ToySplit(), ex, nullptr);
    FAIL("expected TagsUnavailable");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kTagsUnavailable);
  }
}

TEST_CASE("all groups on a tagged split") {
  const auto tags = MakeTagSource("builtin", DefaultTaggerModel());
  const auto lexicon = std::make_shared<const SentimentLexicon>(SentimentLexicon::Load(DefaultLexicon()));
  const Split split = ToySplit();
  const FeatureExtractor ex(AllGroups(), lexicon, Vocabulary::Build(split));
  const FeatureMatrix m = BuildMatrix(split, ex, tags.get());
  CHECK(m.rows() == 6);
  CHECK(m.cols() == ex.schema()->size());
  CHECK(m.bow_vocab() == ex.vocab().words());
}

TEST_CASE("z-score scaling") {
  const ParallelDataset ds = stylestat::testing::MakeVocabularyCorpus({60, 30, 5});
  const FeatureExtractor ex({FeatureGroup::kLexC, FeatureGroup::kSenL, FeatureGroup::kBoW}, nullptr,
                            Vocabulary::Build(ds.split(SplitName::kTrain)));
  const FeatureMatrix train = BuildMatrix(ds.split(SplitName::kTrain), ex, nullptr);
  const ScalingParams params = FitScaler(train);
  const FeatureMatrix scaled = ApplyScaler(train, params);
  for (std::size_t c = 0; c < scaled.cols(); ++c) {
    const auto col = scaled.Column(c);
    const double n = static_cast<double>(col.size());
    const double mean = std::accumulate(col.begin(), col.end(), 0.0) / n;
    double var = 0;
    for (double v : col) var += (v - mean) * (v - mean);
    CHECK(std::abs(mean) <= 1e-9);
    if (params.constant[c]) {
      for (double v : col) CHECK(v == 0.0);
    } else {
      CHECK(std::sqrt(var / n) == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (std::size_t r = 0; r < scaled.rows(); r += 17) {
      CHECK(params.Unscale(c, scaled.at(r, c)) == doctest::Approx(train.raw(r, c)));
    }
  }
  CHECK_THROWS_AS(ApplyScaler(scaled, params), Error);
  const FeatureMatrix test = ApplyScaler(BuildMatrix(ds.split(SplitName::kTest), ex, nullptr), params);
  CHECK(test.scaled());
  const FeatureMatrix senl_only = train.Select({FeatureGroup::kSenL});
  CHECK_THROWS_AS(ApplyScaler(senl_only, params), Error);
}

TEST_CASE("constant column scales to zero") {
  const std::vector<FeatureSpec> specs = {{"senl:words", FeatureGroup::kSenL, false}};
  const FeatureMatrix m(std::make_shared<const FeatureSchema>(specs),
                        {{{0, 4.0}}, {{0, 4.0}}, {{0, 4.0}}}, {0, 1, 0});
  const ScalingParams p = FitScaler(m);
  CHECK(p.constant[0]);
  const FeatureMatrix s = ApplyScaler(m, p);
  for (std::size_t r = 0; r < 3; ++r) CHECK(s.at(r, 0) == 0.0);
}

TEST_CASE("select keeps group columns") {
  const FeatureExtractor ex({FeatureGroup::kLexD, FeatureGroup::kSenL}, nullptr, Vocabulary{});
  const FeatureMatrix m = BuildMatrix(ToySplit(), ex, nullptr);
  const FeatureMatrix s = m.Select({FeatureGroup::kSenL});
  CHECK(s.cols() == 2);
  CHECK(s.rows() == m.rows());
  CHECK(s.raw(2, 0) == m.raw(2, *m.schema().Find("senl:words")));
}

TEST_CASE("matrix cache round-trip") {
  TempDir dir;
  const ParallelDataset ds = stylestat::testing::MakeVocabularyCorpus({30, 10, 5});
  const FeatureExtractor ex({FeatureGroup::kRead, FeatureGroup::kBoW}, nullptr,
                            Vocabulary::Build(ds.split(SplitName::kTrain)));
  const FeatureMatrix m = BuildMatrix(ds.split(SplitName::kTrain), ex, nullptr);
  const ScalingParams p = FitScaler(m);
  WriteMatrixCache(dir.path() / "train", m, &p);
  const FeatureMatrix back = ReadMatrixCache(dir.path() / "train");
  CHECK(back.schema() == m.schema());
  CHECK(back.labels() == m.labels());
  CHECK(back.bow_vocab() == m.bow_vocab());
  CHECK(back.row_offsets() == m.row_offsets());
  CHECK(back.col_indices() == m.col_indices());
  CHECK(back.values() == m.values());
  REQUIRE(back.scaled());
  CHECK(*back.scaling() == p);
}
