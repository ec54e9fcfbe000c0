#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "stylestat/divergence.h"
#include "stylestat/error.h"
#include "support/planted.h"

using namespace stylestat;

namespace {

Distribution Cat(std::vector<double> probs) {
  Distribution d{DistributionKind::kCategorical, {}, std::move(probs)};
  for (std::size_t i = 0; i < d.probs.size(); ++i) d.support.push_back(static_cast<double>(i));
  return d;
}

double Sum(const std::vector<double> &v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("js examples") {
  CHECK(JsDivergence(Cat({0.3, 0.7}), Cat({0.3, 0.7})) == 0.0);
  CHECK(JsDivergence(Cat({1.0, 0.0}), Cat({0.0, 1.0})) == 1.0);
  CHECK(JsDivergence(Cat({0.5, 0.5}), Cat({0.9, 0.1})) ==
        doctest::Approx(0.1467931024360521).epsilon(1e-9));
}

TEST_CASE("js support mismatch") {
  CHECK_THROWS_AS(JsDivergence(Cat({0.5, 0.5}), Cat({0.2, 0.3, 0.5})), Error);
  Distribution h{DistributionKind::kHistogram, {0.0, 1.0, 2.0}, {0.5, 0.5}};
  CHECK_THROWS_AS(JsDivergence(h, Cat({0.5, 0.5})), Error);
}

TEST_CASE("js symmetry, bounds and identity") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> a(6), b(6);
    for (auto &v : a) v = u(rng) < 0.3 ? 0.0 : u(rng);
    for (auto &v : b) v = u(rng) < 0.3 ? 0.0 : u(rng);
    if (Sum(a) == 0.0 || Sum(b) == 0.0) continue;
    const double sa = Sum(a), sb = Sum(b);
    for (auto &v : a) v /= sa;
    for (auto &v : b) v /= sb;
    const double ab = JsDivergence(Cat(a), Cat(b));
    CHECK(ab == JsDivergence(Cat(b), Cat(a)));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(JsDivergence(Cat(a), Cat(a)) == 0.0);
    if (ab <= 1e-12) {
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-6);
    }
  }
}

TEST_CASE("few distinct values give categorical distributions") {
  const std::vector<double> src = {1, 2, 2, 3}, tgt = {2, 3, 3, 3};
  const auto [p, q] = FeatureDistributions(src, tgt, 20);
  CHECK(p.kind == DistributionKind::kCategorical);
  CHECK(p.support == std::vector<double>{1, 2, 3});
  CHECK(p.support == q.support);
  CHECK(p.probs == std::vector<double>{0.25, 0.5, 0.25});
  CHECK(q.probs == std::vector<double>{0.0, 0.25, 0.75});
}

TEST_CASE("many distinct values give shared quantile histograms") {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> src(500), tgt(300);
  for (auto &v : src) v = g(rng);
  for (auto &v : tgt) v = g(rng) + 0.5;
  const auto [p, q] = FeatureDistributions(src, tgt, 20);
  CHECK(p.kind == DistributionKind::kHistogram);
  CHECK(p.support == q.support);
  CHECK(p.support.size() == 21);
  CHECK(p.probs.size() == 20);
  for (std::size_t i = 1; i < p.support.size(); ++i) CHECK(p.support[i] > p.support[i - 1]);
  CHECK(Sum(p.probs) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Sum(q.probs) == doctest::Approx(1.0).epsilon(1e-12));
  // The maximum falls in the closed last bin.
  CHECK(p.support.back() == std::max(*std::max_element(src.begin(), src.end()),
                                     *std::max_element(tgt.begin(), tgt.end())));
}

TEST_CASE("constant feature has zero divergence") {
  const std::vector<double> src(10, 4.0), tgt(7, 4.0);
  const auto [p, q] = FeatureDistributions(src, tgt, 20);
  CHECK(p.probs == std::vector<double>{1.0});
  CHECK(JsDivergence(p, q) == 0.0);
}

TEST_CASE("separated values have divergence one") {
  std::vector<double> src, tgt;
  for (int i = 0; i < 50; ++i) {
    src.push_back(i * 0.01);
    tgt.push_back(10 + i * 0.01);
  }
  const auto [p, q] = FeatureDistributions(src, tgt, 20);
  CHECK(p.kind == DistributionKind::kHistogram);
  CHECK(JsDivergence(p, q) == 1.0);
}

TEST_CASE("empty side is an error") {
  const std::vector<double> some = {1.0}, none;
  CHECK_THROWS_AS(FeatureDistributions(some, none, 20), Error);
  CHECK_THROWS_AS(FeatureDistributions(some, some, 0), Error);
}

TEST_CASE("bold threshold") {
  CHECK(IsBold(0.075));
  CHECK(IsBold(0.2));
  CHECK_FALSE(IsBold(0.0749));
}

TEST_CASE("identical pairs give all-zero report") {
  const ParallelDataset ds = stylestat::testing::MakeIdenticalCorpus({40, 30, 1});
  const FeatureExtractor ex({FeatureGroup::kLexC, FeatureGroup::kRead, FeatureGroup::kSenL,
                             FeatureGroup::kLexD},
                            nullptr, Vocabulary{});
  const DivergenceReport r =
      ComputeDivergenceReport("identical", ds.split(SplitName::kTest), ex, nullptr);
  REQUIRE(r.groups.size() == 4);
  for (const auto &g : r.groups) {
    CHECK(g.value == 0.0);
    CHECK_FALSE(g.bold);
  }
  CHECK(r.full.label == "FF");
  CHECK(r.full.value == 0.0);
  CHECK(r.full.n_features == r.features.size());
}

TEST_CASE("group aggregates and shape") {
  const std::vector<FeatureSpec> specs = {{"senl:words", FeatureGroup::kSenL, false},
                                          {"lexd:unique_unigrams", FeatureGroup::kLexD, true},
                                          {"lexd:unique_bigrams", FeatureGroup::kLexD, true}};
  std::vector<SparseRow> rows;
  std::vector<int> labels;
  for (int i = 0; i < 30; ++i) {
    for (int side = 0; side < 2; ++side) {
      rows.push_back({{0, side == 0 ? 3.0 : 9.0}, {1, 0.5}, {2, side == 0 ? 0.1 : 0.2}});
      labels.push_back(side);
    }
  }
  const FeatureMatrix m(std::make_shared<const FeatureSchema>(specs), rows, labels);
  const DivergenceReport r =
      ComputeDivergenceReport("toy", m, {FeatureGroup::kSenL, FeatureGroup::kLexD, FeatureGroup::kBoW});
  REQUIRE(r.groups.size() == 2);
  CHECK(r.groups[0].label == "LexD");
  CHECK(r.groups[0].value == doctest::Approx(0.5));
  CHECK(r.groups[0].bold);
  CHECK(r.groups[1].label == "SenL");
  CHECK(r.groups[1].n_features == 1);
  CHECK(r.groups[1].value == r.features[0].js);
  CHECK(r.groups[1].value == 1.0);
  CHECK(r.full.value == doctest::Approx(2.0 / 3.0));
  for (const auto &f : r.features) CHECK(f.source.support == f.target.support);
}

TEST_CASE("feature distributions over a split") {
  const ParallelDataset ds = stylestat::testing::MakeLengthCorpus({20, 10, 1});
  const FeatureExtractor ex({FeatureGroup::kSenL}, nullptr, Vocabulary{});
  const auto [p, q] =
      FeatureDistributions(ds.split(SplitName::kTest), ex, nullptr, "senl:words", 20);
  CHECK(p.support == q.support);
  CHECK(JsDivergence(p, q) == 1.0);
  CHECK_THROWS_AS(FeatureDistributions(ds.split(SplitName::kTest), ex, nullptr, "nope", 20), Error);
}
