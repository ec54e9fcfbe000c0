#include "stylestat/divergence.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "internal/parallel.h"
#include "stylestat/error.h"

namespace stylestat {

std::string_view ToString(DistributionKind kind) {
  return kind == DistributionKind::kCategorical ? "categorical" : "histogram";
}

double JsDivergence(const Distribution &p, const Distribution &q) {
  if (p.kind != q.kind || p.support != q.support || p.probs.size() != q.probs.size()) {
    throw Error(ErrorCode::kSupportMismatch, "distributions do not share a support");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < p.probs.size(); ++i) {
    const double a = p.probs[i];
    const double b = q.probs[i];
    const double m = (a + b) / 2.0;
    double term_a = 0.0;
    double term_b = 0.0;
    if (a > 0.0) term_a = a * std::log2(a / m);
    if (b > 0.0) term_b = b * std::log2(b / m);
    // The sum is commutative, so swapping p and q gives bitwise-equal terms.
    total += term_a + term_b;
  }
  return std::clamp(total / 2.0, 0.0, 1.0);
}

namespace {

std::vector<double> QuantileEdges(std::vector<double> pooled, int bins) {
  std::sort(pooled.begin(), pooled.end());
  const std::size_t n = pooled.size();
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(bins) + 1);
  for (int k = 0; k <= bins; ++k) {
    const double pos = static_cast<double>(k) / bins * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    double e = pooled[lo] + frac * (pooled[hi] - pooled[lo]);
    if (k == bins) e = pooled.back();
    if (edges.empty() || e > edges.back()) edges.push_back(e);
  }
  return edges;
}

Distribution Histogram(std::span<const double> values, const std::vector<double> &edges) {
  Distribution d;
  d.kind = DistributionKind::kHistogram;
  d.support = edges;
  const std::size_t nb = edges.size() - 1;
  d.probs.assign(nb, 0.0);
  for (double v : values) {
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    std::size_t idx = static_cast<std::size_t>(it - edges.begin());
    idx = idx == 0 ? 0 : idx - 1;
    if (idx >= nb) idx = nb - 1;
    d.probs[idx] += 1.0;
  }
  for (double &p : d.probs) p /= static_cast<double>(values.size());
  return d;
}

Distribution Categorical(std::span<const double> values, const std::vector<double> &support) {
  Distribution d;
  d.kind = DistributionKind::kCategorical;
  d.support = support;
  d.probs.assign(support.size(), 0.0);
  for (double v : values) {
    auto it = std::lower_bound(support.begin(), support.end(), v);
    d.probs[static_cast<std::size_t>(it - support.begin())] += 1.0;
  }
  for (double &p : d.probs) p /= static_cast<double>(values.size());
  return d;
}

}  // namespace

std::pair<Distribution, Distribution> FeatureDistributions(std::span<const double> source,
                                                           std::span<const double> target,
                                                           int bins) {
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "bins must be at least 1");
  if (source.empty() || target.empty()) {
    throw Error(ErrorCode::kEmptySplit, "no feature values on one side");
  }
  std::vector<double> pooled(source.begin(), source.end());
  pooled.insert(pooled.end(), target.begin(), target.end());
  std::vector<double> distinct = pooled;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() <= static_cast<std::size_t>(bins)) {
    return {Categorical(source, distinct), Categorical(target, distinct)};
  }
  const std::vector<double> edges = QuantileEdges(std::move(pooled), bins);
  return {Histogram(source, edges), Histogram(target, edges)};
}

std::pair<std::vector<double>, std::vector<double>> SplitByLabel(const FeatureMatrix &matrix,
                                                                 std::size_t col) {
  std::pair<std::vector<double>, std::vector<double>> out;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    (matrix.label(r) == 0 ? out.first : out.second).push_back(matrix.raw(r, col));
  }
  return out;
}

DivergenceReport ComputeDivergenceReport(const std::string &dataset,
                                         const FeatureMatrix &matrix,
                                         const GroupSet &groups, int bins) {
  if (matrix.rows() == 0) throw Error(ErrorCode::kEmptySplit, "matrix has no rows");
  const std::size_t d = matrix.cols();
  const std::size_t n = matrix.rows();

  // Column-major copy of the non-zero raw values, with per-side positions.
  std::vector<std::size_t> side_pos(n);
  std::size_t n0 = 0, n1 = 0;
  for (std::size_t r = 0; r < n; ++r) side_pos[r] = matrix.label(r) == 0 ? n0++ : n1++;
  std::vector<std::vector<std::pair<std::size_t, double>>> by_col(d);
  const auto &off = matrix.row_offsets();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = off[r]; k < off[r + 1]; ++k) {
      by_col[matrix.col_indices()[k]].emplace_back(r, matrix.values()[k]);
    }
  }

  DivergenceReport report;
  report.dataset = dataset;
  report.bins = bins;
  report.features.resize(d);
  internal::ParallelFor(d, [&](std::size_t c) {
    std::vector<double> src(n0, 0.0), tgt(n1, 0.0);
    for (const auto &[r, v] : by_col[c]) {
      (matrix.label(r) == 0 ? src : tgt)[side_pos[r]] = v;
    }
    auto [p, q] = FeatureDistributions(src, tgt, bins);
    FeatureDivergence &f = report.features[c];
    f.name = matrix.schema()[c].name;
    f.group = matrix.schema()[c].group;
    f.js = JsDivergence(p, q);
    f.source = std::move(p);
    f.target = std::move(q);
  });

  std::map<FeatureGroup, std::pair<double, std::size_t>> sums;
  double total = 0.0;
  for (const auto &f : report.features) {
    auto &[s, k] = sums[f.group];
    s += f.js;
    ++k;
    total += f.js;
  }
  for (FeatureGroup g : kAllGroups) {
    auto it = sums.find(g);
    if (!groups.count(g) || it == sums.end()) continue;
    GroupDivergence gd;
    gd.label = std::string(ToString(g));
    gd.n_features = it->second.second;
    gd.value = it->second.first / static_cast<double>(gd.n_features);
    gd.bold = IsBold(gd.value);
    report.groups.push_back(gd);
  }
  report.full.label = "FF";
  report.full.n_features = d;
  report.full.value = d > 0 ? total / static_cast<double>(d) : 0.0;
  report.full.bold = IsBold(report.full.value);
  return report;
}

DivergenceReport ComputeDivergenceReport(const std::string &dataset, const Split &split,
                                         const FeatureExtractor &extractor,
                                         const TagSource *tags, int bins) {
  return ComputeDivergenceReport(dataset, BuildMatrix(split, extractor, tags),
                                 extractor.groups(), bins);
}

std::pair<Distribution, Distribution> FeatureDistributions(const Split &split,
                                                           const FeatureExtractor &extractor,
                                                           const TagSource *tags,
                                                           std::string_view feature,
                                                           int bins) {
  const auto col = extractor.schema()->Find(feature);
  if (!col) {
    throw Error(ErrorCode::kSchemaMismatch,
                "feature '" + std::string(feature) + "' not in the extraction schema");
  }
  const FeatureMatrix m = BuildMatrix(split, extractor, tags);
  const auto [src, tgt] = SplitByLabel(m, *col);
  return FeatureDistributions(src, tgt, bins);
}

}  // namespace stylestat
