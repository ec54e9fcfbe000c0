#ifndef STYLESTAT_DIVERGENCE_H_
#define STYLESTAT_DIVERGENCE_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stylestat/annotate.h"
#include "stylestat/corpus.h"
#include "stylestat/features.h"

namespace stylestat {

inline constexpr double kBoldThreshold = 0.075;
inline bool IsBold(double value) { return value >= kBoldThreshold; }

enum class DistributionKind { kCategorical, kHistogram };
std::string_view ToString(DistributionKind kind);

// Categorical: support lists the category values and probs has one entry
// per value. Histogram: support lists strictly increasing bin edges and probs
// has one entry per bin (support.size() - 1).
struct Distribution {
  DistributionKind kind = DistributionKind::kCategorical;
  std::vector<double> support;
  std::vector<double> probs;

  bool operator==(const Distribution &other) const = default;
};

// Base-2 Jensen-Shannon divergence in [0, 1]. Throws SupportMismatch when the
// two distributions do not share kind and support.
double JsDivergence(const Distribution &p, const Distribution &q);

// Source and target distributions over a shared support computed from the
// pooled values. When the pooled values take at most `bins` distinct values
// the distributions are categorical over those values; otherwise they are
// histograms over quantile edges (linear interpolation, duplicates removed,
// last bin closed). Throws EmptySplit when either side is empty.
std::pair<Distribution, Distribution> FeatureDistributions(std::span<const double> source,
                                                           std::span<const double> target,
                                                           int bins);

struct FeatureDivergence {
  std::string name;
  FeatureGroup group;
  double js = 0.0;
  Distribution source;
  Distribution target;
};

struct GroupDivergence {
  std::string label;  // "FF" or a FeatureGroup name
  double value = 0.0;  // arithmetic mean of the member features' JS
  std::size_t n_features = 0;
  bool bold = false;
};

struct DivergenceReport {
  std::string dataset;
  int bins = 20;
  std::vector<FeatureDivergence> features;
  // One entry per requested group, in kAllGroups order.
  std::vector<GroupDivergence> groups;
  // Mean over every feature in the matrix.
  GroupDivergence full;
};

// Feature values of the label-0 rows and the label-1 rows of column col.
std::pair<std::vector<double>, std::vector<double>> SplitByLabel(const FeatureMatrix &matrix,
                                                                 std::size_t col);

// Per-feature JS over an unscaled matrix, aggregated for the groups present
// in both `groups` and the schema.
DivergenceReport ComputeDivergenceReport(const std::string &dataset,
                                         const FeatureMatrix &matrix,
                                         const GroupSet &groups, int bins = 20);

// Extracts the split with the extractor, then computes the report.
DivergenceReport ComputeDivergenceReport(const std::string &dataset, const Split &split,
                                         const FeatureExtractor &extractor,
                                         const TagSource *tags, int bins = 20);

// Distributions of one named feature over a split.
std::pair<Distribution, Distribution> FeatureDistributions(const Split &split,
                                                           const FeatureExtractor &extractor,
                                                           const TagSource *tags,
                                                           std::string_view feature,
                                                           int bins);

}  // namespace stylestat

#endif  // STYLESTAT_DIVERGENCE_H_
