#ifndef STYLESTAT_CLASSIFY_H_
#define STYLESTAT_CLASSIFY_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stylestat/annotate.h"
#include "stylestat/corpus.h"
#include "stylestat/error.h"
#include "stylestat/features.h"

namespace stylestat {

struct TrainConfig {
  double lambda = 1.0;
  // When set, the penalty applied to the objective is lambda / n (n = rows).
  bool scale_lambda_by_n = true;
  int max_iter = 5000;
  double tol = 1e-6;  // relative objective change
  // Recorded for reproducibility; the solver itself is deterministic and
  // draws no random numbers.
  std::uint64_t seed = 0;
  bool accelerate = false;  // FISTA momentum (objective no longer monotone)
};

enum class TrainStatus { kConverged, kNotConverged };
std::string_view ToString(TrainStatus status);

struct LogRegModel {
  std::vector<double> weights;  // aligned to schema columns
  double bias = 0.0;
  double lambda = 0.0;   // as configured
  double penalty = 0.0;  // effective l1 strength used in the objective
  std::shared_ptr<const FeatureSchema> schema;
  std::optional<ScalingParams> scaling;
  TrainStatus status = TrainStatus::kConverged;
  int iterations = 0;
  double objective = 0.0;

  // JSON with schema hash and feature list, weights, bias, lambda, penalty
  // and scaling params.
  std::string ToJson() const;
  static LogRegModel FromJson(const std::string &text);
};

struct Prediction {
  int label = 0;
  double probability = 0.5;  // P(label = 1)
};

// Mean logistic loss (1/n) sum log(1 + exp(z_i)) - y_i z_i with
// z_i = w.x_i + b, over the matrix's scaled values.
double SmoothLoss(const FeatureMatrix &matrix, std::span<const double> w, double b);
// Same loss; fills the gradient with respect to w and b.
double SmoothLossGradient(const FeatureMatrix &matrix, std::span<const double> w,
                          double b, std::vector<double> *grad_w, double *grad_b);
// SmoothLoss + penalty * |w|_1.
double Objective(const FeatureMatrix &matrix, std::span<const double> w, double b,
                 double penalty);

double SoftThreshold(double x, double threshold);

struct ProxPoint {
  std::vector<double> w;
  double b = 0.0;
};
// One proximal gradient step of size `step`: gradient step on the smooth
// loss, then soft-thresholding of w (b is not penalized).
ProxPoint ProximalGradientStep(const FeatureMatrix &matrix, const ProxPoint &x,
                               double step, double penalty);

// Optimal intercept of the all-zero-weight model: logit(mean label).
double InterceptOnly(const FeatureMatrix &matrix);
// |(1/n) sum (sigmoid(b*) - y_i) x_i|_inf at b* = InterceptOnly. Any
// penalty at or above this value yields exactly zero weights.
double LambdaMax(const FeatureMatrix &matrix);

// Minimizes Objective by ISTA with backtracking line search, starting from
// w = 0 and b = InterceptOnly. Throws SingleClass when only one label
// occurs. The matrix should carry train-fit scaling.
LogRegModel Train(const FeatureMatrix &matrix, const TrainConfig &config);

// vector must be in scaled space and share the model's schema.
Prediction Predict(const LogRegModel &model, const FeatureVector &vector);

// Unscaled matrices get the model's scaling applied; a matrix scaled with
// other params, or with another schema, throws SchemaMismatch.
double Accuracy(const LogRegModel &model, const FeatureMatrix &matrix);

// --- Ablation ------------------------------------------------------------------

struct AblationCell {
  std::string group;  // "FF" or a FeatureGroup name
  std::optional<double> accuracy;
  std::size_t n_features = 0;
  std::size_t nonzero_weights = 0;
  double lambda = 0.0;
  // "ok", "not_converged", or the error code name of a failed cell.
  std::string status;
  std::string message;
};

struct AblationResult {
  std::string dataset;
  std::vector<AblationCell> cells;  // FF first, then groups in kAllGroups order
};

struct AblationOptions {
  GroupSet groups = AllGroups();
  // Selects lambda per cell by dev accuracy when a dev split exists.
  bool tune_lambda = false;
  std::vector<double> lambda_grid = {0.01, 0.1, 1.0};
  VocabularyOptions vocab;
};

// Shared inputs for feature extraction.
struct ExtractionInputs {
  std::shared_ptr<const SentimentLexicon> lexicon;  // needed for Sub
  const TagSource *tags = nullptr;                  // needed for UPOS/XPOS/Phr
};

// Matrices for train, test and optionally dev over every group whose
// resources are available, with the BoW vocabulary built from train.
struct AblationMatrices {
  FeatureMatrix train;
  FeatureMatrix test;
  std::optional<FeatureMatrix> dev;
  GroupSet available;
  // Why each unavailable group could not be extracted.
  std::map<FeatureGroup, std::pair<ErrorCode, std::string>> missing;
};

AblationMatrices BuildAblationMatrices(const ParallelDataset &dataset,
                                       const ExtractionInputs &inputs,
                                       const AblationOptions &options);

// Runs the FF cell and one cell per requested group: restrict columns, fit
// the scaler on train, train, evaluate on test. Failures are recorded in the
// cell instead of aborting the run.
AblationResult Ablate(const std::string &dataset_name, const AblationMatrices &matrices,
                      const TrainConfig &config, const AblationOptions &options);
AblationResult Ablate(const ParallelDataset &dataset, const ExtractionInputs &inputs,
                      const TrainConfig &config, const AblationOptions &options = {});

}  // namespace stylestat

#endif  // STYLESTAT_CLASSIFY_H_
