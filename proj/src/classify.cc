#include "stylestat/classify.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "internal/parallel.h"
#include "json.hpp"
#include "stylestat/error.h"

namespace stylestat {

namespace {

// Per-column affine map from raw to model space: x' = (x - mu) * inv.
// Unscaled matrices use mu = 0, inv = 1; constant columns use inv = 0.
struct ColumnMap {
  std::vector<double> mu;
  std::vector<double> inv;
};

ColumnMap MapFor(const FeatureMatrix &m) {
  ColumnMap map;
  const std::size_t d = m.cols();
  map.mu.assign(d, 0.0);
  map.inv.assign(d, 1.0);
  if (const auto &s = m.scaling()) {
    for (std::size_t c = 0; c < d; ++c) {
      map.mu[c] = s->mean[c];
      map.inv[c] = s->constant[c] ? 0.0 : 1.0 / s->stddev[c];
    }
  }
  return map;
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double Softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

void CheckWidth(const FeatureMatrix &m, std::span<const double> w) {
  if (w.size() != m.cols()) {
    throw Error(ErrorCode::kSchemaMismatch, "weight vector length differs from schema");
  }
}

std::vector<double> Margins(const FeatureMatrix &m, const ColumnMap &map,
                            std::span<const double> w, double b) {
  const std::size_t d = m.cols();
  std::vector<double> v(d);
  double offset = b;
  for (std::size_t c = 0; c < d; ++c) {
    v[c] = w[c] * map.inv[c];
    offset -= v[c] * map.mu[c];
  }
  const auto &off = m.row_offsets();
  const auto &cols = m.col_indices();
  const auto &vals = m.values();
  std::vector<double> z(m.rows(), offset);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double acc = offset;
    for (std::size_t k = off[r]; k < off[r + 1]; ++k) acc += v[cols[k]] * vals[k];
    z[r] = acc;
  }
  return z;
}

double LossFromMargins(const FeatureMatrix &m, const std::vector<double> &z) {
  double loss = 0.0;
  for (std::size_t r = 0; r < z.size(); ++r) {
    loss += Softplus(z[r]) - (m.label(r) == 1 ? z[r] : 0.0);
  }
  return loss / static_cast<double>(z.size());
}

double L1(std::span<const double> w) {
  double s = 0.0;
  for (double x : w) s += std::abs(x);
  return s;
}

double LossAndGradient(const FeatureMatrix &m, const ColumnMap &map,
                       std::span<const double> w, double b, std::vector<double> *gw,
                       double *gb) {
  const std::vector<double> z = Margins(m, map, w, b);
  const double n = static_cast<double>(m.rows());
  const auto &off = m.row_offsets();
  const auto &cols = m.col_indices();
  const auto &vals = m.values();
  std::vector<double> raw(m.cols(), 0.0);
  double rsum = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double res = Sigmoid(z[r]) - m.label(r);
    rsum += res;
    for (std::size_t k = off[r]; k < off[r + 1]; ++k) raw[cols[k]] += res * vals[k];
  }
  gw->assign(m.cols(), 0.0);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    (*gw)[c] = map.inv[c] * (raw[c] - map.mu[c] * rsum) / n;
  }
  *gb = rsum / n;
  return LossFromMargins(m, z);
}

ProxPoint ProxStep(const ProxPoint &x, const std::vector<double> &gw, double gb,
                   double step, double penalty) {
  ProxPoint out;
  out.w.resize(x.w.size());
  for (std::size_t c = 0; c < x.w.size(); ++c) {
    out.w[c] = SoftThreshold(x.w[c] - step * gw[c], step * penalty);
  }
  out.b = x.b - step * gb;
  return out;
}

void RequireBothClasses(const FeatureMatrix &m) {
  std::size_t ones = 0;
  for (int l : m.labels()) ones += l == 1;
  if (ones == 0 || ones == m.rows()) {
    throw Error(ErrorCode::kSingleClass, "training data contains a single class");
  }
}

}  // namespace

std::string_view ToString(TrainStatus status) {
  return status == TrainStatus::kConverged ? "ok" : "not_converged";
}

double SmoothLoss(const FeatureMatrix &matrix, std::span<const double> w, double b) {
  CheckWidth(matrix, w);
  return LossFromMargins(matrix, Margins(matrix, MapFor(matrix), w, b));
}

double SmoothLossGradient(const FeatureMatrix &matrix, std::span<const double> w,
                          double b, std::vector<double> *grad_w, double *grad_b) {
  CheckWidth(matrix, w);
  return LossAndGradient(matrix, MapFor(matrix), w, b, grad_w, grad_b);
}

double Objective(const FeatureMatrix &matrix, std::span<const double> w, double b,
                 double penalty) {
  return SmoothLoss(matrix, w, b) + penalty * L1(w);
}

double SoftThreshold(double x, double threshold) {
  if (x > threshold) return x - threshold;
  if (x < -threshold) return x + threshold;
  return 0.0;
}

ProxPoint ProximalGradientStep(const FeatureMatrix &matrix, const ProxPoint &x,
                               double step, double penalty) {
  std::vector<double> gw;
  double gb = 0.0;
  SmoothLossGradient(matrix, x.w, x.b, &gw, &gb);
  return ProxStep(x, gw, gb, step, penalty);
}

double InterceptOnly(const FeatureMatrix &matrix) {
  RequireBothClasses(matrix);
  std::size_t ones = 0;
  for (int l : matrix.labels()) ones += l == 1;
  const double p = static_cast<double>(ones) / static_cast<double>(matrix.rows());
  return std::log(p / (1.0 - p));
}

double LambdaMax(const FeatureMatrix &matrix) {
  const double b = InterceptOnly(matrix);
  const std::vector<double> zero(matrix.cols(), 0.0);
  std::vector<double> gw;
  double gb = 0.0;
  SmoothLossGradient(matrix, zero, b, &gw, &gb);
  double mx = 0.0;
  for (double g : gw) mx = std::max(mx, std::abs(g));
  return mx;
}

LogRegModel Train(const FeatureMatrix &matrix, const TrainConfig &config) {
  if (!(config.lambda > 0.0) || !(config.tol > 0.0) || config.max_iter < 0) {
    throw Error(ErrorCode::kInvalidArgument, "lambda and tol must be positive");
  }
  RequireBothClasses(matrix);
  const ColumnMap map = MapFor(matrix);
  const double n = static_cast<double>(matrix.rows());
  const double penalty = config.scale_lambda_by_n ? config.lambda / n : config.lambda;

  LogRegModel model;
  model.lambda = config.lambda;
  model.penalty = penalty;
  model.schema = matrix.schema_ptr();
  model.scaling = matrix.scaling();

  ProxPoint x{std::vector<double>(matrix.cols(), 0.0), InterceptOnly(matrix)};

  // At or above LambdaMax the optimality conditions hold at (0, b*), so the
  // iteration would only shuffle round-off; return the exact solution.
  if (penalty >= LambdaMax(matrix)) {
    model.weights = x.w;
    model.bias = x.b;
    model.objective = Objective(matrix, x.w, x.b, penalty);
    model.status = TrainStatus::kConverged;
    return model;
  }

  std::vector<double> gw;
  double gb = 0.0;
  double f_x = LossAndGradient(matrix, map, x.w, x.b, &gw, &gb);
  double obj = f_x + penalty * L1(x.w);
  double step = 1.0;

  // FISTA state.
  ProxPoint prev = x;
  double t_mom = 1.0;

  model.status = TrainStatus::kNotConverged;
  int it = 0;
  for (; it < config.max_iter; ++it) {
    ProxPoint y = x;
    double f_y = f_x;
    std::vector<double> gy = gw;
    double gyb = gb;
    if (config.accelerate && it > 0) {
      const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom)) / 2.0;
      const double beta = (t_mom - 1.0) / t_next;
      for (std::size_t c = 0; c < y.w.size(); ++c) {
        y.w[c] = x.w[c] + beta * (x.w[c] - prev.w[c]);
      }
      y.b = x.b + beta * (x.b - prev.b);
      t_mom = t_next;
      f_y = LossAndGradient(matrix, map, y.w, y.b, &gy, &gyb);
    }

    step *= 2.0;
    ProxPoint next;
    double f_next = 0.0;
    for (;;) {
      next = ProxStep(y, gy, gyb, step, penalty);
      f_next = SmoothLoss(matrix, next.w, next.b);
      double lin = gyb * (next.b - y.b);
      double sq = (next.b - y.b) * (next.b - y.b);
      for (std::size_t c = 0; c < next.w.size(); ++c) {
        const double d = next.w[c] - y.w[c];
        lin += gy[c] * d;
        sq += d * d;
      }
      if (f_next <= f_y + lin + sq / (2.0 * step) || step < 1e-20) break;
      step *= 0.5;
    }

    prev = std::move(x);
    x = std::move(next);
    f_x = LossAndGradient(matrix, map, x.w, x.b, &gw, &gb);
    const double new_obj = f_x + penalty * L1(x.w);
    const double change = std::abs(obj - new_obj) / std::max(std::abs(obj), 1e-300);
    obj = new_obj;
    if (change <= config.tol) {
      model.status = TrainStatus::kConverged;
      ++it;
      break;
    }
  }
  model.weights = std::move(x.w);
  model.bias = x.b;
  model.iterations = it;
  model.objective = obj;
  return model;
}

Prediction Predict(const LogRegModel &model, const FeatureVector &vector) {
  if (!model.schema || !(vector.schema() == *model.schema) ||
      vector.size() != model.weights.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "vector schema differs from model schema");
  }
  double z = model.bias;
  for (std::size_t c = 0; c < vector.size(); ++c) z += model.weights[c] * vector[c];
  Prediction p;
  p.probability = Sigmoid(z);
  p.label = p.probability >= 0.5 ? 1 : 0;
  return p;
}

double Accuracy(const LogRegModel &model, const FeatureMatrix &matrix) {
  if (!model.schema || !(matrix.schema() == *model.schema)) {
    throw Error(ErrorCode::kSchemaMismatch, "matrix schema differs from model schema");
  }
  const FeatureMatrix *m = &matrix;
  FeatureMatrix scaled;
  if (matrix.scaled()) {
    if (model.scaling && !(*matrix.scaling() == *model.scaling)) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "matrix was scaled with different parameters than the model");
    }
  } else if (model.scaling) {
    scaled = ApplyScaler(matrix, *model.scaling);
    m = &scaled;
  }
  if (m->rows() == 0) return 0.0;
  const std::vector<double> z = Margins(*m, MapFor(*m), model.weights, model.bias);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < z.size(); ++r) {
    const int label = Sigmoid(z[r]) >= 0.5 ? 1 : 0;
    correct += label == m->label(r);
  }
  return static_cast<double>(correct) / static_cast<double>(z.size());
}

// --- Model JSON ----------------------------------------------------------------

std::string LogRegModel::ToJson() const {
  using nlohmann::json;
  json j;
  j["format"] = "stylestat-logreg 1";
  j["schema_hash"] = schema ? schema->hash() : "";
  json features = json::array();
  if (schema) {
    for (const auto &s : schema->specs()) {
      features.push_back({{"name", s.name},
                          {"group", std::string(ToString(s.group))},
                          {"length_normalized", s.length_normalized}});
    }
  }
  j["features"] = features;
  j["weights"] = weights;
  j["bias"] = bias;
  j["lambda"] = lambda;
  j["penalty"] = penalty;
  j["status"] = std::string(ToString(status));
  j["iterations"] = iterations;
  j["objective"] = objective;
  if (scaling) {
    j["scaling"] = {{"mean", scaling->mean},
                    {"stddev", scaling->stddev},
                    {"constant", std::vector<bool>(scaling->constant)}};
  }
  return j.dump(2) + "\n";
}

LogRegModel LogRegModel::FromJson(const std::string &text) {
  using nlohmann::json;
  try {
    const json j = json::parse(text);
    LogRegModel m;
    std::vector<FeatureSpec> specs;
    for (const auto &f : j.at("features")) {
      specs.push_back(FeatureSpec{f.at("name").get<std::string>(),
                                  ParseFeatureGroup(f.at("group").get<std::string>()),
                                  f.at("length_normalized").get<bool>()});
    }
    m.schema = std::make_shared<const FeatureSchema>(std::move(specs));
    if (j.at("schema_hash").get<std::string>() != m.schema->hash()) {
      throw Error(ErrorCode::kSchemaMismatch, "schema hash does not match feature list");
    }
    m.weights = j.at("weights").get<std::vector<double>>();
    if (m.weights.size() != m.schema->size()) {
      throw Error(ErrorCode::kSchemaMismatch, "weight count differs from schema");
    }
    m.bias = j.at("bias").get<double>();
    m.lambda = j.at("lambda").get<double>();
    m.penalty = j.at("penalty").get<double>();
    m.status = j.value("status", "ok") == "ok" ? TrainStatus::kConverged
                                               : TrainStatus::kNotConverged;
    m.iterations = j.value("iterations", 0);
    m.objective = j.value("objective", 0.0);
    if (j.contains("scaling")) {
      ScalingParams p;
      p.mean = j["scaling"].at("mean").get<std::vector<double>>();
      p.stddev = j["scaling"].at("stddev").get<std::vector<double>>();
      p.constant = j["scaling"].at("constant").get<std::vector<bool>>();
      m.scaling = std::move(p);
    }
    return m;
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kConfig, std::string("bad model JSON: ") + e.what());
  }
}

// --- Ablation ------------------------------------------------------------------

AblationMatrices BuildAblationMatrices(const ParallelDataset &dataset,
                                       const ExtractionInputs &inputs,
                                       const AblationOptions &options) {
  const Split &train = dataset.split(SplitName::kTrain);
  const Split &test = dataset.split(SplitName::kTest);

  AblationMatrices out;
  out.available = AllGroups();
  if (inputs.tags == nullptr) {
    for (FeatureGroup g : kAllGroups) {
      if (NeedsTags(g)) {
        out.available.erase(g);
        out.missing[g] = {ErrorCode::kTagsUnavailable, "no tag source configured"};
      }
    }
  }
  if (!inputs.lexicon || !inputs.lexicon->loaded()) {
    out.available.erase(FeatureGroup::kSub);
    out.missing[FeatureGroup::kSub] = {ErrorCode::kLexiconNotLoaded,
                                       "no sentiment lexicon loaded"};
  }
  Vocabulary vocab;
  if (out.available.count(FeatureGroup::kBoW)) vocab = Vocabulary::Build(train, options.vocab);
  const FeatureExtractor extractor(out.available, inputs.lexicon, std::move(vocab));
  out.train = BuildMatrix(train, extractor, inputs.tags);
  out.test = BuildMatrix(test, extractor, inputs.tags);
  if (dataset.has(SplitName::kDev)) {
    out.dev = BuildMatrix(dataset.split(SplitName::kDev), extractor, inputs.tags);
  }
  return out;
}

namespace {

struct CellSpec {
  std::string label;
  GroupSet groups;
};

AblationCell RunCell(const CellSpec &spec, const AblationMatrices &mats,
                     const TrainConfig &config, const AblationOptions &options) {
  AblationCell cell;
  cell.group = spec.label;
  cell.lambda = config.lambda;
  for (FeatureGroup g : spec.groups) {
    auto it = mats.missing.find(g);
    if (it != mats.missing.end()) {
      cell.status = std::string(ErrorCodeName(it->second.first));
      cell.message = std::string(ToString(g)) + ": " + it->second.second;
      return cell;
    }
  }
  try {
    const FeatureMatrix train_raw = mats.train.Select(spec.groups);
    const ScalingParams params = FitScaler(train_raw);
    const FeatureMatrix train = ApplyScaler(train_raw, params);
    cell.n_features = train.cols();

    TrainConfig chosen = config;
    if (options.tune_lambda && mats.dev && !options.lambda_grid.empty()) {
      const FeatureMatrix dev = ApplyScaler(mats.dev->Select(spec.groups), params);
      double best_acc = -1.0;
      double best_lambda = options.lambda_grid.front();
      for (double lambda : options.lambda_grid) {
        TrainConfig c = config;
        c.lambda = lambda;
        const double acc = Accuracy(Train(train, c), dev);
        // Ties go to the larger lambda (the sparser model).
        if (acc > best_acc || (acc == best_acc && lambda > best_lambda)) {
          best_acc = acc;
          best_lambda = lambda;
        }
      }
      chosen.lambda = best_lambda;
    }
    const LogRegModel model = Train(train, chosen);
    const FeatureMatrix test = ApplyScaler(mats.test.Select(spec.groups), params);
    cell.accuracy = Accuracy(model, test);
    cell.lambda = chosen.lambda;
    cell.nonzero_weights = static_cast<std::size_t>(
        std::count_if(model.weights.begin(), model.weights.end(),
                      [](double w) { return w != 0.0; }));
    cell.status = std::string(ToString(model.status));
  } catch (const Error &e) {
    cell.accuracy.reset();
    cell.status = std::string(ErrorCodeName(e.code()));
    cell.message = e.what();
  }
  return cell;
}

}  // namespace

AblationResult Ablate(const std::string &dataset_name, const AblationMatrices &matrices,
                      const TrainConfig &config, const AblationOptions &options) {
  std::vector<CellSpec> specs;
  specs.push_back(CellSpec{"FF", AllGroups()});
  for (FeatureGroup g : kAllGroups) {
    if (options.groups.count(g)) specs.push_back(CellSpec{std::string(ToString(g)), {g}});
  }
  AblationResult result;
  result.dataset = dataset_name;
  result.cells.resize(specs.size());
  internal::ParallelFor(specs.size(), [&](std::size_t i) {
    result.cells[i] = RunCell(specs[i], matrices, config, options);
  });
  return result;
}

AblationResult Ablate(const ParallelDataset &dataset, const ExtractionInputs &inputs,
                      const TrainConfig &config, const AblationOptions &options) {
  return Ablate(dataset.card.name, BuildAblationMatrices(dataset, inputs, options), config,
                options);
}

}  // namespace stylestat
