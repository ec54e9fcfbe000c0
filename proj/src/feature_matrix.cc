#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "internal/atomic_file.h"
#include "internal/parallel.h"
#include "json.hpp"
#include "stylestat/error.h"
#include "stylestat/features.h"

namespace stylestat {

FeatureMatrix::FeatureMatrix(std::shared_ptr<const FeatureSchema> schema,
                             std::vector<SparseRow> rows, std::vector<int> labels,
                             std::vector<std::string> bow_vocab)
    : schema_(std::move(schema)),
      labels_(std::move(labels)),
      bow_vocab_(std::move(bow_vocab)) {
  if (rows.size() != labels_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "row and label counts differ");
  }
  for (int l : labels_) {
    if (l != 0 && l != 1) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  }
  const std::size_t ncols = schema_->size();
  for (auto &row : rows) {
    std::sort(row.begin(), row.end());
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k].first >= ncols || (k > 0 && row[k].first == row[k - 1].first)) {
        throw Error(ErrorCode::kSchemaMismatch, "bad column index in sparse row");
      }
      if (row[k].second == 0.0) continue;
      cols_.push_back(row[k].first);
      values_.push_back(row[k].second);
    }
    offsets_.push_back(cols_.size());
  }
}

double FeatureMatrix::raw(std::size_t row, std::size_t col) const {
  const auto begin = cols_.begin() + static_cast<std::ptrdiff_t>(offsets_[row]);
  const auto end = cols_.begin() + static_cast<std::ptrdiff_t>(offsets_[row + 1]);
  auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

double FeatureMatrix::at(std::size_t row, std::size_t col) const {
  const double x = raw(row, col);
  return scaling_ ? scaling_->Scale(col, x) : x;
}

FeatureVector FeatureMatrix::Row(std::size_t row) const {
  std::vector<double> dense(cols(), 0.0);
  for (std::size_t k = offsets_[row]; k < offsets_[row + 1]; ++k) {
    dense[cols_[k]] = values_[k];
  }
  if (scaling_) {
    for (std::size_t c = 0; c < dense.size(); ++c) dense[c] = scaling_->Scale(c, dense[c]);
  }
  return FeatureVector(schema_, std::move(dense));
}

std::vector<double> FeatureMatrix::Column(std::size_t col) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, col);
  return out;
}

FeatureMatrix FeatureMatrix::Select(const GroupSet &groups) const {
  std::vector<FeatureSpec> specs;
  std::vector<std::ptrdiff_t> remap(cols(), -1);
  std::vector<std::string> vocab;
  for (std::size_t c = 0; c < cols(); ++c) {
    const FeatureSpec &s = (*schema_)[c];
    if (!groups.count(s.group)) continue;
    remap[c] = static_cast<std::ptrdiff_t>(specs.size());
    specs.push_back(s);
  }
  if (groups.count(FeatureGroup::kBoW)) vocab = bow_vocab_;
  std::vector<SparseRow> rows_out(rows());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t k = offsets_[r]; k < offsets_[r + 1]; ++k) {
      if (remap[cols_[k]] >= 0) {
        rows_out[r].emplace_back(static_cast<std::size_t>(remap[cols_[k]]), values_[k]);
      }
    }
  }
  return FeatureMatrix(std::make_shared<const FeatureSchema>(std::move(specs)),
                       std::move(rows_out), labels_, std::move(vocab));
}

ScalingParams FitScaler(const FeatureMatrix &matrix) {
  const std::size_t n = matrix.rows();
  const std::size_t d = matrix.cols();
  if (n == 0) throw Error(ErrorCode::kEmptySplit, "cannot fit scaler on zero rows");
  std::vector<double> sum(d, 0.0);
  const auto &offsets = matrix.row_offsets();
  const auto &cols = matrix.col_indices();
  const auto &vals = matrix.values();
  for (std::size_t k = 0; k < vals.size(); ++k) sum[cols[k]] += vals[k];
  ScalingParams p;
  p.mean.resize(d);
  for (std::size_t c = 0; c < d; ++c) p.mean[c] = sum[c] / static_cast<double>(n);
  // Two-pass variance: implicit zeros contribute mean^2 each.
  std::vector<double> sq(d, 0.0);
  std::vector<std::size_t> nnz(d, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      const double dev = vals[k] - p.mean[cols[k]];
      sq[cols[k]] += dev * dev;
      ++nnz[cols[k]];
    }
  }
  p.stddev.resize(d);
  p.constant.resize(d);
  for (std::size_t c = 0; c < d; ++c) {
    const double zeros = static_cast<double>(n - nnz[c]);
    const double var = (sq[c] + zeros * p.mean[c] * p.mean[c]) / static_cast<double>(n);
    double sd = std::sqrt(var);
    // Guard against round-off on constant columns.
    if (sd <= 1e-12 * std::max(1.0, std::abs(p.mean[c]))) sd = 0.0;
    p.stddev[c] = sd;
    p.constant[c] = sd == 0.0;
  }
  return p;
}

FeatureMatrix ApplyScaler(const FeatureMatrix &matrix, const ScalingParams &params) {
  if (params.size() != matrix.cols() || params.stddev.size() != matrix.cols() ||
      params.constant.size() != matrix.cols()) {
    throw Error(ErrorCode::kSchemaMismatch, "scaling params do not match schema");
  }
  if (matrix.scaled()) {
    throw Error(ErrorCode::kInvalidArgument, "matrix is already scaled");
  }
  FeatureMatrix out = matrix;
  out.scaling_ = params;
  return out;
}

FeatureMatrix BuildMatrix(const Split &split, const FeatureExtractor &extractor,
                          const TagSource *tags) {
  if (split.pairs.empty()) throw Error(ErrorCode::kEmptySplit, "split has no pairs");
  if (extractor.needs_tags() && tags == nullptr) {
    throw Error(ErrorCode::kTagsUnavailable,
                "UPOS, XPOS and Phr features need a tag source");
  }
  const std::size_t n = split.pairs.size();
  std::vector<SparseRow> rows(2 * n);
  std::vector<int> labels(2 * n);
  internal::ParallelFor(2 * n, [&](std::size_t i) {
    const SentencePair &pair = split.pairs[i / 2];
    const bool target = i % 2 == 1;
    const Sentence &s = target ? pair.target : pair.source;
    labels[i] = target ? 1 : 0;
    if (extractor.needs_tags()) {
      const TaggedSentence tagged =
          tags->TagFor(split.name, target ? Side::kTarget : Side::kSource,
                       static_cast<int>(i / 2), s);
      rows[i] = extractor.Extract(s, &tagged);
    } else {
      rows[i] = extractor.Extract(s, nullptr);
    }
  });
  std::vector<std::string> vocab;
  if (extractor.groups().count(FeatureGroup::kBoW)) vocab = extractor.vocab().words();
  return FeatureMatrix(extractor.schema(), std::move(rows), std::move(labels),
                       std::move(vocab));
}

// --- Cache files ---------------------------------------------------------------

namespace {

using nlohmann::json;

std::filesystem::path WithExt(const std::filesystem::path &stem, const char *ext) {
  return std::filesystem::path(stem.string() + ext);
}

json ScalingToJson(const ScalingParams &p) {
  json j;
  j["mean"] = p.mean;
  j["stddev"] = p.stddev;
  std::vector<bool> c = p.constant;
  j["constant"] = c;
  return j;
}

ScalingParams ScalingFromJson(const json &j) {
  ScalingParams p;
  p.mean = j.at("mean").get<std::vector<double>>();
  p.stddev = j.at("stddev").get<std::vector<double>>();
  p.constant = j.at("constant").get<std::vector<bool>>();
  return p;
}

}  // namespace

void WriteMatrixCache(const std::filesystem::path &stem, const FeatureMatrix &matrix,
                      const ScalingParams *scaling) {
  const FeatureSchema &schema = matrix.schema();
  std::vector<std::size_t> dense_cols;
  std::vector<std::size_t> bow_pos(schema.size(), 0);
  std::size_t nbow = 0;
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (schema[c].group == FeatureGroup::kBoW) {
      bow_pos[c] = nbow++;
    } else {
      dense_cols.push_back(c);
    }
  }

  std::string csv = "label";
  for (std::size_t c : dense_cols) csv += "," + schema[c].name;
  csv += ",bow\n";
  const auto &offsets = matrix.row_offsets();
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    csv += fmt::format("{}", matrix.label(r));
    for (std::size_t c : dense_cols) csv += fmt::format(",{}", matrix.raw(r, c));
    csv += ',';
    bool first = true;
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      const std::size_t c = matrix.col_indices()[k];
      if (schema[c].group != FeatureGroup::kBoW) continue;
      csv += fmt::format("{}{}:{}", first ? "" : " ", bow_pos[c], matrix.values()[k]);
      first = false;
    }
    csv += '\n';
  }

  json side;
  side["format"] = "stylestat-features 1";
  side["schema_hash"] = schema.hash();
  json specs = json::array();
  for (const auto &s : schema.specs()) {
    specs.push_back({{"name", s.name},
                     {"group", std::string(ToString(s.group))},
                     {"length_normalized", s.length_normalized}});
  }
  side["features"] = specs;
  side["bow_vocab"] = matrix.bow_vocab();
  side["rows"] = matrix.rows();
  if (scaling != nullptr) side["scaling"] = ScalingToJson(*scaling);

  internal::WriteFileAtomic(WithExt(stem, ".csv"), csv);
  internal::WriteFileAtomic(WithExt(stem, ".json"), side.dump(2) + "\n");
}

FeatureMatrix ReadMatrixCache(const std::filesystem::path &stem) {
  const auto json_path = WithExt(stem, ".json");
  const auto csv_path = WithExt(stem, ".csv");
  json side;
  try {
    side = json::parse(ReadTextFile(json_path));
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kConfig, e.what(), json_path.string());
  }
  std::vector<FeatureSpec> specs;
  std::vector<std::size_t> dense_cols;
  std::vector<std::size_t> bow_cols;
  try {
    for (const auto &f : side.at("features")) {
      const FeatureGroup g = ParseFeatureGroup(f.at("group").get<std::string>());
      (g == FeatureGroup::kBoW ? bow_cols : dense_cols).push_back(specs.size());
      specs.push_back(FeatureSpec{f.at("name").get<std::string>(), g,
                                  f.at("length_normalized").get<bool>()});
    }
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kConfig, e.what(), json_path.string());
  }
  auto schema = std::make_shared<const FeatureSchema>(std::move(specs));
  if (side.contains("schema_hash") && side["schema_hash"] != schema->hash()) {
    throw Error(ErrorCode::kSchemaMismatch, "schema hash mismatch", json_path.string());
  }

  std::vector<SparseRow> rows;
  std::vector<int> labels;
  std::istringstream in(ReadTextFile(csv_path));
  std::string line;
  int line_no = 0;
  auto bad = [&](const std::string &what) {
    return Error(ErrorCode::kConfig, what, csv_path.string(), line_no);
  };
  auto parse_num = [&](const std::string &text) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception &) {
      throw bad("bad number '" + text + "'");
    }
    if (used != text.size()) throw bad("bad number '" + text + "'");
    return v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) continue;  // header
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != dense_cols.size() + 2) throw bad("wrong column count");
    labels.push_back(static_cast<int>(parse_num(cells[0])));
    SparseRow row;
    for (std::size_t k = 0; k < dense_cols.size(); ++k) {
      const double v = parse_num(cells[k + 1]);
      if (v != 0.0) row.emplace_back(dense_cols[k], v);
    }
    std::istringstream bow(cells.back());
    std::string item;
    while (bow >> item) {
      const std::size_t colon = item.find(':');
      if (colon == std::string::npos) throw bad("bad bow cell");
      const auto pos = static_cast<std::size_t>(parse_num(item.substr(0, colon)));
      if (pos >= bow_cols.size()) throw bad("bow index out of range");
      row.emplace_back(bow_cols[pos], parse_num(item.substr(colon + 1)));
    }
    rows.push_back(std::move(row));
  }
  FeatureMatrix m(schema, std::move(rows), std::move(labels),
                  side.value("bow_vocab", std::vector<std::string>{}));
  if (side.contains("scaling")) m = ApplyScaler(m, ScalingFromJson(side["scaling"]));
  return m;
}

}  // namespace stylestat
