#include "stylestat/pipeline.h"

#include <cstdlib>
#include <sstream>

#include <fmt/format.h>

#include "internal/atomic_file.h"
#include "json.hpp"
#include "stylestat/error.h"
#include "stylestat/hash.h"

#ifndef STYLESTAT_ASSET_DIR
#define STYLESTAT_ASSET_DIR "data"
#endif

namespace stylestat {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string Num(double v) { return fmt::format("{}", v); }

// Quotes a CSV field when it contains a separator, quote or newline.
std::string Field(const std::string &text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ordered_json CardToJson(const DatasetCard &card) {
  ordered_json j;
  j["name"] = card.name;
  j["style_task"] = card.style_task;
  j["source_class"] = card.source_class;
  j["target_class"] = card.target_class;
  j["domain"] = card.domain;
  j["annotation"] = std::string(ToString(card.annotation));
  ordered_json sizes = ordered_json::object();
  for (const auto &[split, n] : card.sizes) sizes[std::string(ToString(split))] = n;
  j["sizes"] = sizes;
  return j;
}

ordered_json SimilarityToJson(const SimilarityReport &s) {
  ordered_json j;
  j["jaccard"] = s.jaccard_mean;
  j["ld"] = s.ld_mean;
  j["ld_norm"] = s.ld_norm_mean;
  j["f1"] = s.f1_mean;
  j["n_pairs"] = s.n_pairs;
  return j;
}

ordered_json AblationToJson(const AblationResult &r) {
  ordered_json cells = ordered_json::array();
  for (const auto &c : r.cells) {
    ordered_json j;
    j["group"] = c.group;
    j["accuracy"] = c.accuracy ? ordered_json(*c.accuracy) : ordered_json(nullptr);
    j["n_features"] = c.n_features;
    j["nonzero_weights"] = c.nonzero_weights;
    j["lambda"] = c.lambda;
    j["status"] = c.status;
    if (!c.message.empty()) j["message"] = c.message;
    cells.push_back(j);
  }
  return ordered_json{{"dataset", r.dataset}, {"cells", cells}};
}

ordered_json GroupDivToJson(const GroupDivergence &g) {
  ordered_json j;
  j["group"] = g.label;
  j["js"] = g.value;
  j["n_features"] = g.n_features;
  j["bold"] = g.bold;
  return j;
}

ordered_json DivergenceSummaryJson(const DivergenceReport &r) {
  ordered_json groups = ordered_json::array();
  groups.push_back(GroupDivToJson(r.full));
  for (const auto &g : r.groups) groups.push_back(GroupDivToJson(g));
  ordered_json j;
  j["dataset"] = r.dataset;
  j["bins"] = r.bins;
  j["threshold"] = kBoldThreshold;
  j["groups"] = groups;
  return j;
}

ordered_json BleuToJson(const NamedBleu &b) {
  ordered_json j;
  j["label"] = b.label;
  j["score"] = b.score.score;
  j["precisions"] = b.score.precisions;
  j["brevity_penalty"] = b.score.brevity_penalty;
  j["hypothesis_length"] = b.score.hypothesis_length;
  j["reference_length"] = b.score.reference_length;
  return j;
}

std::string Dump(const ordered_json &j) { return j.dump(2) + "\n"; }

}  // namespace

// --- Assets ----------------------------------------------------------------------

std::filesystem::path DefaultAssetDir() {
  if (const char *env = std::getenv("STYLESTAT_ASSETS"); env != nullptr && *env != '\0') {
    return env;
  }
  return STYLESTAT_ASSET_DIR;
}

std::filesystem::path DefaultTaggerModel() {
  return DefaultAssetDir() / "tagger" / "en-perceptron.model";
}

std::filesystem::path DefaultLexicon() { return DefaultAssetDir() / "sentiment-lexicon.tsv"; }

std::unique_ptr<TagSource> MakeTagSource(const std::string &spec,
                                         const std::filesystem::path &model_path) {
  if (spec == "builtin") {
    const auto path = model_path.empty() ? DefaultTaggerModel() : model_path;
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorCode::kModelNotLoaded, "tagger model not found", path.string());
    }
    const std::string content = ReadTextFile(path);
    std::istringstream in(content);
    auto model = std::make_shared<const TaggerModel>(TaggerModel::Read(in, path.string()));
    return std::make_unique<BuiltinTagSource>(model, "builtin:" + Sha256Hex(content));
  }
  constexpr std::string_view kConllu = "conllu:";
  if (spec.rfind(kConllu, 0) == 0) {
    return std::make_unique<ConlluTagSource>(spec.substr(kConllu.size()));
  }
  throw Error(ErrorCode::kConfig,
              "tagger must be 'builtin' or 'conllu:<dir>', got '" + spec + "'");
}

void WriteFileAtomic(const std::filesystem::path &path, std::string_view content) {
  internal::WriteFileAtomic(path, content);
}

// --- Pipeline --------------------------------------------------------------------

Pipeline::Pipeline(RunOptions options)
    : options_(std::move(options)), config_(ParseDatasetConfig(options_.config_path)) {}

Pipeline::~Pipeline() = default;

const ParallelDataset &Pipeline::dataset() {
  if (!dataset_) dataset_ = LoadDataset(config_);
  return *dataset_;
}

const TagSource &Pipeline::tags() {
  if (!tags_) tags_ = MakeTagSource(options_.tagger, options_.model_path);
  return *tags_;
}

std::shared_ptr<const SentimentLexicon> Pipeline::lexicon() {
  if (!lexicon_) {
    const auto path =
        options_.lexicon_path.empty() ? DefaultLexicon() : options_.lexicon_path;
    lexicon_hash_ = Sha256Hex(ReadTextFile(path));
    lexicon_ = std::make_shared<const SentimentLexicon>(SentimentLexicon::Load(path));
  }
  return lexicon_;
}

std::string Pipeline::CacheKey() {
  lexicon();
  Sha256 h;
  h.Add("stylestat-feature-cache 1");
  h.Add(kTokenizerVersion);
  h.Add(tags().Fingerprint());
  h.Add(lexicon_hash_);
  h.Add(std::to_string(options_.ablation.vocab.min_df));
  h.Add(std::to_string(options_.ablation.vocab.max_size));
  for (const auto &[name, split] : dataset().splits) {
    h.Add(ToString(name));
    for (const auto &p : split.pairs) h.Add(p.source.raw()).Add(p.target.raw());
  }
  return h.HexDigest();
}

const AblationMatrices &Pipeline::matrices() {
  if (matrices_) return *matrices_;
  ExtractionInputs inputs{lexicon(), &tags()};
  const bool use_cache = !options_.cache_dir.empty();
  std::filesystem::path dir;
  if (use_cache) {
    dir = options_.cache_dir / CacheKey();
    if (std::filesystem::exists(dir / "complete")) {
      AblationMatrices m;
      m.train = ReadMatrixCache(dir / "train");
      m.test = ReadMatrixCache(dir / "test");
      if (std::filesystem::exists(dir / "dev.json")) m.dev = ReadMatrixCache(dir / "dev");
      // The pipeline always supplies tags and a lexicon, so cached matrices
      // cover every group.
      m.available = AllGroups();
      matrices_ = std::move(m);
      cache_hit_ = true;
      return *matrices_;
    }
  }
  matrices_ = BuildAblationMatrices(dataset(), inputs, options_.ablation);
  if (use_cache) {
    WriteMatrixCache(dir / "train", matrices_->train);
    WriteMatrixCache(dir / "test", matrices_->test);
    if (matrices_->dev) WriteMatrixCache(dir / "dev", *matrices_->dev);
    internal::WriteFileAtomic(dir / "complete", CacheKey() + "\n");
  }
  return *matrices_;
}

SimilarityReport Pipeline::Similarity(SplitName split) {
  return Summarize(dataset().split(split));
}

AblationResult Pipeline::Ablation() {
  return Ablate(config_.card.name, matrices(), options_.train, options_.ablation);
}

DivergenceReport Pipeline::Divergence() {
  return ComputeDivergenceReport(config_.card.name, matrices().test, options_.ablation.groups,
                                 options_.bins);
}

std::vector<NamedBleu> Pipeline::Bleu() {
  std::vector<NamedBleu> out;
  for (const auto &[label, files] : config_.bleu_files) {
    const auto hyp = LoadTokenizedLines(files.source);
    const auto ref = LoadTokenizedLines(files.target);
    out.push_back(NamedBleu{label, CorpusBleu(hyp, ref)});
  }
  return out;
}

std::string Pipeline::ConfigSnapshotJson() {
  ordered_json j;
  j["config"] = options_.config_path.string();
  j["tagger"] = options_.tagger;
  j["tagger_fingerprint"] = tags().Fingerprint();
  lexicon();
  j["lexicon_sha256"] = lexicon_hash_;
  j["tokenizer"] = std::string(kTokenizerVersion);
  j["lambda"] = options_.train.lambda;
  j["scale_lambda_by_n"] = options_.train.scale_lambda_by_n;
  j["max_iter"] = options_.train.max_iter;
  j["tol"] = options_.train.tol;
  j["seed"] = options_.train.seed;
  j["accelerate"] = options_.train.accelerate;
  j["tune_lambda"] = options_.ablation.tune_lambda;
  j["lambda_grid"] = options_.ablation.lambda_grid;
  std::vector<std::string> groups;
  for (FeatureGroup g : options_.ablation.groups) groups.emplace_back(ToString(g));
  j["groups"] = groups;
  j["bins"] = options_.bins;
  j["vocab_min_df"] = options_.ablation.vocab.min_df;
  j["vocab_max_size"] = options_.ablation.vocab.max_size;
  j["cache_key"] = CacheKey();
  return j.dump();
}

// --- Serialization ---------------------------------------------------------------

std::string SimilarityCsv(const std::vector<std::pair<std::string, SimilarityReport>> &rows) {
  std::string out = "dataset,jaccard,ld,ld_norm,f1,n_pairs\n";
  for (const auto &[name, s] : rows) {
    out += fmt::format("{},{},{},{},{},{}\n", Field(name), Num(s.jaccard_mean), Num(s.ld_mean),
                       Num(s.ld_norm_mean), Num(s.f1_mean), s.n_pairs);
  }
  return out;
}

std::string AblationCsv(const std::vector<AblationResult> &results) {
  std::string out = "group,dataset,accuracy,n_features,lambda,status\n";
  for (const auto &r : results) {
    for (const auto &c : r.cells) {
      out += fmt::format("{},{},{},{},{},{}\n", c.group, Field(r.dataset),
                         c.accuracy ? Num(*c.accuracy) : std::string(), c.n_features,
                         Num(c.lambda), c.status);
    }
  }
  return out;
}

std::string DivergenceCsv(const std::vector<DivergenceReport> &reports) {
  std::string out = "group,dataset,js,n_features,bold\n";
  for (const auto &r : reports) {
    auto row = [&](const GroupDivergence &g) {
      out += fmt::format("{},{},{},{},{}\n", g.label, Field(r.dataset), Num(g.value), g.n_features,
                         g.bold ? 1 : 0);
    };
    row(r.full);
    for (const auto &g : r.groups) row(g);
  }
  return out;
}

std::string DivergenceJson(const DivergenceReport &report) {
  ordered_json j = DivergenceSummaryJson(report);
  ordered_json features = ordered_json::array();
  for (const auto &f : report.features) {
    ordered_json fj;
    fj["name"] = f.name;
    fj["group"] = std::string(ToString(f.group));
    fj["js"] = f.js;
    fj["bold"] = IsBold(f.js);
    fj["kind"] = std::string(ToString(f.source.kind));
    fj[f.source.kind == DistributionKind::kHistogram ? "edges" : "values"] = f.source.support;
    fj["source"] = f.source.probs;
    fj["target"] = f.target.probs;
    features.push_back(fj);
  }
  j["features"] = features;
  return Dump(j);
}

std::string DatasetCardJson(const DatasetCard &card) { return Dump(CardToJson(card)); }

std::string BleuJson(const std::vector<NamedBleu> &scores) {
  ordered_json arr = ordered_json::array();
  for (const auto &b : scores) arr.push_back(BleuToJson(b));
  return Dump(arr);
}

std::string BleuLine(const BleuScore &s) {
  const double ratio = s.reference_length == 0
                           ? 0.0
                           : static_cast<double>(s.hypothesis_length) /
                                 static_cast<double>(s.reference_length);
  return fmt::format(
      "BLEU = {:.2f}, {:.1f}/{:.1f}/{:.1f}/{:.1f} (BP={:.3f}, ratio={:.3f}, hyp_len={}, "
      "ref_len={})",
      s.score, 100 * s.precisions[0], 100 * s.precisions[1], 100 * s.precisions[2],
      100 * s.precisions[3], s.brevity_penalty, ratio, s.hypothesis_length,
      s.reference_length);
}

ProfileReport RunProfile(Pipeline &pipeline) {
  ProfileReport r;
  r.card = pipeline.dataset().card;
  r.similarity = pipeline.Similarity(SplitName::kTrain);
  r.ablation = pipeline.Ablation();
  r.divergence = pipeline.Divergence();
  r.bleu = pipeline.Bleu();
  r.config_snapshot_json = pipeline.ConfigSnapshotJson();
  return r;
}

std::string ProfileReportJson(const ProfileReport &report) {
  ordered_json j;
  j["tool"] = {{"name", "stylestat"}, {"version", std::string(kToolVersion)}};
  j["config"] = ordered_json::parse(report.config_snapshot_json);
  j["dataset"] = CardToJson(report.card);
  ordered_json sim = SimilarityToJson(report.similarity);
  sim["dataset"] = report.card.name;
  sim["split"] = "train";
  j["similarity"] = sim;
  j["ablation"] = AblationToJson(report.ablation);
  ordered_json div = DivergenceSummaryJson(report.divergence);
  div["split"] = "test";
  j["divergence"] = div;
  ordered_json bleu = ordered_json::array();
  for (const auto &b : report.bleu) bleu.push_back(BleuToJson(b));
  j["bleu"] = bleu;
  return Dump(j);
}

void WriteProfile(const ProfileReport &report, const std::filesystem::path &out_dir) {
  internal::WriteFileAtomic(out_dir / "report.json", ProfileReportJson(report));
  internal::WriteFileAtomic(out_dir / "similarity.csv",
                            SimilarityCsv({{report.card.name, report.similarity}}));
  internal::WriteFileAtomic(out_dir / "ablation.csv", AblationCsv({report.ablation}));
  internal::WriteFileAtomic(out_dir / "divergence.csv", DivergenceCsv({report.divergence}));
  internal::WriteFileAtomic(out_dir / "divergence.json", DivergenceJson(report.divergence));
}

}  // namespace stylestat
