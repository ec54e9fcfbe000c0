// Command-line driver: dataset ingestion, similarity, ablation, divergence,
// BLEU and the combined profile report.

#include <cstdio>
#include <iostream>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "stylestat/annotate.h"
#include "stylestat/bleu.h"
#include "stylestat/error.h"
#include "stylestat/pipeline.h"

namespace {

using namespace stylestat;

struct CommonFlags {
  std::string config;
  std::string tagger = "builtin";
  std::string model;
  std::string lexicon;
  double lambda = 1.0;
  bool raw_lambda = false;
  bool tune_lambda = false;
  bool accelerate = false;
  int max_iter = 5000;
  double tol = 1e-6;
  int bins = 20;
  std::string groups;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string cache_dir;
  bool no_cache = false;
};

void AddConfig(CLI::App *cmd, CommonFlags &f) {
  cmd->add_option("--config", f.config, "dataset config file")->required();
  cmd->add_option("--out-dir", f.out_dir, "directory for output files");
}

void AddAnalysis(CLI::App *cmd, CommonFlags &f) {
  cmd->add_option("--tagger", f.tagger, "builtin | conllu:<dir>");
  cmd->add_option("--model", f.model, "tagger model (default: asset directory)");
  cmd->add_option("--lexicon", f.lexicon, "sentiment lexicon (default: asset directory)");
  cmd->add_option("--groups", f.groups, "comma-separated feature groups, e.g. SenL,LexD");
  cmd->add_option("--cache-dir", f.cache_dir,
                  "feature cache directory (default: <out-dir>/cache)");
  cmd->add_flag("--no-cache", f.no_cache, "disable the feature-matrix cache");
}

void AddTraining(CLI::App *cmd, CommonFlags &f) {
  cmd->add_option("--lambda", f.lambda, "l1 strength (divided by row count unless --raw-lambda)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--raw-lambda", f.raw_lambda, "use --lambda without dividing by row count");
  cmd->add_flag("--tune-lambda", f.tune_lambda,
                "pick lambda from {0.01, 0.1, 1.0} by dev accuracy");
  cmd->add_flag("--fista", f.accelerate, "accelerated proximal gradient");
  cmd->add_option("--max-iter", f.max_iter, "solver iteration cap")->check(CLI::NonNegativeNumber);
  cmd->add_option("--tol", f.tol, "relative objective change for convergence")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "recorded in the report");
}

void AddBins(CLI::App *cmd, CommonFlags &f) {
  cmd->add_option("--bins", f.bins, "histogram bins per feature")->check(CLI::PositiveNumber);
}

RunOptions ToRunOptions(const CommonFlags &f) {
  RunOptions o;
  o.config_path = f.config;
  o.tagger = f.tagger;
  o.model_path = f.model;
  o.lexicon_path = f.lexicon;
  o.train.lambda = f.lambda;
  o.train.scale_lambda_by_n = !f.raw_lambda;
  o.train.max_iter = f.max_iter;
  o.train.tol = f.tol;
  o.train.seed = f.seed;
  o.train.accelerate = f.accelerate;
  o.ablation.tune_lambda = f.tune_lambda;
  if (!f.groups.empty()) o.ablation.groups = ParseGroupList(f.groups);
  o.bins = f.bins;
  if (!f.no_cache) {
    o.cache_dir = f.cache_dir.empty() ? std::filesystem::path(f.out_dir) / "cache"
                                      : std::filesystem::path(f.cache_dir);
  }
  return o;
}

int ReportError(const std::string &code, const std::string &message, const std::string &file,
                int line) {
  nlohmann::ordered_json j;
  j["error"] = code;
  j["message"] = message;
  if (!file.empty()) j["file"] = file;
  if (line > 0) j["line"] = line;
  std::cerr << j.dump() << std::endl;
  return 1;
}

int Run(int argc, char **argv) {
  CLI::App app{"Profiles parallel style-transfer datasets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  CommonFlags f;

  auto *ingest = app.add_subcommand("ingest", "validate a dataset and write its card");
  AddConfig(ingest, f);

  auto *similarity = app.add_subcommand("similarity", "source/target similarity metrics");
  AddConfig(similarity, f);
  std::string sim_split = "train";
  similarity->add_option("--split", sim_split, "train | dev | test");

  auto *ablate = app.add_subcommand("ablate", "feature-group ablation accuracies");
  AddConfig(ablate, f);
  AddAnalysis(ablate, f);
  AddTraining(ablate, f);

  auto *diverge = app.add_subcommand("diverge", "per-group Jensen-Shannon divergence");
  AddConfig(diverge, f);
  AddAnalysis(diverge, f);
  AddBins(diverge, f);

  auto *profile = app.add_subcommand("profile", "similarity, ablation, divergence and BLEU");
  AddConfig(profile, f);
  AddAnalysis(profile, f);
  AddTraining(profile, f);
  AddBins(profile, f);

  auto *bleu = app.add_subcommand("bleu", "corpus BLEU of pre-tokenized files");
  std::string hyp, ref;
  bool bleu_json = false;
  bleu->add_option("--hyp", hyp, "hypotheses, one per line")->required();
  bleu->add_option("--ref", ref, "references, one per line")->required();
  bleu->add_flag("--json", bleu_json, "print JSON instead of the summary line");

  auto *train = app.add_subcommand("train-tagger", "train the perceptron POS tagger");
  std::string conllu, model_out;
  int epochs = 5;
  std::uint64_t tagger_seed = 0;
  train->add_option("--conllu", conllu, "training treebank (CoNLL-U)")->required();
  train->add_option("--out", model_out, "model file to write")->required();
  train->add_option("--epochs", epochs, "training epochs")->check(CLI::NonNegativeNumber);
  train->add_option("--seed", tagger_seed, "shuffle seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return ReportError("UsageError", e.what(), "", 0);
  }

  const std::filesystem::path out_dir = f.out_dir;

  if (*ingest) {
    const ParallelDataset ds = LoadDataset(std::filesystem::path(f.config));
    WriteFileAtomic(out_dir / "card.json", DatasetCardJson(ds.card));
    std::cout << DatasetCardJson(ds.card);
    return 0;
  }
  if (*similarity) {
    const ParallelDataset ds = LoadDataset(std::filesystem::path(f.config));
    const SimilarityReport s = Summarize(ds.split(ParseSplitName(sim_split)));
    WriteFileAtomic(out_dir / "similarity.csv", SimilarityCsv({{ds.card.name, s}}));
    return 0;
  }
  if (*ablate) {
    Pipeline p(ToRunOptions(f));
    WriteFileAtomic(out_dir / "ablation.csv", AblationCsv({p.Ablation()}));
    return 0;
  }
  if (*diverge) {
    Pipeline p(ToRunOptions(f));
    const DivergenceReport r = p.Divergence();
    WriteFileAtomic(out_dir / "divergence.csv", DivergenceCsv({r}));
    WriteFileAtomic(out_dir / "divergence.json", DivergenceJson(r));
    return 0;
  }
  if (*profile) {
    Pipeline p(ToRunOptions(f));
    WriteProfile(RunProfile(p), out_dir);
    return 0;
  }
  if (*bleu) {
    const auto h = LoadTokenizedLines(hyp);
    const auto r = LoadTokenizedLines(ref);
    const BleuScore s = CorpusBleu(h, r);
    std::cout << (bleu_json ? BleuJson({NamedBleu{"bleu", s}}) : BleuLine(s) + "\n");
    return 0;
  }
  if (*train) {
    const auto sentences = LoadConllu(conllu);
    const TaggerModel model = TrainTagger(sentences, epochs, tagger_seed);
    model.Save(model_out);
    std::cout << fmt::format("trained on {} sentences: {}\n", sentences.size(),
                             model.version());
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  try {
    return Run(argc, argv);
  } catch (const stylestat::Error &e) {
    return ReportError(std::string(stylestat::ErrorCodeName(e.code())), e.what(), e.file(),
                       e.line());
  } catch (const std::exception &e) {
    return ReportError("InternalError", e.what(), "", 0);
  }
}
