#ifndef STYLESTAT_PIPELINE_H_
#define STYLESTAT_PIPELINE_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stylestat/annotate.h"
#include "stylestat/bleu.h"
#include "stylestat/classify.h"
#include "stylestat/corpus.h"
#include "stylestat/divergence.h"
#include "stylestat/features.h"
#include "stylestat/similarity.h"

namespace stylestat {

inline constexpr std::string_view kToolVersion = "1.0.0";

// Directory holding tagger/en-perceptron.model and sentiment-lexicon.tsv:
// $STYLESTAT_ASSETS when set, else the data directory of the source tree.
std::filesystem::path DefaultAssetDir();
std::filesystem::path DefaultTaggerModel();
std::filesystem::path DefaultLexicon();

// "builtin" uses the perceptron model; "conllu:<dir>" reads pre-tagged
// <split>.source.conllu / <split>.target.conllu files from dir.
std::unique_ptr<TagSource> MakeTagSource(const std::string &spec,
                                         const std::filesystem::path &model_path);

struct RunOptions {
  std::filesystem::path config_path;
  std::string tagger = "builtin";
  std::filesystem::path model_path;    // empty: DefaultTaggerModel()
  std::filesystem::path lexicon_path;  // empty: DefaultLexicon()
  TrainConfig train;
  AblationOptions ablation;
  int bins = 20;
  // Feature-matrix cache directory; empty disables caching.
  std::filesystem::path cache_dir;
};

struct NamedBleu {
  std::string label;
  BleuScore score;
};

// Loads a dataset and its resources on demand and runs the analyses. Feature
// matrices are extracted once (optionally through the on-disk cache) and
// shared by ablation and divergence.
class Pipeline {
 public:
  explicit Pipeline(RunOptions options);
  ~Pipeline();

  const RunOptions &options() const { return options_; }
  const DatasetConfig &config() const { return config_; }
  const ParallelDataset &dataset();
  const TagSource &tags();
  std::shared_ptr<const SentimentLexicon> lexicon();

  // Hex key identifying corpus content, tag provenance, lexicon, tokenizer
  // version and extraction options.
  std::string CacheKey();
  const AblationMatrices &matrices();
  // True when matrices() was served from the cache.
  bool cache_hit() const { return cache_hit_; }

  SimilarityReport Similarity(SplitName split = SplitName::kTrain);
  AblationResult Ablation();
  // Over the test split, for the requested groups plus the FF row.
  DivergenceReport Divergence();
  std::vector<NamedBleu> Bleu();

  // JSON object describing options and input fingerprints.
  std::string ConfigSnapshotJson();

 private:
  RunOptions options_;
  DatasetConfig config_;
  std::optional<ParallelDataset> dataset_;
  std::unique_ptr<TagSource> tags_;
  std::shared_ptr<const SentimentLexicon> lexicon_;
  std::string lexicon_hash_;
  std::optional<AblationMatrices> matrices_;
  bool cache_hit_ = false;
};

// --- Report serialization ------------------------------------------------------
// All numbers use the shortest representation that round-trips.

// Header: dataset,jaccard,ld,ld_norm,f1,n_pairs
std::string SimilarityCsv(const std::vector<std::pair<std::string, SimilarityReport>> &rows);
// Header: group,dataset,accuracy,n_features,lambda,status
std::string AblationCsv(const std::vector<AblationResult> &results);
// Header: group,dataset,js,n_features,bold (FF row first)
std::string DivergenceCsv(const std::vector<DivergenceReport> &reports);
// Per-feature values, distributions and bin edges.
std::string DivergenceJson(const DivergenceReport &report);
std::string DatasetCardJson(const DatasetCard &card);
std::string BleuJson(const std::vector<NamedBleu> &scores);
// Moses-style one-line summary.
std::string BleuLine(const BleuScore &score);

struct ProfileReport {
  DatasetCard card;
  SimilarityReport similarity;
  AblationResult ablation;
  DivergenceReport divergence;
  std::vector<NamedBleu> bleu;
  std::string config_snapshot_json;
};

ProfileReport RunProfile(Pipeline &pipeline);
std::string ProfileReportJson(const ProfileReport &report);
// Writes report.json, similarity.csv, ablation.csv, divergence.csv and
// divergence.json into out_dir (atomically, file by file).
void WriteProfile(const ProfileReport &report, const std::filesystem::path &out_dir);

// Writes content to path through a temporary sibling file and a rename.
void WriteFileAtomic(const std::filesystem::path &path, std::string_view content);

}  // namespace stylestat

#endif  // STYLESTAT_PIPELINE_H_
