#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "edgerl/scenario.hpp"
#include "edgerl/trainers.hpp"
#include "edgerl/uplink_env.hpp"

namespace edgerl {

enum class Algorithm { kHappo, kHaa2c, kIppo, kRandom };

Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm algo);

inline constexpr long long kPaperTrainingSteps = 280'000;
inline constexpr long long kDeskTrainingSteps = 50'000;

/// Joint action plus what the rollout buffer needs to replay it.
struct ActSample {
  JointAction action;
  std::vector<double> resol_pre_squash;
  double log_prob_alloc = 0.0;
  double log_prob_resol = 0.0;
};

/// Uniform face over the four algorithms for rollout, update and checkpointing.
class Learner {
 public:
  virtual ~Learner() = default;

  static std::unique_ptr<Learner> create(Algorithm algo, const ScenarioConfig& cfg, const HyperParams& hp,
                                         std::uint64_t seed);

  [[nodiscard]] virtual Algorithm algorithm() const = 0;
  virtual ActSample act(std::span<const double> obs, std::mt19937_64& rng) const = 0;
  /// Deterministic policies (arg-max allocation, mean resolution). The random
  /// baseline draws from `rng`.
  virtual JointAction act_greedy(std::span<const double> obs, std::mt19937_64& rng) const = 0;
  /// No-op for the random baseline.
  virtual UpdateStats update(const RolloutBuffer& buffer) = 0;
  [[nodiscard]] virtual bool trainable() const { return true; }

  virtual void save(const std::filesystem::path& dir) const = 0;
  virtual void load(const std::filesystem::path& dir) = 0;
};

/// One row of train.csv, written after each policy update.
struct TrainLogRow {
  long long step = 0;
  double reward_alloc = 0.0;  // mean per-step reward over the segment
  double reward_resol = 0.0;
  UpdateStats stats;
};

struct EpisodeRecord {
  int episode = 0;
  EpisodeSummary summary;
};

struct EvalRecord {
  long long step = 0;
  EpisodeSummary summary;
};

/// Headline numbers for one (scenario, algorithm, seed) triple.
struct MetricsRow {
  std::string scenario;
  std::string algorithm;
  std::uint64_t seed = 0;
  double train_reward_alloc = 0.0;  // mean over the last 10% of training episodes
  double train_reward_resol = 0.0;
  double eval_reward_alloc = 0.0;  // mean over evaluations in the last 10% of training
  double eval_reward_resol = 0.0;
  double eval_total_delay_s = 0.0;  // final evaluation episode
  double eval_mean_map = 0.0;
  double eval_idle_count = 0.0;
};

inline constexpr const char* kMetricsHeader =
    "scenario,algorithm,seed,train_reward_alloc,train_reward_resol,eval_reward_alloc,eval_reward_resol,"
    "eval_total_delay_s,eval_mean_map,eval_idle_count";
inline constexpr const char* kEpisodeHeader =
    "seed,scenario,episode,total_delay_s,mean_map,idle_count,reward_alloc,reward_resol";
inline constexpr const char* kEvalHeader =
    "seed,scenario,step,total_delay_s,mean_map,idle_count,reward_alloc,reward_resol";
inline constexpr const char* kTrainHeader =
    "step,reward_alloc,reward_resol,actor1_loss,actor2_loss,critic_loss,mean_ratio1,mean_ratio2";

struct RunOptions {
  std::string scenario = "33";
  Algorithm algorithm = Algorithm::kHappo;
  std::uint64_t seed = 0;
  long long total_steps = kDeskTrainingSteps;
  long long eval_every = 5'000;
  int eval_len = 1'000;
  HyperParams hp;
  /// Applied on top of the scenario defaults (physical overrides only).
  std::vector<std::pair<std::string, std::string>> scenario_overrides;
  std::optional<bool> fading;
  /// Root output directory; files go to <out>/<scenario>/<algo>/<seed>/.
  /// Empty means nothing is written.
  std::filesystem::path out_dir;
  bool write_checkpoints = true;
};

struct RunResult {
  MetricsRow metrics;
  std::vector<TrainLogRow> train_log;
  std::vector<EpisodeRecord> episodes;
  std::vector<EvalRecord> evaluations;
};

/// Scenario configuration a run uses (name defaults, overrides, fading flag).
ScenarioConfig resolve_scenario(const RunOptions& options);

/// Directory for one triple under `root`.
std::filesystem::path triple_dir(const std::filesystem::path& root, const std::string& scenario, Algorithm algo,
                                 std::uint64_t seed);

/// Runs one evaluation episode of `eval_len` steps on a fixed evaluation world.
EpisodeSummary evaluate_policy(const Learner& learner, const ScenarioConfig& cfg, int eval_len,
                               std::mt19937_64& rng);

/// Trains (or, for the random baseline, only rolls out) one triple with
/// periodic deterministic evaluation and writes its files.
RunResult run_triple(const RunOptions& options);

/// Loads the checkpoint of a trained triple and runs one evaluation episode.
EpisodeSummary evaluate_checkpoint(const RunOptions& options);

struct ExperimentPlan {
  std::vector<std::string> scenarios{"33", "34", "35", "36", "37"};
  std::vector<Algorithm> algorithms{Algorithm::kHappo, Algorithm::kHaa2c, Algorithm::kIppo, Algorithm::kRandom};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  RunOptions base;  // scenario, algorithm and seed are overwritten per triple
  int jobs = 1;

  void validate() const;
};

/// Runs every triple of the plan, then writes summary.csv and summary.txt to
/// the output root. Returns the metrics rows in plan order.
std::vector<MetricsRow> run_experiment(const ExperimentPlan& plan);

// -- metrics files ------------------------------------------------------------

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_metrics_csv(std::istream& in);
std::vector<MetricsRow> read_metrics_csv(const std::filesystem::path& path);
/// Every metrics.csv below `root`, sorted by path.
std::vector<std::filesystem::path> find_metrics_files(const std::filesystem::path& root);

/// Median and extremes of one metric over the seeds of one cell. `count` is 0
/// for a requested cell without rows.
struct SummaryRow {
  std::string scenario;
  std::string algorithm;
  std::string metric;
  int count = 0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

double median(std::vector<double> values);

/// Groups rows by (scenario, algorithm). Cells named in `scenarios` x
/// `algorithms` that have no rows come back with count 0; empty request lists
/// mean "whatever appears in rows".
std::vector<SummaryRow> aggregate(const std::vector<MetricsRow>& rows, std::vector<std::string> scenarios = {},
                                  std::vector<std::string> algorithms = {});

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_summary_table(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Reads every metrics.csv below `root` and writes summary.csv and
/// summary.txt into it.
std::vector<SummaryRow> aggregate_directory(const std::filesystem::path& root);

}  // namespace edgerl
