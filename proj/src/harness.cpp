#include "edgerl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "edgerl/errors.hpp"
#include "edgerl/mlp.hpp"

namespace edgerl {
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return in;
}

void save_vector(const fs::path& path, std::span<const double> values) {
  auto out = open_out(path);
  save_parameters(out, values, {static_cast<int>(values.size())}, 0);
}

std::vector<double> load_vector(const fs::path& path) {
  auto in = open_in(path);
  std::vector<int> sizes;
  std::uint64_t seed = 0;
  return load_parameters(in, sizes, seed);
}

void save_critic(const CriticUnit& unit, const fs::path& dir, const std::string& stem) {
  unit.critic.net().save(dir / (stem + ".bin"));
  unit.critic.target().save(dir / (stem + "_target.bin"));
  save_vector(dir / (stem + "_norm.bin"), unit.norm.state());
}

void load_critic(CriticUnit& unit, const fs::path& dir, const std::string& stem) {
  Critic c(Mlp::load(dir / (stem + ".bin")));
  c.target() = Mlp::load(dir / (stem + "_target.bin"));
  unit.critic = std::move(c);
  unit.norm.set_state(load_vector(dir / (stem + "_norm.bin")));
}

void save_actors(const AllocActor& alloc, const ResolActor& resol, const fs::path& dir) {
  alloc.policy.net().save(dir / "alloc_actor.bin");
  resol.policy.net().save(dir / "resol_actor.bin");
  save_vector(dir / "resol_log_std.bin", resol.policy.log_std());
}

void load_actors(AllocActor& alloc, ResolActor& resol, const fs::path& dir) {
  alloc.policy = AllocPolicy(Mlp::load(dir / "alloc_actor.bin"), alloc.policy.heads(), alloc.policy.choices() - 1);
  resol.policy = ResolPolicy(Mlp::load(dir / "resol_actor.bin"), load_vector(dir / "resol_log_std.bin"),
                             resol.policy.p_min(), resol.policy.p_max());
}

ActSample sample_both(const AllocPolicy& alloc, const ResolPolicy& resol, std::span<const double> obs,
                      std::mt19937_64& rng) {
  auto a = alloc.sample(obs, rng);
  auto r = resol.sample(obs, rng);
  ActSample s;
  s.action.alloc = std::move(a.alloc);
  s.action.resol = std::move(r.resolution);
  s.resol_pre_squash = std::move(r.pre_squash);
  s.log_prob_alloc = a.log_prob;
  s.log_prob_resol = r.log_prob;
  return s;
}

class SharedCriticLearner final : public Learner {
 public:
  SharedCriticLearner(Algorithm algo, const ScenarioConfig& cfg, const HyperParams& hp, std::uint64_t seed)
      : algo_(algo), hp_(hp), agents_(SharedCriticAgents::create(cfg, hp, seed)) {}

  [[nodiscard]] Algorithm algorithm() const override { return algo_; }

  ActSample act(std::span<const double> obs, std::mt19937_64& rng) const override {
    return sample_both(agents_.alloc.policy, agents_.resol.policy, obs, rng);
  }

  JointAction act_greedy(std::span<const double> obs, std::mt19937_64&) const override {
    return {agents_.alloc.policy.greedy(obs), agents_.resol.policy.deterministic(obs)};
  }

  UpdateStats update(const RolloutBuffer& buffer) override {
    return algo_ == Algorithm::kHaa2c ? haa2c_update(buffer, agents_, hp_) : happo_update(buffer, agents_, hp_);
  }

  void save(const fs::path& dir) const override {
    save_actors(agents_.alloc, agents_.resol, dir);
    save_critic(agents_.critic, dir, "critic");
  }

  void load(const fs::path& dir) override {
    load_actors(agents_.alloc, agents_.resol, dir);
    load_critic(agents_.critic, dir, "critic");
  }

 private:
  Algorithm algo_;
  HyperParams hp_;
  SharedCriticAgents agents_;
};

class IndependentLearner final : public Learner {
 public:
  IndependentLearner(const ScenarioConfig& cfg, const HyperParams& hp, std::uint64_t seed)
      : hp_(hp), agents_(IndependentAgents::create(cfg, hp, seed)) {}

  [[nodiscard]] Algorithm algorithm() const override { return Algorithm::kIppo; }

  ActSample act(std::span<const double> obs, std::mt19937_64& rng) const override {
    return sample_both(agents_.alloc.policy, agents_.resol.policy, obs, rng);
  }

  JointAction act_greedy(std::span<const double> obs, std::mt19937_64&) const override {
    return {agents_.alloc.policy.greedy(obs), agents_.resol.policy.deterministic(obs)};
  }

  UpdateStats update(const RolloutBuffer& buffer) override { return independent_ppo_update(buffer, agents_, hp_); }

  void save(const fs::path& dir) const override {
    save_actors(agents_.alloc, agents_.resol, dir);
    save_critic(agents_.alloc_critic, dir, "alloc_critic");
    save_critic(agents_.resol_critic, dir, "resol_critic");
  }

  void load(const fs::path& dir) override {
    load_actors(agents_.alloc, agents_.resol, dir);
    load_critic(agents_.alloc_critic, dir, "alloc_critic");
    load_critic(agents_.resol_critic, dir, "resol_critic");
  }

 private:
  HyperParams hp_;
  IndependentAgents agents_;
};

class RandomLearner final : public Learner {
 public:
  explicit RandomLearner(const ScenarioConfig& cfg) : cfg_(cfg) {}

  [[nodiscard]] Algorithm algorithm() const override { return Algorithm::kRandom; }

  ActSample act(std::span<const double>, std::mt19937_64& rng) const override {
    ActSample s;
    s.action = random_policy(cfg_, rng);
    return s;
  }

  JointAction act_greedy(std::span<const double>, std::mt19937_64& rng) const override {
    return random_policy(cfg_, rng);
  }

  UpdateStats update(const RolloutBuffer&) override { return {}; }
  [[nodiscard]] bool trainable() const override { return false; }
  void save(const fs::path&) const override {}
  void load(const fs::path&) override {}

 private:
  ScenarioConfig cfg_;
};

void write_episode_like(std::ostream& out, std::uint64_t seed, const std::string& scenario, long long index,
                        const EpisodeSummary& s) {
  out << seed << ',' << scenario << ',' << index << ',' << num(s.total_latency_s) << ',' << num(s.mean_map) << ','
      << s.idle_count << ',' << num(s.mean_reward_alloc) << ',' << num(s.mean_reward_resol) << '\n';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

constexpr std::uint64_t kEvalSeedOffset = 0x5eed0000ULL;

}  // namespace

// -- algorithms -----------------------------------------------------------------

Algorithm parse_algorithm(const std::string& name) {
  if (name == "happo") return Algorithm::kHappo;
  if (name == "haa2c") return Algorithm::kHaa2c;
  if (name == "ippo") return Algorithm::kIppo;
  if (name == "random") return Algorithm::kRandom;
  throw ConfigError("unknown algorithm '" + name + "' (expected happo, haa2c, ippo or random)");
}

std::string algorithm_name(Algorithm algo) {
  switch (algo) {
    case Algorithm::kHappo: return "happo";
    case Algorithm::kHaa2c: return "haa2c";
    case Algorithm::kIppo: return "ippo";
    case Algorithm::kRandom: return "random";
  }
  return "unknown";
}

std::unique_ptr<Learner> Learner::create(Algorithm algo, const ScenarioConfig& cfg, const HyperParams& hp,
                                         std::uint64_t seed) {
  switch (algo) {
    case Algorithm::kHappo:
    case Algorithm::kHaa2c: return std::make_unique<SharedCriticLearner>(algo, cfg, hp, seed);
    case Algorithm::kIppo: return std::make_unique<IndependentLearner>(cfg, hp, seed);
    case Algorithm::kRandom: return std::make_unique<RandomLearner>(cfg);
  }
  throw ConfigError("unknown algorithm");
}

// -- single triple --------------------------------------------------------------

ScenarioConfig resolve_scenario(const RunOptions& options) {
  ScenarioConfig cfg = ScenarioName::parse(options.scenario).config(options.seed);
  for (const auto& [key, value] : options.scenario_overrides) {
    if (key == "n_iov" || key == "n_mmbs") {
      throw ConfigError("config key '" + key + "' is fixed by the scenario name");
    }
    if (key == "seed") throw ConfigError("config key 'seed' is set with --seed");
    if (!cfg.apply(key, value)) throw ConfigError("unknown config key '" + key + "'");
  }
  if (options.fading) cfg.fading_enabled = *options.fading;
  cfg.validate();
  return cfg;
}

fs::path triple_dir(const fs::path& root, const std::string& scenario, Algorithm algo, std::uint64_t seed) {
  return root / scenario / algorithm_name(algo) / std::to_string(seed);
}

EpisodeSummary evaluate_policy(const Learner& learner, const ScenarioConfig& cfg, int eval_len,
                               std::mt19937_64& rng) {
  ScenarioConfig eval_cfg = cfg;
  eval_cfg.seed = cfg.seed + kEvalSeedOffset;
  eval_cfg.episode_len = eval_len;
  UplinkEnv env(eval_cfg);
  EpisodeAccumulator acc(eval_cfg);
  auto obs = env.observe();
  while (!env.episode_done()) {
    const auto out = env.step(learner.act_greedy(obs, rng));
    acc.add(out);
    obs = out.observation;
  }
  return acc.summary();
}

RunResult run_triple(const RunOptions& options) {
  const ScenarioConfig cfg = resolve_scenario(options);
  options.hp.validate();
  if (options.total_steps < 1) throw ConfigError("total training steps must be >= 1");
  if (options.eval_every < 1 || options.eval_len < 1) throw ConfigError("evaluation period and length must be >= 1");

  auto learner = Learner::create(options.algorithm, cfg, options.hp, options.seed);
  UplinkEnv env(cfg);
  std::mt19937_64 act_rng(options.seed * 2 + 11);
  std::mt19937_64 eval_rng(options.seed * 2 + 12);
  RolloutBuffer buffer(options.hp.segment_len);
  RunResult result;

  EpisodeAccumulator episode(cfg);
  double seg_alloc = 0.0;
  double seg_resol = 0.0;
  auto obs = env.observe();
  for (long long step = 1; step <= options.total_steps; ++step) {
    ActSample s = learner->act(obs, act_rng);
    StepOutcome out = env.step(s.action);
    const bool done = env.episode_done();
    episode.add(out);
    seg_alloc += out.reward_alloc;
    seg_resol += out.reward_resol;
    if (learner->trainable()) {
      Transition t;
      t.obs = std::move(obs);
      t.next_obs = out.observation;
      t.alloc = std::move(s.action.alloc);
      t.resol_pre_squash = std::move(s.resol_pre_squash);
      t.resol = std::move(s.action.resol);
      t.log_prob_alloc = s.log_prob_alloc;
      t.log_prob_resol = s.log_prob_resol;
      t.reward_alloc = out.reward_alloc;
      t.reward_resol = out.reward_resol;
      t.episode_end = done;
      buffer.push(std::move(t));
    }
    if (done) {
      result.episodes.push_back({static_cast<int>(result.episodes.size()), episode.summary()});
      episode = EpisodeAccumulator(cfg);
      env.reset();
      obs = env.observe();
    } else {
      obs = std::move(out.observation);
    }

    const bool segment_end = step % options.hp.segment_len == 0;
    if (segment_end) {
      TrainLogRow row;
      row.step = step;
      row.reward_alloc = seg_alloc / options.hp.segment_len;
      row.reward_resol = seg_resol / options.hp.segment_len;
      if (learner->trainable()) {
        row.stats = learner->update(buffer);
        buffer.clear();
      }
      result.train_log.push_back(row);
      seg_alloc = seg_resol = 0.0;
    }
    if (step % options.eval_every == 0 || step == options.total_steps) {
      result.evaluations.push_back({step, evaluate_policy(*learner, cfg, options.eval_len, eval_rng)});
    }
  }

  // Headline metrics.
  MetricsRow& m = result.metrics;
  m.scenario = options.scenario;
  m.algorithm = algorithm_name(options.algorithm);
  m.seed = options.seed;
  if (!result.episodes.empty()) {
    const std::size_t n = result.episodes.size();
    const std::size_t tail = std::max<std::size_t>(1, (n + 9) / 10);
    for (std::size_t k = n - tail; k < n; ++k) {
      m.train_reward_alloc += result.episodes[k].summary.mean_reward_alloc / static_cast<double>(tail);
      m.train_reward_resol += result.episodes[k].summary.mean_reward_resol / static_cast<double>(tail);
    }
  } else {
    const auto acc = episode.summary();
    m.train_reward_alloc = acc.mean_reward_alloc;
    m.train_reward_resol = acc.mean_reward_resol;
  }
  const long long window_start = options.total_steps - options.total_steps / 10;
  int in_window = 0;
  for (const auto& e : result.evaluations) {
    if (e.step < window_start) continue;
    m.eval_reward_alloc += e.summary.mean_reward_alloc;
    m.eval_reward_resol += e.summary.mean_reward_resol;
    ++in_window;
  }
  m.eval_reward_alloc /= in_window;
  m.eval_reward_resol /= in_window;
  const auto& last = result.evaluations.back().summary;
  m.eval_total_delay_s = last.total_latency_s;
  m.eval_mean_map = last.mean_map;
  m.eval_idle_count = static_cast<double>(last.idle_count);

  if (!options.out_dir.empty()) {
    const fs::path dir = triple_dir(options.out_dir, options.scenario, options.algorithm, options.seed);
    fs::create_directories(dir);
    {
      auto out = open_out(dir / "train.csv");
      out << kTrainHeader << '\n';
      for (const auto& r : result.train_log) {
        out << r.step << ',' << num(r.reward_alloc) << ',' << num(r.reward_resol) << ','
            << num(r.stats.actor1_loss) << ',' << num(r.stats.actor2_loss) << ',' << num(r.stats.critic_loss) << ','
            << num(r.stats.mean_ratio1) << ',' << num(r.stats.mean_ratio2) << '\n';
      }
    }
    {
      auto out = open_out(dir / "episodes.csv");
      out << kEpisodeHeader << '\n';
      for (const auto& e : result.episodes) write_episode_like(out, options.seed, options.scenario, e.episode, e.summary);
    }
    {
      auto out = open_out(dir / "eval.csv");
      out << kEvalHeader << '\n';
      for (const auto& e : result.evaluations) write_episode_like(out, options.seed, options.scenario, e.step, e.summary);
    }
    {
      auto out = open_out(dir / "metrics.csv");
      write_metrics_csv(out, {result.metrics});
    }
    save_scenario_config(cfg, dir / "config.txt");
    if (options.write_checkpoints) {
      const fs::path ckpt = dir / "checkpoints";
      fs::create_directories(ckpt);
      learner->save(ckpt);
      auto out = open_out(ckpt / "manifest.txt");
      out << "algorithm=" << algorithm_name(options.algorithm) << '\n'
          << "scenario=" << options.scenario << '\n'
          << "seed=" << options.seed << '\n'
          << "steps=" << options.total_steps << '\n'
          << options.hp.to_text();
    }
  }
  return result;
}

EpisodeSummary evaluate_checkpoint(const RunOptions& options) {
  const ScenarioConfig cfg = resolve_scenario(options);
  auto learner = Learner::create(options.algorithm, cfg, options.hp, options.seed);
  if (learner->trainable()) {
    const fs::path ckpt = triple_dir(options.out_dir, options.scenario, options.algorithm, options.seed) / "checkpoints";
    if (!fs::exists(ckpt / "manifest.txt")) {
      throw ConfigError("no checkpoint at '" + ckpt.string() + "'; run train first");
    }
    learner->load(ckpt);
  }
  std::mt19937_64 eval_rng(options.seed * 2 + 12);
  return evaluate_policy(*learner, cfg, options.eval_len, eval_rng);
}

// -- experiment plan --------------------------------------------------------------

void ExperimentPlan::validate() const {
  if (scenarios.empty() || algorithms.empty() || seeds.empty()) {
    throw ConfigError("experiment plan needs at least one scenario, algorithm and seed");
  }
  for (const auto& s : scenarios) ScenarioName::parse(s);
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  base.hp.validate();
}

std::vector<MetricsRow> run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  std::vector<RunOptions> triples;
  for (const auto& s : plan.scenarios) {
    for (Algorithm a : plan.algorithms) {
      for (std::uint64_t seed : plan.seeds) {
        RunOptions o = plan.base;
        o.scenario = s;
        o.algorithm = a;
        o.seed = seed;
        triples.push_back(std::move(o));
      }
    }
  }
  std::vector<MetricsRow> rows(triples.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < triples.size(); k = next++) {
      try {
        rows[k] = run_triple(triples[k]).metrics;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::min<int>(plan.jobs, static_cast<int>(triples.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  if (!plan.base.out_dir.empty()) {
    std::vector<std::string> algos;
    for (Algorithm a : plan.algorithms) algos.push_back(algorithm_name(a));
    const auto summary = aggregate(rows, plan.scenarios, algos);
    auto csv = open_out(plan.base.out_dir / "summary.csv");
    write_summary_csv(csv, summary);
    auto txt = open_out(plan.base.out_dir / "summary.txt");
    write_summary_table(txt, summary);
  }
  return rows;
}

// -- metrics files -------------------------------------------------------------

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.algorithm << ',' << r.seed << ',' << num(r.train_reward_alloc) << ','
        << num(r.train_reward_resol) << ',' << num(r.eval_reward_alloc) << ',' << num(r.eval_reward_resol) << ','
        << num(r.eval_total_delay_s) << ',' << num(r.eval_mean_map) << ',' << num(r.eval_idle_count) << '\n';
  }
}

std::vector<MetricsRow> read_metrics_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) throw ConfigError("metrics file has an unexpected header");
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 10) throw ConfigError("malformed metrics row '" + line + "'");
    try {
      MetricsRow r;
      r.scenario = f[0];
      r.algorithm = f[1];
      r.seed = std::stoull(f[2]);
      r.train_reward_alloc = std::stod(f[3]);
      r.train_reward_resol = std::stod(f[4]);
      r.eval_reward_alloc = std::stod(f[5]);
      r.eval_reward_resol = std::stod(f[6]);
      r.eval_total_delay_s = std::stod(f[7]);
      r.eval_mean_map = std::stod(f[8]);
      r.eval_idle_count = std::stod(f[9]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ConfigError("malformed metrics row '" + line + "'");
    }
  }
  return rows;
}

std::vector<MetricsRow> read_metrics_csv(const fs::path& path) {
  auto in = open_in(path);
  return read_metrics_csv(in);
}

std::vector<fs::path> find_metrics_files(const fs::path& root) {
  std::vector<fs::path> files;
  if (!fs::exists(root)) return files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().filename() == "metrics.csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<SummaryRow> aggregate(const std::vector<MetricsRow>& rows, std::vector<std::string> scenarios,
                                  std::vector<std::string> algorithms) {
  using Getter = double MetricsRow::*;
  static const std::vector<std::pair<std::string, Getter>> metrics = {
      {"train_reward_alloc", &MetricsRow::train_reward_alloc},
      {"train_reward_resol", &MetricsRow::train_reward_resol},
      {"eval_reward_alloc", &MetricsRow::eval_reward_alloc},
      {"eval_reward_resol", &MetricsRow::eval_reward_resol},
      {"eval_total_delay_s", &MetricsRow::eval_total_delay_s},
      {"eval_mean_map", &MetricsRow::eval_mean_map},
      {"eval_idle_count", &MetricsRow::eval_idle_count},
  };
  auto add_unique = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  if (scenarios.empty()) {
    for (const auto& r : rows) add_unique(scenarios, r.scenario);
    std::sort(scenarios.begin(), scenarios.end());
  }
  if (algorithms.empty()) {
    for (const auto& r : rows) add_unique(algorithms, r.algorithm);
  }

  std::vector<SummaryRow> out;
  for (const auto& s : scenarios) {
    for (const auto& a : algorithms) {
      std::vector<const MetricsRow*> cell;
      for (const auto& r : rows) {
        if (r.scenario == s && r.algorithm == a) cell.push_back(&r);
      }
      for (const auto& [name, field] : metrics) {
        SummaryRow sr{s, a, name};
        sr.count = static_cast<int>(cell.size());
        if (!cell.empty()) {
          std::vector<double> v;
          for (const auto* r : cell) v.push_back(r->*field);
          sr.median = median(v);
          sr.min = *std::min_element(v.begin(), v.end());
          sr.max = *std::max_element(v.begin(), v.end());
        }
        out.push_back(std::move(sr));
      }
    }
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "scenario,algorithm,metric,count,median,min,max\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.algorithm << ',' << r.metric << ',' << r.count << ',';
    if (r.count == 0) {
      out << "missing,missing,missing\n";
    } else {
      out << num(r.median) << ',' << num(r.min) << ',' << num(r.max) << '\n';
    }
  }
}

void write_summary_table(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << std::left << std::setw(9) << "scenario" << std::setw(10) << "algorithm" << std::setw(20) << "metric"
      << std::right << std::setw(6) << "seeds" << std::setw(16) << "median" << std::setw(16) << "min"
      << std::setw(16) << "max" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(9) << r.scenario << std::setw(10) << r.algorithm << std::setw(20) << r.metric
        << std::right << std::setw(6) << r.count;
    if (r.count == 0) {
      out << std::setw(16) << "missing" << std::setw(16) << "missing" << std::setw(16) << "missing" << '\n';
    } else {
      out << std::setw(16) << num(r.median) << std::setw(16) << num(r.min) << std::setw(16) << num(r.max) << '\n';
    }
  }
}

std::vector<SummaryRow> aggregate_directory(const fs::path& root) {
  std::vector<MetricsRow> rows;
  const auto files = find_metrics_files(root);
  if (files.empty()) throw ConfigError("no metrics.csv files below '" + root.string() + "'");
  for (const auto& f : files) {
    auto part = read_metrics_csv(f);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const auto summary = aggregate(rows);
  auto csv = open_out(root / "summary.csv");
  write_summary_csv(csv, summary);
  auto txt = open_out(root / "summary.txt");
  write_summary_table(txt, summary);
  return summary;
}

}  // namespace edgerl
