#include "edgerl/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "edgerl/errors.hpp"
#include "edgerl/harness.hpp"
#include "edgerl/map_curve.hpp"
#include "edgerl/scenario.hpp"

namespace edgerl {
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct CliOptions {
  std::string scenarios = "33";
  std::string algos = "happo";
  std::string seeds = "0";
  long long steps = kDeskTrainingSteps;
  bool paper_scale = false;
  long long eval_every = 5'000;
  int eval_len = 1'000;
  std::string config;
  std::string out;
  std::string fading;
  std::string eq13_literal;
  int jobs = 1;
  std::string fit_input;
};

RunOptions base_options(const CliOptions& o) {
  RunOptions r;
  r.total_steps = o.paper_scale ? kPaperTrainingSteps : o.steps;
  r.eval_every = o.eval_every;
  r.eval_len = o.eval_len;
  r.out_dir = o.out.empty() ? fs::path("out") : fs::path(o.out);
  if (!o.fading.empty()) r.fading = parse_bool(o.fading);
  if (!o.config.empty()) {
    for (const auto& [key, value] : read_key_values(fs::path(o.config))) {
      if (r.hp.apply(key, value)) continue;
      ScenarioConfig probe;
      if (!probe.apply(key, value)) throw ConfigError("unknown config key '" + key + "' in " + o.config);
      r.scenario_overrides.emplace_back(key, value);
    }
  }
  if (!o.eq13_literal.empty()) r.hp.ratio_first_clip = parse_bool(o.eq13_literal);
  r.hp.validate();
  return r;
}

RunOptions single_triple(const CliOptions& o) {
  RunOptions r = base_options(o);
  const auto scenarios = split_list(o.scenarios);
  const auto algos = split_list(o.algos);
  const auto seeds = parse_seed_list(o.seeds);
  if (scenarios.size() != 1 || algos.size() != 1 || seeds.size() != 1) {
    throw ConfigError("train and evaluate take exactly one scenario, algorithm and seed; use sweep for grids");
  }
  ScenarioName::parse(scenarios[0]);
  r.scenario = scenarios[0];
  r.algorithm = parse_algorithm(algos[0]);
  r.seed = seeds[0];
  return r;
}

void print_summary(std::ostream& out, const std::string& label, const EpisodeSummary& s) {
  out << label << ": total_delay_s=" << s.total_latency_s << " mean_map=" << s.mean_map
      << " idle_count=" << s.idle_count << " reward_alloc=" << s.mean_reward_alloc
      << " reward_resol=" << s.mean_reward_resol << '\n';
}

}  // namespace

std::vector<unsigned long long> parse_seed_list(const std::string& text) {
  std::vector<unsigned long long> seeds;
  for (const auto& item : split_list(text)) {
    try {
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        seeds.push_back(std::stoull(item));
      } else {
        const auto lo = std::stoull(item.substr(0, dash));
        const auto hi = std::stoull(item.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument(item);
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw ConfigError("malformed seed list '" + text + "'");
    }
  }
  if (seeds.empty()) throw ConfigError("empty seed list");
  return seeds;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliOptions o;
  CLI::App app{"Edge uplink allocation and resolution control with heterogeneous-action RL", "edgerl"};
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--scenario", o.scenarios, "Congestion setting(s) 33..37, comma separated")
      ->capture_default_str();
  app.add_option("--algo", o.algos, "Algorithm(s): happo, haa2c, ippo, random; comma separated")
      ->capture_default_str();
  app.add_option("--seed", o.seeds, "Seed list, e.g. 0, 0-9 or 0,2,4")->capture_default_str();
  app.add_option("--steps", o.steps, "Training environment steps per run")->capture_default_str();
  app.add_flag("--paper-scale", o.paper_scale, "Train for 280000 steps");
  app.add_option("--eval-every", o.eval_every, "Steps between deterministic evaluations")->capture_default_str();
  app.add_option("--eval-len", o.eval_len, "Iterations per evaluation episode")->capture_default_str();
  app.add_option("--config", o.config, "key=value file with scenario and hyperparameter overrides");
  app.add_option("--out", o.out,
                 "Output root for runs (default out); output file for fit-map (default map_curve.txt)");
  app.add_option("--fading", o.fading, "Exponential fading on|off (default on)")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--eq13-literal", o.eq13_literal,
                 "on: take the min over ratios before weighting by the advantage (default off)")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--jobs", o.jobs, "Parallel runs for sweep")->capture_default_str();

  auto* train = app.add_subcommand("train", "Train one (scenario, algorithm, seed) triple");
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a trained checkpoint on one evaluation episode");
  auto* sweep = app.add_subcommand("sweep", "Train and evaluate every triple of a grid, then aggregate");
  auto* fit = app.add_subcommand("fit-map", "Fit the cubic mAP curve to resolution_ppi,map pairs");
  fit->add_option("--in", o.fit_input, "CSV with header resolution_ppi,map")->required();
  auto* agg = app.add_subcommand("aggregate", "Summarize every metrics.csv below --out");

  std::vector<std::string> argv_storage{"edgerl"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "edgerl: error: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    if (train->parsed()) {
      const auto r = run_triple(single_triple(o));
      write_metrics_csv(out, {r.metrics});
    } else if (evaluate->parsed()) {
      const RunOptions r = single_triple(o);
      const auto s = evaluate_checkpoint(r);
      const fs::path dir = triple_dir(r.out_dir, r.scenario, r.algorithm, r.seed);
      fs::create_directories(dir);
      std::ofstream csv(dir / "evaluate.csv");
      if (!csv) throw std::runtime_error("cannot write '" + (dir / "evaluate.csv").string() + "'");
      csv << kEvalHeader << '\n'
          << r.seed << ',' << r.scenario << ',' << r.eval_len << ',' << s.total_latency_s << ',' << s.mean_map << ','
          << s.idle_count << ',' << s.mean_reward_alloc << ',' << s.mean_reward_resol << '\n';
      print_summary(out, r.scenario + "/" + algorithm_name(r.algorithm) + "/" + std::to_string(r.seed), s);
    } else if (sweep->parsed()) {
      ExperimentPlan plan;
      plan.base = base_options(o);
      plan.scenarios = split_list(o.scenarios);
      plan.algorithms.clear();
      for (const auto& a : split_list(o.algos)) plan.algorithms.push_back(parse_algorithm(a));
      plan.seeds.clear();
      for (auto s : parse_seed_list(o.seeds)) plan.seeds.push_back(s);
      plan.jobs = o.jobs;
      const auto rows = run_experiment(plan);
      std::vector<std::string> algos;
      for (Algorithm a : plan.algorithms) algos.push_back(algorithm_name(a));
      write_summary_table(out, aggregate(rows, plan.scenarios, algos));
    } else if (fit->parsed()) {
      const auto pairs = read_map_pairs_csv(fs::path(o.fit_input));
      const auto result = fit_curve(pairs);
      const fs::path dest = o.out.empty() ? fs::path("map_curve.txt") : fs::path(o.out);
      save_curve(result.curve, dest);
      const auto& c = result.curve.coeffs();
      out << "mAP = " << c[0] << " p^3 + " << c[1] << " p^2 + " << c[2] << " p + " << c[3]
          << "  (rms residual " << result.rms_residual << ") -> " << dest.string() << '\n';
    } else if (agg->parsed()) {
      write_summary_table(out, aggregate_directory(o.out.empty() ? fs::path("out") : fs::path(o.out)));
    }
  } catch (const std::exception& e) {
    err << "edgerl: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace edgerl
