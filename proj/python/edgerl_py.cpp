#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <random>

#include "edgerl/advantage.hpp"
#include "edgerl/errors.hpp"
#include "edgerl/harness.hpp"
#include "edgerl/map_curve.hpp"
#include "edgerl/mlp.hpp"
#include "edgerl/objectives.hpp"
#include "edgerl/scenario.hpp"
#include "edgerl/trainers.hpp"
#include "edgerl/uplink_env.hpp"

namespace py = pybind11;
using namespace edgerl;

namespace {

py::dict outcome_dict(const StepOutcome& o) {
  py::dict d;
  d["latency"] = o.per_iov_latency;
  d["map"] = o.per_iov_map;
  d["data_bits"] = o.per_iov_data_bits;
  d["idle"] = o.idle_flags;
  d["reward_alloc"] = o.reward_alloc;
  d["reward_resol"] = o.reward_resol;
  d["observation"] = o.observation;
  return d;
}

py::dict summary_dict(const EpisodeSummary& s) {
  py::dict d;
  d["objective"] = s.objective;
  d["total_latency_s"] = s.total_latency_s;
  d["mean_map"] = s.mean_map;
  d["transmissions"] = s.transmissions;
  d["idle_count"] = s.idle_count;
  d["reward_alloc"] = s.mean_reward_alloc;
  d["reward_resol"] = s.mean_reward_resol;
  d["steps"] = s.steps;
  return d;
}

py::dict metrics_dict(const MetricsRow& m) {
  py::dict d;
  d["scenario"] = m.scenario;
  d["algorithm"] = m.algorithm;
  d["seed"] = m.seed;
  d["train_reward_alloc"] = m.train_reward_alloc;
  d["train_reward_resol"] = m.train_reward_resol;
  d["eval_reward_alloc"] = m.eval_reward_alloc;
  d["eval_reward_resol"] = m.eval_reward_resol;
  d["eval_total_delay_s"] = m.eval_total_delay_s;
  d["eval_mean_map"] = m.eval_mean_map;
  d["eval_idle_count"] = m.eval_idle_count;
  return d;
}

}  // namespace

PYBIND11_MODULE(_edgerl, m) {
  m.doc() = "Edge uplink allocation and resolution control with heterogeneous-action RL";
  m.attr("__version__") = "0.1.0";
  m.attr("IDLE") = kIdle;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<FitError>(m, "FitError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UnreachableLinkError>(m, "UnreachableLinkError", PyExc_RuntimeError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_static("from_name", [](const std::string& name, std::uint64_t seed) {
        return ScenarioName::parse(name).config(seed);
      }, py::arg("name"), py::arg("seed") = 0)
      .def_readwrite("n_iov", &ScenarioConfig::n_iov)
      .def_readwrite("n_mmbs", &ScenarioConfig::n_mmbs)
      .def_readwrite("bandwidth_hz", &ScenarioConfig::bandwidth_hz)
      .def_readwrite("noise_psd", &ScenarioConfig::noise_psd)
      .def_readwrite("power_min", &ScenarioConfig::power_min)
      .def_readwrite("power_max", &ScenarioConfig::power_max)
      .def_readwrite("p_min", &ScenarioConfig::p_min)
      .def_readwrite("p_max", &ScenarioConfig::p_max)
      .def_readwrite("bits_per_pixel", &ScenarioConfig::bits_per_pixel)
      .def_readwrite("map_side_m", &ScenarioConfig::map_side_m)
      .def_readwrite("max_move_m", &ScenarioConfig::max_move_m)
      .def_readwrite("weight_q", &ScenarioConfig::weight_q)
      .def_readwrite("weight_b", &ScenarioConfig::weight_b)
      .def_readwrite("weight_f", &ScenarioConfig::weight_f)
      .def_readwrite("episode_len", &ScenarioConfig::episode_len)
      .def_readwrite("path_loss_exponent", &ScenarioConfig::path_loss_exponent)
      .def_readwrite("reference_gain", &ScenarioConfig::reference_gain)
      .def_readwrite("fading_enabled", &ScenarioConfig::fading_enabled)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_property(
          "mmbs_positions",
          [](const ScenarioConfig& c) {
            std::vector<std::pair<double, double>> v;
            for (const auto& p : c.mmbs_positions) v.emplace_back(p.x, p.y);
            return v;
          },
          [](ScenarioConfig& c, const std::vector<std::pair<double, double>>& v) {
            c.mmbs_positions.clear();
            for (const auto& [x, y] : v) c.mmbs_positions.push_back({x, y});
          })
      .def("noise_power", &ScenarioConfig::noise_power)
      .def("set", [](ScenarioConfig& c, const std::string& key, const std::string& value) {
        if (!c.apply(key, value)) throw ConfigError("unknown config key '" + key + "'");
      })
      .def("to_text", &ScenarioConfig::to_text);

  // mAP model
  py::class_<MapCurve>(m, "MapCurve")
      .def(py::init<>())
      .def(py::init<std::array<double, 4>, double, double>(), py::arg("coeffs"), py::arg("domain_lo"),
           py::arg("domain_hi"))
      .def_property_readonly("coeffs", &MapCurve::coeffs)
      .def_property_readonly("domain", [](const MapCurve& c) { return std::make_pair(c.domain_lo(), c.domain_hi()); })
      .def("raw", &MapCurve::raw)
      .def("score", &MapCurve::score);
  m.def("map_score", [](double p) { return map_score(p); }, py::arg("p"),
        "Clamped mAP of the default detection curve; raises DomainError outside [64, 416].");
  m.def("fit_curve", [](const std::vector<std::pair<double, double>>& pairs) {
    std::vector<ResolutionMapPair> v;
    for (const auto& [p, y] : pairs) v.push_back({p, y});
    const auto fit = fit_curve(v);
    return std::make_pair(fit.curve, fit.rms_residual);
  }, py::arg("pairs"), "Least-squares cubic through (resolution, mAP) pairs; returns (curve, rms).");

  // Link budget
  m.def("data_size", &data_size, py::arg("p"), py::arg("bits_per_pixel"));
  m.def("path_gain", &path_gain, py::arg("distance_m"), py::arg("reference_gain"), py::arg("path_loss_exponent"));
  m.def("sinr", [](int i, const std::vector<int>& alloc, const std::vector<double>& gains,
                   const std::vector<double>& powers, int n_mmbs, double noise_power) {
    return sinr(i, alloc, gains, powers, n_mmbs, noise_power);
  }, py::arg("i"), py::arg("alloc"), py::arg("gains"), py::arg("powers"), py::arg("n_mmbs"), py::arg("noise_power"));
  m.def("rate", &rate, py::arg("sinr"), py::arg("bandwidth_hz"));
  m.def("latency", &latency, py::arg("data_bits"), py::arg("rate_bps"));

  py::class_<UplinkEnv>(m, "UplinkEnv")
      .def(py::init<ScenarioConfig>(), py::arg("config"))
      .def("reset", [](UplinkEnv& e) { e.reset(); return e.observe(); })
      .def("step", [](UplinkEnv& e, const std::vector<int>& alloc, const std::vector<double>& resol) {
        return outcome_dict(e.step(JointAction{alloc, resol}));
      }, py::arg("alloc"), py::arg("resol"))
      .def("observe", &UplinkEnv::observe)
      .def("episode_done", &UplinkEnv::episode_done)
      .def_property_readonly("observation_size", &UplinkEnv::observation_size)
      .def_property_readonly("iteration", [](const UplinkEnv& e) { return e.state().iteration; })
      .def_property_readonly("gains", [](const UplinkEnv& e) { return e.state().gains; })
      .def_property_readonly("powers", [](const UplinkEnv& e) { return e.state().powers; })
      .def_property_readonly("positions", [](const UplinkEnv& e) {
        std::vector<std::pair<double, double>> v;
        for (const auto& p : e.state().iov_positions) v.emplace_back(p.x, p.y);
        return v;
      });

  // Learning primitives
  m.def("gae", [](const std::vector<double>& rewards, const std::vector<double>& values, double gamma,
                  double lambda) { return gae(rewards, values, gamma, lambda); },
        py::arg("rewards"), py::arg("values"), py::arg("gamma"), py::arg("lam"));
  m.def("ppo_actor_objective", [](const std::vector<double>& lp_new, const std::vector<double>& lp_old,
                                  const std::vector<double>& adv, double eps, bool ratio_first) {
    return ppo_actor_objective(lp_new, lp_old, adv, eps,
                               ratio_first ? SurrogateForm::kClippedRatioFirst : SurrogateForm::kClipped);
  }, py::arg("log_prob_new"), py::arg("log_prob_old"), py::arg("advantage_sum"), py::arg("clip_eps"),
        py::arg("ratio_first") = false);
  m.def("critic_loss", [](const std::vector<double>& v, const std::vector<double>& adv,
                          const std::vector<double>& next_v, double gamma) {
    return critic_loss(v, adv, next_v, gamma);
  }, py::arg("values"), py::arg("advantage_sum"), py::arg("next_target_values"), py::arg("gamma"));
  m.def("random_policy", [](const ScenarioConfig& cfg, std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::vector<int>, std::vector<double>>> out;
    for (int k = 0; k < count; ++k) {
      auto a = random_policy(cfg, rng);
      out.emplace_back(std::move(a.alloc), std::move(a.resol));
    }
    return out;
  }, py::arg("config"), py::arg("seed"), py::arg("count") = 1);

  py::class_<Mlp>(m, "Mlp")
      .def_static("initialized", &Mlp::initialized, py::arg("layer_sizes"), py::arg("seed"),
                  py::arg("output_scale") = 1.0)
      .def_property_readonly("layer_sizes", &Mlp::layer_sizes)
      .def_property_readonly("parameter_count", &Mlp::parameter_count)
      .def_property("params",
                    [](const Mlp& n) { return std::vector<double>(n.params().begin(), n.params().end()); },
                    [](Mlp& n, const std::vector<double>& v) {
                      if (v.size() != n.parameter_count()) throw DimensionError("parameter count mismatch");
                      std::copy(v.begin(), v.end(), n.params().begin());
                    })
      .def("forward", [](const Mlp& n, const std::vector<double>& x) { return n.forward(x); })
      .def("backward", [](const Mlp& n, const std::vector<double>& x, const std::vector<double>& up) {
        return n.backward(x, up);
      });

  // Experiment harness
  m.def("run", [](const std::string& scenario, const std::string& algo, std::uint64_t seed, long long steps,
                  long long eval_every, int eval_len, std::optional<bool> fading, const std::string& out_dir) {
    RunOptions o;
    o.scenario = scenario;
    o.algorithm = parse_algorithm(algo);
    o.seed = seed;
    o.total_steps = steps;
    o.eval_every = eval_every;
    o.eval_len = eval_len;
    o.fading = fading;
    o.out_dir = out_dir;
    RunResult r;
    {
      py::gil_scoped_release release;
      r = run_triple(o);
    }
    py::dict d = metrics_dict(r.metrics);
    py::list evals;
    for (const auto& e : r.evaluations) {
      py::dict ed = summary_dict(e.summary);
      ed["step"] = e.step;
      evals.append(ed);
    }
    d["evaluations"] = evals;
    return d;
  }, py::arg("scenario") = "33", py::arg("algorithm") = "happo", py::arg("seed") = 0,
        py::arg("steps") = kDeskTrainingSteps, py::arg("eval_every") = 5000, py::arg("eval_len") = 1000,
        py::arg("fading") = py::none(), py::arg("out_dir") = "",
        "Train and evaluate one (scenario, algorithm, seed) triple; returns its metrics.");
  m.def("aggregate_directory", [](const std::string& root) {
    py::list out;
    for (const auto& r : aggregate_directory(root)) {
      py::dict d;
      d["scenario"] = r.scenario;
      d["algorithm"] = r.algorithm;
      d["metric"] = r.metric;
      d["count"] = r.count;
      d["median"] = r.median;
      d["min"] = r.min;
      d["max"] = r.max;
      out.append(d);
    }
    return out;
  }, py::arg("root"));
}
