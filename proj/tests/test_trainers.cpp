#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "edgerl/errors.hpp"
#include "edgerl/trainers.hpp"

using namespace edgerl;

namespace {

ScenarioConfig tiny_world() {
  ScenarioConfig cfg;
  cfg.n_iov = 2;
  cfg.n_mmbs = 2;
  cfg.episode_len = 15;
  cfg.seed = 3;
  cfg.place_mmbs_if_empty();
  return cfg;
}

HyperParams tiny_hp() {
  HyperParams hp;
  hp.segment_len = 40;
  hp.batch_size = 10;
  hp.epochs = 3;
  hp.hidden = {6};
  hp.normalize_advantages = false;
  return hp;
}

template <typename AllocP, typename ResolP>
RolloutBuffer roll(const ScenarioConfig& cfg, const AllocP& alloc, const ResolP& resol, int n, std::uint64_t seed,
                   bool zero_resol_reward = false) {
  UplinkEnv env(cfg);
  std::mt19937_64 rng(seed);
  RolloutBuffer buf(n);
  auto obs = env.observe();
  while (!buf.full()) {
    const auto a = alloc.sample(obs, rng);
    const auto r = resol.sample(obs, rng);
    const auto out = env.step({a.alloc, r.resolution});
    Transition t;
    t.obs = obs;
    t.next_obs = out.observation;
    t.alloc = a.alloc;
    t.resol_pre_squash = r.pre_squash;
    t.resol = r.resolution;
    t.log_prob_alloc = a.log_prob;
    t.log_prob_resol = r.log_prob;
    // Scaled down so the tiny nets see moderate targets.
    t.reward_alloc = out.reward_alloc * 1e-3;
    t.reward_resol = zero_resol_reward ? 0.0 : out.reward_resol * 1e-3;
    t.episode_end = env.episode_done();
    buf.push(std::move(t));
    if (env.episode_done()) env.reset();
    obs = env.observe();
  }
  return buf;
}

std::vector<double> copy(std::span<const double> s) { return {s.begin(), s.end()}; }

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

}  // namespace

TEST_CASE("hyperparameter validation") {
  HyperParams hp;
  CHECK_NOTHROW(hp.validate());
  hp.batch_size = 300;
  CHECK_THROWS_AS(hp.validate(), ConfigError);
  hp = HyperParams{};
  hp.gamma = 1.5;
  CHECK_THROWS(hp.validate());
  hp = HyperParams{};
  CHECK(hp.apply("clip_eps", "0.1"));
  CHECK(hp.clip_eps == 0.1);
  CHECK_FALSE(hp.apply("no_such_key", "1"));
}

TEST_CASE("rollout buffer capacity") {
  RolloutBuffer b(2);
  b.push({});
  b.push({});
  CHECK(b.full());
  CHECK_THROWS(b.push({}));
  b.clear();
  CHECK(b.size() == 0);
}

TEST_CASE("ratios are one before the first step of an update") {
  const auto cfg = tiny_world();
  const auto hp = tiny_hp();
  auto agents = SharedCriticAgents::create(cfg, hp, 1);
  const auto buf = roll(cfg, agents.alloc.policy, agents.resol.policy, hp.segment_len, 5);
  const auto stats = happo_update(buf, agents, hp);
  CHECK(stats.max_initial_ratio_deviation <= 1e-9);
  CHECK(std::isfinite(stats.critic_loss));

  // A second update after the policies moved still starts from a fresh snapshot.
  const auto buf2 = roll(cfg, agents.alloc.policy, agents.resol.policy, hp.segment_len, 6);
  CHECK(happo_update(buf2, agents, hp).max_initial_ratio_deviation <= 1e-9);
}

TEST_CASE("zero advantages leave the actors in place") {
  auto cfg = tiny_world();
  auto hp = tiny_hp();
  auto agents = SharedCriticAgents::create(cfg, hp, 2);
  auto buf = roll(cfg, agents.alloc.policy, agents.resol.policy, hp.segment_len, 7);
  // Zero rewards with a zero critic give identically zero advantages.
  RolloutBuffer zeroed(hp.segment_len);
  for (auto t : buf.data()) {
    t.reward_alloc = 0.0;
    t.reward_resol = 0.0;
    zeroed.push(std::move(t));
  }
  for (auto& w : agents.critic.critic.net().params()) w = 0.0;
  agents.critic.critic.sync_target();

  const auto before1 = copy(agents.alloc.policy.net().params());
  const auto before2 = copy(agents.resol.policy.net().params());
  const auto before_ls = agents.resol.policy.log_std();
  happo_update(zeroed, agents, hp);
  CHECK(copy(agents.alloc.policy.net().params()) == before1);
  CHECK(copy(agents.resol.policy.net().params()) == before2);
  CHECK(agents.resol.policy.log_std() == before_ls);

  auto agents2 = SharedCriticAgents::create(cfg, hp, 2);
  for (auto& w : agents2.critic.critic.net().params()) w = 0.0;
  agents2.critic.critic.sync_target();
  haa2c_update(zeroed, agents2, hp);
  CHECK(copy(agents2.alloc.policy.net().params()) == before1);
}

TEST_CASE("with an unbounded clip the first-step gradient equals the policy gradient") {
  const auto cfg = tiny_world();
  const auto hp = tiny_hp();
  const auto agents = SharedCriticAgents::create(cfg, hp, 3);
  const auto buf = roll(cfg, agents.alloc.policy, agents.resol.policy, hp.segment_len, 8);
  std::vector<double> adv(buf.size());
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1.0);
  for (auto& a : adv) a = n(rng);
  const auto rows = all_rows(buf.size());

  const auto c1 = alloc_objective_gradient(agents.alloc.policy, buf.data(), rows, adv, 1e9, SurrogateForm::kClipped, 0);
  const auto p1 =
      alloc_objective_gradient(agents.alloc.policy, buf.data(), rows, adv, 1e9, SurrogateForm::kPolicyGradient, 0);
  REQUIRE(c1.grad.size() == p1.grad.size());
  for (std::size_t k = 0; k < c1.grad.size(); ++k) CHECK(c1.grad[k] == doctest::Approx(p1.grad[k]).epsilon(1e-9));

  const auto c2 = resol_objective_gradient(agents.resol.policy, buf.data(), rows, adv, 1e9, SurrogateForm::kClipped, 0);
  const auto p2 =
      resol_objective_gradient(agents.resol.policy, buf.data(), rows, adv, 1e9, SurrogateForm::kPolicyGradient, 0);
  for (std::size_t k = 0; k < c2.net_grad.size(); ++k)
    CHECK(c2.net_grad[k] == doctest::Approx(p2.net_grad[k]).epsilon(1e-9));
  for (std::size_t k = 0; k < c2.log_std_grad.size(); ++k)
    CHECK(c2.log_std_grad[k] == doctest::Approx(p2.log_std_grad[k]).epsilon(1e-9));
}

TEST_CASE("single-sample actor loss matches the surrogate") {
  const auto cfg = tiny_world();
  const auto hp = tiny_hp();
  const auto agents = SharedCriticAgents::create(cfg, hp, 4);
  auto buf = roll(cfg, agents.alloc.policy, agents.resol.policy, 1, 9);
  auto data = buf.data();
  const double lp = data[0].log_prob_alloc;
  data[0].log_prob_alloc = lp - std::log(1.5);  // current policy is 1.5x the behaviour policy
  const std::vector<double> adv{1.0};
  const std::vector<std::size_t> row{0};
  const auto g = alloc_objective_gradient(agents.alloc.policy, data, row, adv, 0.2, SurrogateForm::kClipped, 0);
  CHECK(g.objective == doctest::Approx(1.2));
  CHECK(g.mean_ratio == doctest::Approx(1.5));
  for (double x : g.grad) CHECK(x == 0.0);

  data[0].log_prob_alloc = lp - std::log(0.5);
  const std::vector<double> neg{-1.0};
  CHECK(alloc_objective_gradient(agents.alloc.policy, data, row, neg, 0.2, SurrogateForm::kClipped, 0).objective ==
        doctest::Approx(-0.8));
}

TEST_CASE("loss gradients match finite differences end to end") {
  const auto cfg = tiny_world();
  auto hp = tiny_hp();
  hp.hidden = {3};
  auto agents = SharedCriticAgents::create(cfg, hp, 5);
  for (auto& w : agents.alloc.policy.net().params()) w *= 40.0;
  auto buf = roll(cfg, agents.alloc.policy, agents.resol.policy, 6, 10);
  auto data = buf.data();
  // Move the behaviour log-probs so some samples sit on each side of the clip.
  const std::vector<double> shift{0.05, -0.1, 0.3, -0.4, 0.0, 0.12};
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i].log_prob_alloc += shift[i];
    data[i].log_prob_resol -= shift[i];
  }
  const std::vector<double> adv{0.7, -1.1, 0.4, 2.0, -0.3, -0.9};
  const auto rows = all_rows(data.size());
  const double h = 1e-6;
  auto near = [](double fd, double an) { return std::abs(fd - an) <= 1e-4 * std::max(1e-3, std::abs(fd)); };

  for (auto form : {SurrogateForm::kClipped, SurrogateForm::kClippedRatioFirst, SurrogateForm::kPolicyGradient}) {
    auto& a = agents.alloc.policy;
    const auto g = alloc_objective_gradient(a, data, rows, adv, 0.2, form, 0.0);
    for (std::size_t k = 0; k < g.grad.size(); ++k) {
      auto& w = a.net().params()[k];
      const double keep = w;
      w = keep + h;
      const double fp = alloc_objective_gradient(a, data, rows, adv, 0.2, form, 0.0).objective;
      w = keep - h;
      const double fm = alloc_objective_gradient(a, data, rows, adv, 0.2, form, 0.0).objective;
      w = keep;
      CHECK(near((fp - fm) / (2 * h), g.grad[k]));
    }
    auto& r = agents.resol.policy;
    const auto gr = resol_objective_gradient(r, data, rows, adv, 0.2, form, 0.0);
    for (std::size_t k = 0; k < gr.net_grad.size(); ++k) {
      auto& w = r.net().params()[k];
      const double keep = w;
      w = keep + h;
      const double fp = resol_objective_gradient(r, data, rows, adv, 0.2, form, 0.0).objective;
      w = keep - h;
      const double fm = resol_objective_gradient(r, data, rows, adv, 0.2, form, 0.0).objective;
      w = keep;
      CHECK(near((fp - fm) / (2 * h), gr.net_grad[k]));
    }
    for (std::size_t d = 0; d < gr.log_std_grad.size(); ++d) {
      auto& l = r.log_std()[d];
      const double keep = l;
      l = keep + h;
      const double fp = resol_objective_gradient(r, data, rows, adv, 0.2, form, 0.0).objective;
      l = keep - h;
      const double fm = resol_objective_gradient(r, data, rows, adv, 0.2, form, 0.0).objective;
      l = keep;
      CHECK(near((fp - fm) / (2 * h), gr.log_std_grad[d]));
    }
  }

  auto& critic = agents.critic.critic.net();
  const std::vector<double> targets{0.3, -0.2, 1.5, 0.0, -2.0, 0.8};
  const auto cg = critic_loss_gradient(critic, data, rows, targets);
  for (std::size_t k = 0; k < cg.grad.size(); ++k) {
    auto& w = critic.params()[k];
    const double keep = w;
    w = keep + h;
    const double fp = critic_loss_gradient(critic, data, rows, targets).loss;
    w = keep - h;
    const double fm = critic_loss_gradient(critic, data, rows, targets).loss;
    w = keep;
    CHECK(near((fp - fm) / (2 * h), cg.grad[k]));
  }
}

TEST_CASE("haa2c and happo share the critic regression") {
  const auto cfg = tiny_world();
  auto hp = tiny_hp();
  hp.epochs = 1;
  auto a = SharedCriticAgents::create(cfg, hp, 6);
  auto b = SharedCriticAgents::create(cfg, hp, 6);
  const auto buf = roll(cfg, a.alloc.policy, a.resol.policy, hp.segment_len, 11);
  happo_update(buf, a, hp);
  haa2c_update(buf, b, hp);
  CHECK(copy(a.critic.critic.net().params()) == copy(b.critic.critic.net().params()));
}

TEST_CASE("target network refreshes every C epochs") {
  const auto cfg = tiny_world();
  auto hp = tiny_hp();
  hp.epochs = 3;
  hp.target_period = 5;
  hp.value_norm = false;
  auto agents = SharedCriticAgents::create(cfg, hp, 7);
  const auto buf = roll(cfg, agents.alloc.policy, agents.resol.policy, hp.segment_len, 12);
  const auto initial = copy(agents.critic.critic.target().params());
  happo_update(buf, agents, hp);  // 3 epochs
  CHECK(copy(agents.critic.critic.target().params()) == initial);
  happo_update(buf, agents, hp);  // 6 epochs; refreshed after the fifth
  CHECK(copy(agents.critic.critic.target().params()) != initial);
  CHECK(agents.critic.epochs == 6);
}

TEST_CASE("value normalizer") {
  ValueNormalizer n;
  CHECK(n.mean() == 0.0);
  CHECK(n.stddev() == 1.0);
  CHECK(n.normalize(4.0) == 4.0);
  n.update(std::vector<double>{1.0, 3.0});
  CHECK(n.mean() == doctest::Approx(2.0));
  CHECK(n.stddev() == doctest::Approx(1.0));
  CHECK(n.normalize(3.0) == doctest::Approx(1.0));
  CHECK(n.denormalize(n.normalize(-7.5)) == doctest::Approx(-7.5));
  n.update(std::vector<double>{5.0, 5.0});
  CHECK(n.mean() == doctest::Approx(3.5).epsilon(1e-4));  // batch means 2 and 5, weighted alike
  ValueNormalizer flat;
  flat.update(std::vector<double>{2.0, 2.0});
  CHECK(flat.stddev() == doctest::Approx(0.1));  // variance floor
}

TEST_CASE("statistics updates preserve the critic's predictions") {
  const auto cfg = tiny_world();
  auto hp = tiny_hp();
  hp.epochs = 1;
  hp.target_period = 1000;
  auto agents = SharedCriticAgents::create(cfg, hp, 13);
  const auto buf = roll(cfg, agents.alloc.policy, agents.resol.policy, hp.segment_len, 18);
  std::vector<double> before;
  for (const auto& t : buf.data()) before.push_back(agents.critic.norm.denormalize(agents.critic.critic.target_value(t.obs)));
  happo_update(buf, agents, hp);
  CHECK(agents.critic.norm.stddev() != 1.0);
  for (std::size_t i = 0; i < before.size(); ++i) {
    const double after = agents.critic.norm.denormalize(agents.critic.critic.target_value(buf.data()[i].obs));
    CHECK(after == doctest::Approx(before[i]).epsilon(1e-9));
  }
}

TEST_CASE("independent learners") {
  const auto cfg = tiny_world();
  auto hp = tiny_hp();
  hp.epochs = 10;

  SUBCASE("agent1 update does not touch agent2") {
    auto ag = IndependentAgents::create(cfg, hp, 8);
    const auto buf = roll(cfg, ag.alloc.policy, ag.resol.policy, hp.segment_len, 13);
    const auto resol_before = copy(ag.resol.policy.net().params());
    const auto resol_critic_before = copy(ag.resol_critic.critic.net().params());
    update_alloc_agent(buf, ag.alloc, ag.alloc_critic, ag.alloc_rng, hp);
    CHECK(copy(ag.resol.policy.net().params()) == resol_before);
    CHECK(copy(ag.resol_critic.critic.net().params()) == resol_critic_before);
  }

  SUBCASE("the joint update is the two halves run separately") {
    auto joint = IndependentAgents::create(cfg, hp, 9);
    auto split = IndependentAgents::create(cfg, hp, 9);
    const auto buf = roll(cfg, joint.alloc.policy, joint.resol.policy, hp.segment_len, 14);
    independent_ppo_update(buf, joint, hp);
    update_resol_agent(buf, split.resol, split.resol_critic, split.resol_rng, hp);
    update_alloc_agent(buf, split.alloc, split.alloc_critic, split.alloc_rng, hp);
    CHECK(copy(joint.alloc.policy.net().params()) == copy(split.alloc.policy.net().params()));
    CHECK(copy(joint.resol.policy.net().params()) == copy(split.resol.policy.net().params()));
  }

  SUBCASE("identical reward streams give identical critic losses") {
    auto ag = IndependentAgents::create(cfg, hp, 10);
    auto buf = roll(cfg, ag.alloc.policy, ag.resol.policy, hp.segment_len, 15);
    RolloutBuffer same(hp.segment_len);
    for (auto t : buf.data()) {
      t.reward_resol = t.reward_alloc;
      same.push(std::move(t));
    }
    // Give both private critics the same start and the same shuffles.
    ag.resol_critic = ag.alloc_critic;
    ag.resol_rng = ag.alloc_rng;
    const auto s1 = update_alloc_agent(same, ag.alloc, ag.alloc_critic, ag.alloc_rng, hp);
    const auto s2 = update_resol_agent(same, ag.resol, ag.resol_critic, ag.resol_rng, hp);
    CHECK(s1.critic_loss == s2.critic_loss);
    CHECK(copy(ag.alloc_critic.critic.net().params()) == copy(ag.resol_critic.critic.net().params()));
  }

  SUBCASE("a zero reward stream drives agent2 advantages toward zero") {
    auto ag = IndependentAgents::create(cfg, hp, 11);
    const auto buf = roll(cfg, ag.alloc.policy, ag.resol.policy, hp.segment_len, 16, true);
    const auto stats = update_resol_agent(buf, ag.resol, ag.resol_critic, ag.resol_rng, hp);
    CHECK(stats.mean_abs_adv_final < stats.mean_abs_adv_initial);
  }
}

TEST_CASE("random baseline") {
  auto cfg = tiny_world();
  cfg.n_iov = 1;
  cfg.n_mmbs = 3;
  cfg.mmbs_positions.clear();
  cfg.place_mmbs_if_empty();
  std::mt19937_64 rng(42);
  std::vector<int> counts(4, 0);
  const int n = 100'000;
  for (int i = 0; i < n; ++i) {
    const auto a = random_policy(cfg, rng);
    ++counts[a.alloc[0] == kIdle ? 3 : a.alloc[0]];
    CHECK_FALSE((a.resol[0] < 64.0 || a.resol[0] > 416.0));
  }
  for (int c : counts) CHECK(std::abs(c / double(n) - 0.25) <= 0.01);

  std::mt19937_64 r1(3);
  std::mt19937_64 r2(3);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_policy(cfg, r1);
    const auto b = random_policy(cfg, r2);
    CHECK(a.alloc == b.alloc);
    CHECK(a.resol == b.resol);
  }
}

TEST_CASE("non-finite rewards abort the update") {
  const auto cfg = tiny_world();
  const auto hp = tiny_hp();
  auto agents = SharedCriticAgents::create(cfg, hp, 12);
  const auto buf = roll(cfg, agents.alloc.policy, agents.resol.policy, hp.segment_len, 17);
  RolloutBuffer bad(hp.segment_len);
  for (auto t : buf.data()) {
    t.reward_alloc = std::nan("");
    bad.push(std::move(t));
  }
  CHECK_THROWS_AS(happo_update(bad, agents, hp), NonFiniteError);
}
