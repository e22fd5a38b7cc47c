#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "hawkes/errors.hpp"
#include "hawkes/queue_sim.hpp"

using namespace hawkes;

namespace {

QuadParams tiny_quad() {
  // Effectively contribution-free conversations (masses ~1e-9).
  return QuadParams{ResponseKernel::exponential(1e-9, 1.0),
                    ResponseKernel::exponential(1e-9, 1.0),
                    ResponseKernel::exponential(1e-9, 1.0),
                    ResponseKernel::exponential(1e-9, 1.0)};
}

// Independent service-system reference: Poisson arrivals, fixed service time,
// kappa servers, exponential patience. Written against a different generator
// and event loop than the production engine.
struct MiniMetrics {
  double throughput = 0.0;
  double abandonment = 0.0;
};

MiniMetrics mini_mdk(double lambda, double service, int kappa, double theta,
                     double horizon, long reps, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::exponential_distribution<double> arrival(lambda);
  std::exponential_distribution<double> patience(theta);
  long completions = 0, abandonments = 0;
  for (long r = 0; r < reps; ++r) {
    double now = 0.0;
    double next_arrival = arrival(gen);
    std::vector<double> busy_until;           // active service end times
    std::vector<double> queue_abandon_times;  // FCFS
    while (true) {
      double te = horizon;
      int kind = 0;  // 0 horizon, 1 arrival, 2 completion, 3 abandonment
      std::size_t idx = 0;
      if (next_arrival < te) { te = next_arrival; kind = 1; }
      for (std::size_t i = 0; i < busy_until.size(); ++i) {
        if (busy_until[i] < te) { te = busy_until[i]; kind = 2; idx = i; }
      }
      for (std::size_t i = 0; i < queue_abandon_times.size(); ++i) {
        if (queue_abandon_times[i] < te) { te = queue_abandon_times[i]; kind = 3; idx = i; }
      }
      now = te;
      if (kind == 0) break;
      if (kind == 1) {
        next_arrival = now + arrival(gen);
        if (static_cast<int>(busy_until.size()) < kappa) {
          busy_until.push_back(now + service);
        } else {
          queue_abandon_times.push_back(now + patience(gen));
        }
      } else if (kind == 2) {
        ++completions;
        busy_until.erase(busy_until.begin() + static_cast<std::ptrdiff_t>(idx));
        if (!queue_abandon_times.empty()) {
          queue_abandon_times.erase(queue_abandon_times.begin());
          busy_until.push_back(now + service);
        }
      } else {
        ++abandonments;
        queue_abandon_times.erase(queue_abandon_times.begin() +
                                  static_cast<std::ptrdiff_t>(idx));
      }
    }
  }
  const double denom = horizon * static_cast<double>(reps);
  return {completions / denom, abandonments / denom};
}

}  // namespace

TEST_CASE("preset responsiveness ratios are stored exactly") {
  const auto check = [](Preset p, double r11, double r12, double r21, double r22) {
    const auto q = preset_params(p);
    CHECK(q.ratio(1, 1) == r11);
    CHECK(q.ratio(1, 2) == r12);
    CHECK(q.ratio(2, 1) == r21);
    CHECK(q.ratio(2, 2) == r22);
    CHECK(q.g11.beta() == 3.64);
    CHECK(q.g12.beta() == 38.388);
    CHECK(q.g21.beta() == 20.374);
    CHECK(q.g22.beta() == 260.1);
  };
  check(Preset::HighCo, 0.032, 0.501, 1.039, 0.303);
  check(Preset::ModerateCo, 0.232, 0.367, 0.839, 0.437);
  check(Preset::ModerateSelf, 0.482, 0.199, 0.589, 0.605);
  check(Preset::HighSelf, 0.732, 0.032, 0.339, 0.772);
}

TEST_CASE("preset names round trip and metadata is carried") {
  for (Preset p : {Preset::HighCo, Preset::ModerateCo, Preset::ModerateSelf,
                   Preset::HighSelf}) {
    const auto back = preset_from_name(preset_name(p));
    REQUIRE(back.has_value());
    CHECK(*back == p);
  }
  CHECK_FALSE(preset_from_name("nonsense").has_value());
  CHECK_FALSE(preset_metadata_note().empty());
}

TEST_CASE("stability diagnostics for the quad model") {
  const auto q = preset_params(Preset::ModerateCo);
  CHECK(check_stability_quad(q) == doctest::Approx(0.898786).epsilon(1e-4));
  CHECK(expected_size_quad(q) == doctest::Approx(11.2637).epsilon(1e-4));
  CHECK_NOTHROW(q.require_stable());

  // All four presets are stable.
  for (Preset p : {Preset::HighCo, Preset::ModerateCo, Preset::ModerateSelf,
                   Preset::HighSelf}) {
    CHECK(check_stability_quad(preset_params(p)) < 1.0);
  }

  QuadParams unstable = q;
  unstable.g11 = ResponseKernel::exponential(1.1, 1.0);  // rho11 = 1.1
  CHECK(check_stability_quad(unstable) > 1.0);
  CHECK_THROWS_AS(unstable.require_stable(), StabilityError);
  CHECK_THROWS_AS(expected_size_quad(unstable), StabilityError);
  CHECK_THROWS_AS(q.kernel(0, 1), std::domain_error);
}

TEST_CASE("queue config validation") {
  QueueConfig cfg;
  cfg.quad = preset_params(Preset::ModerateCo);
  CHECK_NOTHROW(cfg.validate());

  auto expect_throw = [](QueueConfig c) {
    CHECK_THROWS_AS(c.validate(), std::domain_error);
  };
  { QueueConfig c = cfg; c.arrival_rate = 0.0; expect_throw(c); }
  { QueueConfig c = cfg; c.patience_rate = -1.0; expect_throw(c); }
  { QueueConfig c = cfg; c.max_concurrency = 0; expect_throw(c); }
  { QueueConfig c = cfg; c.closure_target = 1.0; expect_throw(c); }
  { QueueConfig c = cfg; c.horizon = 0.0; expect_throw(c); }
  { QueueConfig c = cfg; c.replications = 1; expect_throw(c); }
  { QueueConfig c = cfg; c.fixed_duration_stub = -2.0; expect_throw(c); }
  {
    QueueConfig c = cfg;
    c.quad.g11 = ResponseKernel::exponential(1.1, 1.0);
    CHECK_THROWS_AS(c.validate(), StabilityError);
    c.fixed_duration_stub = 1.0;  // the stub path skips the kernel model
    CHECK_NOTHROW(c.validate());
  }
}

TEST_CASE("conversation state dynamics") {
  const auto q = preset_params(Preset::ModerateCo);
  ConversationState state(q);
  CHECK(state.residual_mass() == 0.0);
  CHECK(state.closure_probability() == 1.0);
  CHECK(state.closure_delay(1.0, 0.9) == 0.0);

  state.add_contribution(1);
  // A customer contribution exposes the two customer-response directions.
  CHECK(state.residual_mass() ==
        doctest::Approx(q.ratio(1, 1) + q.ratio(2, 1)).epsilon(1e-12));
  CHECK(state.intensity_side1() == doctest::Approx(q.g11.alpha()));
  CHECK(state.intensity_side2(2.0) == doctest::Approx(2.0 * q.g21.alpha()));
  CHECK_THROWS_AS(state.add_contribution(3), std::domain_error);

  SUBCASE("closure probability is monotone under decay") {
    state.add_contribution(2);
    double prev = state.closure_probability();
    for (int i = 0; i < 20; ++i) {
      state.advance(0.05, 0.7);
      const double p = state.closure_probability();
      CHECK(p >= prev);
      prev = p;
    }
  }

  SUBCASE("closure delay lands exactly on the target") {
    state.add_contribution(2);
    state.add_contribution(1);
    for (double eta : {0.3, 1.0, 4.0}) {
      ConversationState probe = state;
      const double target = 0.9;
      const double delay = probe.closure_delay(eta, target);
      CHECK(delay > 0.0);
      probe.advance(delay, eta);
      CHECK(probe.closure_probability() == doctest::Approx(target).epsilon(1e-9));
    }
  }

  SUBCASE("no delay once the target is already met") {
    ConversationState fresh(q);
    fresh.add_contribution(1);
    const double p0 = fresh.closure_probability();
    CHECK(fresh.closure_delay(1.0, p0 * 0.999) == 0.0);
  }
}

TEST_CASE("stub engine reproduces an independent fixed-service reference") {
  QueueConfig cfg;
  cfg.arrival_rate = 3.0;
  cfg.patience_rate = 0.7;
  cfg.max_concurrency = 2;
  cfg.fixed_duration_stub = 1.0;
  cfg.horizon = 500.0;
  cfg.replications = 64;
  cfg.seed = 31;
  const auto metrics = simulate_queue(cfg);
  const auto ref = mini_mdk(3.0, 1.0, 2, 0.7, 2000.0, 64, 77u);
  CHECK(std::abs(metrics.throughput - ref.throughput) <
        3.0 * metrics.throughput_ci + 0.05);
  CHECK(std::abs(metrics.abandonment_rate - ref.abandonment) <
        3.0 * metrics.abandonment_ci + 0.05);
  // Offered load far exceeds capacity 2, so the servers stay nearly saturated.
  CHECK(metrics.mean_occupancy > 1.8);
  CHECK(metrics.mean_occupancy <= 2.0);
  // Flow accounting: everything offered is completed, abandoned, or in system.
  CHECK(metrics.throughput + metrics.abandonment_rate <=
        cfg.arrival_rate * 1.05);
}

TEST_CASE("saturated single-slot stub throughput is 1/duration") {
  QueueConfig cfg;
  cfg.arrival_rate = 50.0;
  cfg.patience_rate = 0.5;
  cfg.max_concurrency = 1;
  cfg.fixed_duration_stub = 2.0;
  cfg.horizon = 400.0;
  cfg.replications = 32;
  cfg.seed = 5;
  const auto metrics = simulate_queue(cfg);
  CHECK(metrics.throughput == doctest::Approx(0.5).epsilon(0.02));
  CHECK(metrics.mean_occupancy == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("vanishing demand produces an idle system") {
  QueueConfig cfg;
  cfg.arrival_rate = 1e-6;
  cfg.quad = preset_params(Preset::ModerateCo);
  cfg.horizon = 100.0;
  cfg.replications = 8;
  const auto metrics = simulate_queue(cfg);
  CHECK(metrics.throughput < 1e-3);
  CHECK(metrics.mean_occupancy < 1e-3);
}

TEST_CASE("near-decoupled dynamics reduce to the single-direction size law") {
  // Only the customer self-response direction carries mass, so conversation
  // sizes follow the single-type branching law with mean 1/(1 - rho11).
  const double rho11 = 0.4;
  QueueConfig cfg;
  cfg.quad = tiny_quad();
  cfg.quad.g11 = ResponseKernel::exponential(rho11 * 2.0, 2.0);
  cfg.arrival_rate = 0.5;
  cfg.max_concurrency = 1000;  // no waiting, no admission truncation
  cfg.closure_target = 0.999;
  cfg.patience_rate = 0.5;
  cfg.horizon = 2000.0;
  cfg.replications = 24;
  cfg.seed = 11;

  long contributions = 0, conversations = 0;
  for (long r = 0; r < cfg.replications; ++r) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
    const auto res = run_queue_replication(cfg, rng);
    CHECK(res.abandonments == 0);
    contributions += res.contributions;
    conversations += res.completions + res.residual_in_system;
  }
  const double mean_size =
      static_cast<double>(contributions) / static_cast<double>(conversations);
  CHECK(mean_size == doctest::Approx(1.0 / (1.0 - rho11)).epsilon(0.03));
}

TEST_CASE("replication determinism and stream independence") {
  QueueConfig cfg;
  cfg.quad = preset_params(Preset::ModerateSelf);
  cfg.arrival_rate = 8.0;
  cfg.max_concurrency = 3;
  cfg.horizon = 50.0;
  cfg.replications = 16;
  cfg.seed = 123;
  const auto a = simulate_queue(cfg);
  const auto b = simulate_queue(cfg);
  CHECK(a.throughput == b.throughput);
  CHECK(a.abandonment_rate == b.abandonment_rate);
  CHECK(a.mean_occupancy == b.mean_occupancy);

  cfg.seed = 124;
  const auto c = simulate_queue(cfg);
  CHECK(c.throughput != a.throughput);

  // Throughput cannot exceed the offered demand.
  CHECK(a.throughput + a.abandonment_rate <= cfg.arrival_rate * 1.1);
}

TEST_CASE("event log reports replications and event lines") {
  QueueConfig cfg;
  cfg.quad = preset_params(Preset::ModerateCo);
  cfg.arrival_rate = 4.0;
  cfg.horizon = 5.0;
  cfg.replications = 2;
  std::ostringstream log;
  simulate_queue(cfg, &log);
  const std::string text = log.str();
  CHECK(text.find("# replication 0") != std::string::npos);
  CHECK(text.find("# replication 1") != std::string::npos);
  CHECK(text.find("event=arrival") != std::string::npos);
}

TEST_CASE("concurrency sweep") {
  QueueConfig base;
  base.quad = preset_params(Preset::ModerateCo);
  base.arrival_rate = 8.0;
  base.horizon = 40.0;
  base.replications = 8;
  base.seed = 9;

  SUBCASE("a single-cell sweep reproduces the direct run") {
    base.max_concurrency = 3;
    base.slowdown = SlowdownSpec::polynomial(1.2);
    const auto direct = simulate_queue(base);
    const auto table = sweep_kappa(base, {3}, {1.2});
    REQUIRE(table.cells.size() == 1);
    REQUIRE_FALSE(table.cells[0].error.has_value());
    CHECK(table.cells[0].metrics.throughput == direct.throughput);
    CHECK(table.cells[0].metrics.abandonment_rate == direct.abandonment_rate);
    CHECK(table.cells[0].metrics.mean_occupancy == direct.mean_occupancy);
  }

  SUBCASE("bad cells are captured without aborting the grid") {
    const auto table = sweep_kappa(base, {0, 1, 2}, {1.0});
    REQUIRE(table.cells.size() == 3);
    CHECK(table.cells[0].error.has_value());
    CHECK_FALSE(table.cells[1].error.has_value());
    CHECK_FALSE(table.cells[2].error.has_value());
    CHECK(table.throughput_argmax(1.0).has_value());
    CHECK_FALSE(table.throughput_argmax(7.0).has_value());
  }

  SUBCASE("argmax and argmin read the table correctly") {
    KappaTable table;
    table.cells.push_back({1.3, 1, {0.5, 0.0, 0.9, 0.0, 0.0}, std::nullopt});
    table.cells.push_back({1.3, 2, {0.8, 0.0, 0.4, 0.0, 0.0}, std::nullopt});
    table.cells.push_back({1.3, 3, {0.6, 0.0, 0.7, 0.0, 0.0}, std::nullopt});
    table.cells.push_back({2.0, 4, {9.9, 0.0, 0.0, 0.0, 0.0}, std::nullopt});
    CHECK(table.throughput_argmax(1.3) == 2);
    CHECK(table.abandonment_argmin(1.3) == 2);
    CHECK(table.throughput_argmax(2.0) == 4);
  }
}
