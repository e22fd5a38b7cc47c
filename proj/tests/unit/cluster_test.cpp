#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "hawkes/cluster.hpp"
#include "hawkes/combinatorics.hpp"
#include "hawkes/errors.hpp"
#include "hawkes/rng.hpp"
#include "hawkes/stats.hpp"

using namespace hawkes;

namespace {

InteractionParams standard_params(double eta = 1.0) {
  return {ResponseKernel::exponential(0.6, 2.0),
          ResponseKernel::exponential(0.4, 1.0), eta};
}

// Per-point descendant counts in chronological order.
std::vector<int> child_counts(const ClusterRecord& rec) {
  std::vector<int> counts(rec.epochs.size(), 0);
  for (int p : rec.parents) {
    if (p >= 0) ++counts[static_cast<std::size_t>(p)];
  }
  return counts;
}

}  // namespace

TEST_CASE("cluster record invariants and validation") {
  RngStream rng(3, 0);
  for (int i = 0; i < 200; ++i) {
    const auto rec = simulate_cluster_thinning(standard_params(2.0), rng);
    CHECK_NOTHROW(rec.validate());
    CHECK(rec.size() == rec.side_count(Side::One) + rec.side_count(Side::Two) + 1);
    CHECK(rec.duration() == rec.epochs.back());
  }
  ClusterRecord bad;
  bad.epochs = {0.0, 1.0};
  bad.sides = {Side::Initial, Side::One};
  bad.parents = {-1, 1};  // parent does not precede the child
  bad.marks = {1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::logic_error);
}

TEST_CASE("stability preconditions") {
  RngStream rng(4, 0);
  InteractionParams unstable{ResponseKernel::exponential(0.7, 1.0),
                             ResponseKernel::exponential(0.4, 1.0), 1.0};
  CHECK_THROWS_AS(simulate_cluster_thinning(unstable, rng), StabilityError);
  CHECK_THROWS_AS(simulate_cluster_parking(unstable, rng), StabilityError);
  InteractionParams bad_eta = standard_params(0.0);
  CHECK_THROWS_AS(simulate_cluster_parking(bad_eta, rng), StabilityError);
}

TEST_CASE("near-zero response mass gives singleton clusters") {
  RngStream rng(5, 0);
  InteractionParams tiny{ResponseKernel::exponential(1e-14, 1.0),
                         ResponseKernel::exponential(1e-14, 1.0), 1.0};
  for (int i = 0; i < 1000; ++i) {
    const auto rec = simulate_cluster_thinning(tiny, rng);
    CHECK(rec.size() == 1);
    CHECK(rec.duration() == 0.0);
  }
}

TEST_CASE("thinning sampler mean size is 1/(1-rho)") {
  RngStream rng(6, 0);
  const auto params = standard_params(2.0);  // rho = 0.3 + 0.4 = 0.7
  const long n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < n; ++i) {
    const double v = static_cast<double>(simulate_cluster_thinning(params, rng).size());
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq - n * mean * mean) / (n - 1.0) / n);
  CHECK(std::abs(mean - 1.0 / 0.3) < 3.0 * se);
}

TEST_CASE("parking sampler conditional structure") {
  RngStream rng(7, 0);
  const auto params = standard_params(1.0);

  SUBCASE("side split given size is binomial") {
    const int n = 4;  // non-initial points
    std::vector<long> counts(n + 1, 0);
    long have = 0;
    while (have < 30000) {
      const auto rec = simulate_cluster_parking(params, rng);
      if (rec.size() != n + 1) continue;
      counts[static_cast<std::size_t>(rec.side_count(Side::One))] += 1;
      ++have;
    }
    const double p = params.g1.mass() / params.rho();
    std::vector<double> probs(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) {
      double b = 1.0;
      for (int j = 0; j < k; ++j) b *= double(n - j) / (j + 1);
      probs[static_cast<std::size_t>(k)] =
          b * std::pow(p, k) * std::pow(1 - p, n - k);
    }
    CHECK(chi_square_gof(counts, probs).verdict);
  }

  SUBCASE("descendant pattern at size 4 matches the uniform parking law") {
    // For three non-initial points the chronological child-count vectors and
    // their probabilities follow from the 16 parking functions of length 3.
    const std::map<std::vector<int>, double> expected{
        {{3, 0, 0, 0}, 1.0 / 16}, {{2, 1, 0, 0}, 3.0 / 16},
        {{2, 0, 1, 0}, 3.0 / 16}, {{1, 2, 0, 0}, 3.0 / 16},
        {{1, 1, 1, 0}, 6.0 / 16}};
    std::map<std::vector<int>, long> counts;
    long have = 0;
    while (have < 30000) {
      const auto rec = simulate_cluster_parking(params, rng);
      if (rec.size() != 4) continue;
      counts[child_counts(rec)] += 1;
      ++have;
    }
    std::vector<long> cells;
    std::vector<double> probs;
    for (const auto& [pattern, prob] : expected) {
      auto it = counts.find(pattern);
      cells.push_back(it == counts.end() ? 0 : it->second);
      probs.push_back(prob);
      if (it != counts.end()) counts.erase(it);
    }
    CHECK(counts.empty());  // no pattern outside the support
    CHECK(chi_square_gof(cells, probs).verdict);
  }
}

TEST_CASE("marked thinning with unit constant marks is the plain cluster") {
  RngStream rng(8, 0);
  MarkedParams params{ResponseKernel::exponential(0.5, 1.0), MarkKind::Constant,
                      1.0};
  const long n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < n; ++i) {
    const double v =
        static_cast<double>(simulate_marked_thinning(params, rng).size());
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq - n * mean * mean) / (n - 1.0) / n);
  CHECK(std::abs(mean - 2.0) < 3.0 * se);
}

TEST_CASE("marked stability precondition") {
  RngStream rng(9, 0);
  MarkedParams unstable{ResponseKernel::exponential(0.6, 1.0), MarkKind::Borel,
                        0.5};  // 0.6 * 2 >= 1
  CHECK_THROWS_AS(simulate_marked_thinning(unstable, rng), StabilityError);
}

TEST_CASE("borel-marked duration equals the 2-paced asynchrony limit") {
  // One-kernel marked clusters with Borel(rho1) marks realize the 2-paced
  // asynchrony construction for the two-sided model.
  RngStream rng(10, 0);
  const auto base = standard_params(3.0);  // limit law must ignore eta
  MarkedParams marked{base.g2, MarkKind::Borel, base.g1.mass()};
  const long n = 20000;
  std::vector<double> limit_durations, marked_durations;
  for (long i = 0; i < n; ++i) {
    limit_durations.push_back(simulate_asynchrony_limit(Side::Two, base, rng));
    marked_durations.push_back(simulate_marked_thinning(marked, rng).duration());
  }
  CHECK(ks_two_sample(limit_durations, marked_durations).verdict);
}

TEST_CASE("dyck-path cluster sampler") {
  RngStream rng(12, 0);
  MarkedParams params{ResponseKernel::exponential(0.45, 1.5), MarkKind::Constant,
                      1.0};

  SUBCASE("conditional descendant pattern at size 3 matches the exact law") {
    // Two non-initial points: path [1,1] has weight 1/2! and [1,2] weight 1.
    long chain = 0, star = 0;
    long have = 0;
    while (have < 30000) {
      const auto rec = simulate_dyck_cluster(params, rng);
      if (rec.size() != 3) continue;
      const auto counts = child_counts(rec);
      if (counts[0] == 2) ++star;
      else ++chain;
      ++have;
    }
    CHECK(chi_square_gof({star, chain}, {1.0 / 3, 2.0 / 3}).verdict);
  }

  SUBCASE("duration law matches bounded marked thinning") {
    const long n = 20000;
    std::vector<double> dyck_durations, thinning_durations;
    for (long i = 0; i < n; ++i) {
      dyck_durations.push_back(simulate_dyck_cluster(params, rng).duration());
    }
    while (static_cast<long>(thinning_durations.size()) < n) {
      const auto rec = simulate_marked_thinning(params, rng);
      if (rec.size() - 1 > kDyckEnumerationBound) continue;  // match resampling
      thinning_durations.push_back(rec.duration());
    }
    CHECK(ks_two_sample(dyck_durations, thinning_durations).verdict);
  }

  SUBCASE("oversize policy error") {
    // Near-critical marked law realizes oversized clusters quickly.
    MarkedParams heavy{ResponseKernel::exponential(0.95, 1.0),
                       MarkKind::Constant, 1.0};
    bool saw_capacity = false;
    for (int i = 0; i < 2000 && !saw_capacity; ++i) {
      try {
        simulate_dyck_cluster(heavy, rng, OversizePolicy::Error);
      } catch (const CapacityError&) {
        saw_capacity = true;
      }
    }
    CHECK(saw_capacity);
  }
}

TEST_CASE("conditional exponential chronology") {
  RngStream rng(13, 0);

  SUBCASE("single offspring is Exp(beta)") {
    const double beta = 2.5;
    const long n = 100000;
    double sum = 0.0;
    for (long i = 0; i < n; ++i) {
      const auto rec = simulate_exp_marked_conditional(beta, {1.0, 1.0}, rng);
      REQUIRE(rec.size() == 2);
      sum += rec.duration();
    }
    // Exp(beta): mean 1/beta, se = 1/(beta sqrt(n)).
    CHECK(std::abs(sum / n - 1.0 / beta) < 3.0 / (beta * std::sqrt(double(n))));
  }

  SUBCASE("two offspring mixture mean") {
    const double beta = 2.0;
    const long n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (long i = 0; i < n; ++i) {
      const double tau =
          simulate_exp_marked_conditional(beta, {1.0, 1.0, 1.0}, rng).duration();
      sum += tau;
      sum_sq += tau * tau;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq - n * mean * mean) / (n - 1.0) / n);
    // E[tau] = (1/beta) [P([1,1])(1/2 + 1) + P([1,2])(1 + 1)] = 11/(6 beta).
    CHECK(std::abs(mean - 11.0 / 6.0 / beta) < 3.0 * se);
  }

  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(simulate_exp_marked_conditional(0.0, {1.0}, rng),
                    std::domain_error);
    CHECK_THROWS_AS(simulate_exp_marked_conditional(1.0, {}, rng),
                    std::domain_error);
    CHECK_THROWS_AS(
        simulate_exp_marked_conditional(
            1.0, std::vector<double>(kDyckEnumerationBound + 2, 1.0), rng),
        CapacityError);
  }
}

TEST_CASE("epoch-gap rate parameterizations agree on every path up to n=6") {
  for (int n = 1; n <= 6; ++n) {
    for (const auto& d : enumerate_dyck_paths(n)) {
      const auto kappa = kappa_histogram(d);
      for (int l = 0; l < n; ++l) {
        const int primary = dyck_gap_rate(kappa, l);
        const int alternate = dyck_gap_rate_alternate(kappa, n - 1 - l);
        CHECK(primary == alternate);
        CHECK(primary >= 1);
      }
    }
  }
}

TEST_CASE("asynchrony limits") {
  const auto params = standard_params(1.0);

  SUBCASE("side-1 limit ignores eta entirely") {
    // Identical streams at different eta must give identical durations.
    for (int i = 0; i < 50; ++i) {
      RngStream a(14, static_cast<std::uint64_t>(i));
      RngStream b(14, static_cast<std::uint64_t>(i));
      const double ta = simulate_asynchrony_limit(Side::One, standard_params(0.1), a);
      const double tb = simulate_asynchrony_limit(Side::One, standard_params(10.0), b);
      CHECK(ta == tb);
    }
  }

  SUBCASE("side-1 limit with negligible side-2 mass is the g1 cluster duration") {
    InteractionParams lop{ResponseKernel::exponential(0.5, 2.0),
                          ResponseKernel::exponential(1e-12, 1.0), 1.0};
    RngStream rng(15, 0);
    const long n = 20000;
    std::vector<double> limit, direct;
    for (long i = 0; i < n; ++i) {
      limit.push_back(simulate_asynchrony_limit(Side::One, lop, rng));
      InteractionParams solo{lop.g1, lop.g2, 1.0};
      direct.push_back(simulate_cluster_parking(solo, rng).duration());
    }
    CHECK(ks_two_sample(limit, direct).verdict);
  }

  SUBCASE("invalid side") {
    RngStream rng(16, 0);
    CHECK_THROWS_AS(simulate_asynchrony_limit(Side::Initial, params, rng),
                    std::domain_error);
  }
}

TEST_CASE("duration statistics helper") {
  auto degenerate = [](RngStream&) { return 0.0; };
  const auto stats = estimate_duration_stats(degenerate, 100, 1, 0);
  CHECK(stats.mean == 0.0);
  CHECK(stats.variance == 0.0);
  CHECK(stats.ci_half_width == 0.0);
  CHECK_THROWS_AS(estimate_duration_stats(degenerate, 1, 1, 0), std::domain_error);

  // Determinism: identical seeds reproduce identical statistics.
  auto sampler = [](RngStream& rng) { return rng.exponential(1.0); };
  const auto a = estimate_duration_stats(sampler, 1000, 42, 7);
  const auto b = estimate_duration_stats(sampler, 1000, 42, 7);
  CHECK(a.mean == b.mean);
  CHECK(a.ci_half_width == b.ci_half_width);
}
