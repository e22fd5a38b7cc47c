#include "hawkes/cluster.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hawkes/errors.hpp"

namespace hawkes {

long ClusterRecord::side_count(Side s) const {
  long c = 0;
  for (Side v : sides) c += (v == s);
  return c;
}

void ClusterRecord::validate() const {
  const std::size_t n = epochs.size();
  if (n == 0 || sides.size() != n || parents.size() != n || marks.size() != n) {
    throw std::logic_error("cluster-sim: malformed ClusterRecord shape");
  }
  if (epochs[0] != 0.0 || sides[0] != Side::Initial || parents[0] != -1) {
    throw std::logic_error("cluster-sim: initial point must be (0, initial, -1)");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(epochs[i] > epochs[i - 1])) {
      throw std::logic_error("cluster-sim: epochs must be strictly increasing");
    }
    if (parents[i] < 0 || parents[i] >= static_cast<int>(i)) {
      throw std::logic_error("cluster-sim: parent must precede child");
    }
    if (!(marks[i] > 0.0)) {
      throw std::logic_error("cluster-sim: marks must be positive");
    }
  }
}

void InteractionParams::require_stable() const {
  if (!(eta > 0.0)) {
    throw StabilityError("cluster-sim: synchronicity eta must be > 0");
  }
  if (!(rho() < 1.0)) {
    throw StabilityError("cluster-sim: rho1 + rho2 must be < 1 (Assumption violated)");
  }
}

double MarkedParams::mean_mark() const {
  switch (mark_kind) {
    case MarkKind::Constant:
      return mark_value;
    case MarkKind::Borel:
      return 1.0 / (1.0 - mark_value);
  }
  return 0.0;
}

void MarkedParams::require_stable() const {
  if (mark_kind == MarkKind::Constant && !(mark_value > 0.0)) {
    throw StabilityError("cluster-sim: constant mark must be > 0");
  }
  if (mark_kind == MarkKind::Borel &&
      (!(mark_value >= 0.0) || mark_value >= 1.0)) {
    throw StabilityError("cluster-sim: Borel mark ratio must be in [0, 1)");
  }
  if (!(kernel.mass() * mean_mark() < 1.0)) {
    throw StabilityError("cluster-sim: mass * E[mark] must be < 1");
  }
}

namespace {

struct RawPoint {
  double epoch;
  Side side;
  int parent;  // pre-sort index
  double mark;
};

ClusterRecord finalize(std::vector<RawPoint>&& points) {
  const std::size_t n = points.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a].epoch < points[b].epoch;
  });
  std::vector<int> position(n);
  for (std::size_t r = 0; r < n; ++r) position[order[r]] = static_cast<int>(r);

  ClusterRecord rec;
  rec.epochs.reserve(n);
  rec.sides.reserve(n);
  rec.parents.reserve(n);
  rec.marks.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    const RawPoint& p = points[order[r]];
    rec.epochs.push_back(p.epoch);
    rec.sides.push_back(p.side);
    rec.parents.push_back(p.parent < 0 ? -1 : position[p.parent]);
    rec.marks.push_back(p.mark);
  }
#ifndef NDEBUG
  rec.validate();
#endif
  return rec;
}

// Points of the inhomogeneous Poisson stream with intensity scale*g(u),
// u >= 0, by time-rescaling: offsets G^{-1}(S_k/scale) for standard
// exponential partial sums S_k below scale*mass.
template <typename Emit>
void emit_response_stream(const ResponseKernel& kernel, double scale,
                          double time_scale, RngStream& rng, Emit&& emit) {
  const double budget = scale * kernel.mass();
  double s = rng.exponential(1.0);
  while (s < budget) {
    emit(kernel.inverse_cdf(s / budget) * time_scale);
    s += rng.exponential(1.0);
  }
}

}  // namespace

ClusterRecord simulate_cluster_thinning(const InteractionParams& params,
                                        RngStream& rng) {
  params.require_stable();
  std::vector<RawPoint> points;
  points.push_back({0.0, Side::Initial, -1, 1.0});
  // Breadth-first over the branching tree; every point spawns one stream per
  // side. Side-2 offsets are sampled at eta = 1 and rescaled by 1/eta.
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double t = points[i].epoch;
    emit_response_stream(params.g1, 1.0, 1.0, rng, [&](double offset) {
      points.push_back({t + offset, Side::One, static_cast<int>(i), 1.0});
    });
    emit_response_stream(params.g2, 1.0, 1.0 / params.eta, rng, [&](double offset) {
      points.push_back({t + offset, Side::Two, static_cast<int>(i), 1.0});
    });
    if (static_cast<long>(points.size()) > kClusterPointGuard) {
      throw DivergenceError("cluster-sim: cluster exceeded 10^6 points");
    }
  }
  return finalize(std::move(points));
}

ClusterRecord simulate_cluster_parking(const InteractionParams& params,
                                       RngStream& rng) {
  params.require_stable();
  const double rho1 = params.g1.mass();
  const double rho = params.rho();
  const long n_total = sample_borel(BorelLaw{rho}, rng);

  std::vector<RawPoint> points;
  points.reserve(n_total);
  points.push_back({0.0, Side::Initial, -1, 1.0});
  if (n_total == 1) return finalize(std::move(points));

  ParkingFunction pi = sample_uniform_parking_function(static_cast<int>(n_total - 1), rng);
  std::sort(pi.begin(), pi.end());
  for (long i = 1; i < n_total; ++i) {
    const int parent = pi[i - 1] - 1;  // sorted entry: pi_(i) <= i
    const bool side1 = rng.bernoulli(rho1 / rho);
    double offset;
    if (side1) {
      offset = params.g1.inverse_cdf(rng.uniform());
    } else {
      offset = params.g2.inverse_cdf(rng.uniform()) / params.eta;
    }
    points.push_back({points[parent].epoch + offset,
                      side1 ? Side::One : Side::Two, parent, 1.0});
  }
  return finalize(std::move(points));
}

namespace {

double draw_mark(const MarkedParams& params, RngStream& rng) {
  if (params.mark_kind == MarkKind::Constant) return params.mark_value;
  return static_cast<double>(sample_borel(BorelLaw{params.mark_value}, rng));
}

}  // namespace

ClusterRecord simulate_marked_thinning(const MarkedParams& params, RngStream& rng) {
  params.require_stable();
  std::vector<RawPoint> points;
  points.push_back({0.0, Side::Initial, -1, draw_mark(params, rng)});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double t = points[i].epoch;
    emit_response_stream(params.kernel, points[i].mark, 1.0, rng, [&](double offset) {
      points.push_back({t + offset, Side::One, static_cast<int>(i),
                        draw_mark(params, rng)});
    });
    if (static_cast<long>(points.size()) > kClusterPointGuard) {
      throw DivergenceError("cluster-sim: marked cluster exceeded 10^6 points");
    }
  }
  return finalize(std::move(points));
}

ClusterRecord simulate_dyck_cluster(const MarkedParams& params, RngStream& rng,
                                    OversizePolicy policy) {
  params.require_stable();
  const double rho_bar = params.kernel.mass();
  // Size and marks jointly from the branching walk; descendant counts are then
  // resampled conditionally from the weighted Dyck distribution.
  std::vector<double> marks;
  for (;;) {
    marks.clear();
    long frontier = 1;
    long total = 1;
    marks.push_back(draw_mark(params, rng));
    long consumed = 0;
    while (frontier > 0) {
      long offspring = rng.poisson(rho_bar * marks[consumed]);
      ++consumed;
      total += offspring;
      frontier += offspring - 1;
      for (long j = 0; j < offspring; ++j) marks.push_back(draw_mark(params, rng));
      if (total > kClusterPointGuard) {
        throw DivergenceError("cluster-sim: Dyck cluster walk exceeded 10^6 points");
      }
    }
    marks.resize(total);
    if (total - 1 <= kDyckEnumerationBound) break;
    if (policy == OversizePolicy::Error) {
      throw CapacityError(
          "cluster-sim: realized size exceeds the Dyck enumeration bound");
    }
  }

  const long n_total = static_cast<long>(marks.size());
  std::vector<RawPoint> points;
  points.push_back({0.0, Side::Initial, -1, marks[0]});
  if (n_total == 1) return finalize(std::move(points));

  const int n = static_cast<int>(n_total - 1);
  DyckPath d = sample_weighted_dyck_path(
      n, std::vector<double>(marks.begin(), marks.end() - 1), rng);
  for (int i = 1; i <= n; ++i) {
    const int parent = d[i - 1] - 1;
    const double offset = params.kernel.inverse_cdf(rng.uniform());
    points.push_back({points[parent].epoch + offset, Side::One, parent, marks[i]});
  }
  return finalize(std::move(points));
}

int dyck_gap_rate(const std::vector<int>& kappa, int l) {
  int sum = 0;
  for (int j = 0; j <= l; ++j) sum += kappa[j];
  return sum - l;
}

int dyck_gap_rate_alternate(const std::vector<int>& kappa, int i) {
  const int n = static_cast<int>(kappa.size());
  int sum = 0;
  for (int j = n - i; j <= n - 1; ++j) sum += kappa[j];
  return i + 1 - sum;
}

ClusterRecord simulate_exp_marked_conditional(double beta,
                                              const std::vector<double>& marks,
                                              RngStream& rng) {
  if (!(beta > 0.0)) {
    throw std::domain_error("cluster-sim: conditional chronology requires beta > 0");
  }
  if (marks.empty()) {
    throw std::domain_error("cluster-sim: marks must include the initial point");
  }
  const int n = static_cast<int>(marks.size()) - 1;
  if (n > kDyckEnumerationBound) {
    throw CapacityError("cluster-sim: conditional chronology capped at the "
                        "Dyck enumeration bound");
  }
  ClusterRecord rec;
  rec.epochs.push_back(0.0);
  rec.sides.push_back(Side::Initial);
  rec.parents.push_back(-1);
  rec.marks.push_back(marks[0]);
  if (n == 0) return rec;

  DyckPath d = sample_weighted_dyck_path(
      n, std::vector<double>(marks.begin(), marks.end() - 1), rng);
  const auto kappa = kappa_histogram(d);
  double t = 0.0;
  for (int l = 0; l < n; ++l) {
    const int rate = dyck_gap_rate(kappa, l);
    if (rate <= 0) {
      throw std::logic_error("cluster-sim: non-positive epoch-gap rate "
                             "(malformed Dyck path)");
    }
    t += rng.exponential(static_cast<double>(rate)) / beta;
    rec.epochs.push_back(t);
    rec.sides.push_back(Side::One);
    rec.parents.push_back(d[l] - 1);
    rec.marks.push_back(marks[l + 1]);
  }
#ifndef NDEBUG
  rec.validate();
#endif
  return rec;
}

double simulate_asynchrony_limit(Side side, const InteractionParams& params,
                                 RngStream& rng) {
  if (side != Side::One && side != Side::Two) {
    throw std::domain_error("cluster-sim: asynchrony limit side must be 1 or 2");
  }
  params.require_stable();
  const double rho1 = params.g1.mass();
  const double rho = params.rho();
  const long n_total = sample_borel(BorelLaw{rho}, rng);
  if (n_total == 1) return 0.0;

  ParkingFunction pi = sample_uniform_parking_function(static_cast<int>(n_total - 1), rng);
  std::sort(pi.begin(), pi.end());
  std::vector<double> t(n_total, 0.0);
  double max_t = 0.0;
  for (long i = 1; i < n_total; ++i) {
    const int parent = pi[i - 1] - 1;
    const bool side1 = rng.bernoulli(rho1 / rho);
    double offset = 0.0;
    if (side == Side::One && side1) {
      offset = params.g1.inverse_cdf(rng.uniform());
    } else if (side == Side::Two && !side1) {
      // 2-paced asynchrony is defined at eta = 1; the limit is eta-free.
      offset = params.g2.inverse_cdf(rng.uniform());
    }
    t[i] = t[parent] + offset;
    max_t = std::max(max_t, t[i]);
  }
  return max_t;
}

DurationStats estimate_duration_stats(const std::function<double(RngStream&)>& sampler,
                                      long replications, std::uint64_t master_seed,
                                      std::uint64_t stream_base) {
  if (replications < 2) {
    throw std::domain_error("cluster-sim: estimate_duration_stats requires R >= 2");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long r = 0; r < replications; ++r) {
    RngStream rng(master_seed, stream_base + static_cast<std::uint64_t>(r));
    const double tau = sampler(rng);
    sum += tau;
    sum_sq += tau * tau;
  }
  const double n = static_cast<double>(replications);
  DurationStats out;
  out.replications = replications;
  out.mean = sum / n;
  out.variance = std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1.0));
  const double z99 = 2.5758293035489004;
  out.ci_half_width = z99 * std::sqrt(out.variance / n);
  return out;
}

}  // namespace hawkes
