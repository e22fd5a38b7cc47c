#include "hawkes/performance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hawkes/errors.hpp"

namespace hawkes {

AsyncMeans estimate_async_means(const InteractionParams& params, long replications,
                                std::uint64_t master_seed, std::uint64_t stream_base) {
  auto stats1 = estimate_duration_stats(
      [&](RngStream& rng) { return simulate_asynchrony_limit(Side::One, params, rng); },
      replications, master_seed, stream_base);
  auto stats2 = estimate_duration_stats(
      [&](RngStream& rng) { return simulate_asynchrony_limit(Side::Two, params, rng); },
      replications, master_seed, stream_base + static_cast<std::uint64_t>(replications));
  return {stats1.mean, stats2.mean, stats1.ci_half_width, stats2.ci_half_width};
}

double guaranteed_rate(const AsyncMeans& means, const SlowdownSpec& h, double k) {
  if (!(k > 0.0)) {
    throw std::domain_error("performance: guaranteed_rate requires K > 0");
  }
  return k / (means.mean_tau1 + means.mean_tau2 * h.eval(k));
}

double idealized_rate(const AsyncMeans& means, const SlowdownSpec& h, double k) {
  if (!(k > 0.0)) {
    throw std::domain_error("performance: idealized_rate requires K > 0");
  }
  return k / std::max(means.mean_tau1, means.mean_tau2 * h.eval(k));
}

namespace {

// Bisection for the root of an increasing map on (0, inf); the bracket grows
// by doubling until the residual changes sign, capped at 1e12.
double bisect_increasing(const std::function<double(double)>& f, double target,
                         double tol) {
  double lo = 1e-6;
  double hi = 1.0;
  while (f(hi) < target) {
    hi *= 2.0;
    if (hi > 1e12) {
      throw std::runtime_error("performance: bisection bracket exceeded 1e12");
    }
  }
  if (f(lo) > target) lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = f(mid) - target;
    if (std::abs(v) < tol) return mid;
    (v < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

OptimalConcurrency solve_kstar(const AsyncMeans& means, const SlowdownSpec& h) {
  if (!h.strictly_convex()) {
    throw NoOptimumError(
        "performance: no optimal concurrency for non-strictly-convex slowdown "
        "(sigma <= 1)");
  }
  const double ratio = means.mean_tau1 / means.mean_tau2;
  auto phi = [&](double k) { return k * h.derivative(k) - h.eval(k); };
  OptimalConcurrency out;
  out.k_star = bisect_increasing(phi, ratio, 1e-10);
  out.k_lower = means.mean_tau1 / (means.mean_tau2 * h.derivative(out.k_star));
  const double slope = h.derivative(out.k_star);
  auto chord = [&](double k) { return h.eval(k) / k; };
  out.k_upper = bisect_increasing(chord, slope, 1e-12);
  out.g_at_star = guaranteed_rate(means, h, out.k_star);
  out.i_at_star = idealized_rate(means, h, out.k_star);
  return out;
}

OptimalConcurrency poly_kstar(const AsyncMeans& means, double sigma) {
  if (!(sigma > 1.0)) {
    throw NoOptimumError("performance: poly_kstar requires sigma > 1");
  }
  const SlowdownSpec h = SlowdownSpec::polynomial(sigma);
  OptimalConcurrency out;
  out.k_star = std::pow(means.mean_tau1 / ((sigma - 1.0) * means.mean_tau2),
                        1.0 / sigma);
  out.k_lower = (1.0 - 1.0 / sigma) * out.k_star;
  out.k_upper = std::pow(sigma, 1.0 / (sigma - 1.0)) * out.k_star;
  out.g_at_star = guaranteed_rate(means, h, out.k_star);
  out.i_at_star = idealized_rate(means, h, out.k_star);
  return out;
}

double symmetric_rate(double mean_hat_tau1, const SlowdownSpec& h, double k) {
  if (!(k > 0.0)) {
    throw std::domain_error("performance: symmetric_rate requires K > 0");
  }
  return k / (mean_hat_tau1 * h.eval(k));
}

ThroughputCurve sweep_concurrency(const InteractionParams& base,
                                  const SlowdownSpec& h, const AsyncMeans& means,
                                  const std::vector<double>& k_grid, long reps,
                                  std::uint64_t master_seed) {
  ThroughputCurve curve;
  curve.kind = CurveKind::MonteCarlo;
  std::uint64_t stream = 0;
  for (double k : k_grid) {
    CurvePoint pt;
    pt.x = k;
    try {
      InteractionParams params = base;
      params.eta = 1.0 / h.eval(k);
      auto stats = estimate_duration_stats(
          [&](RngStream& rng) {
            return simulate_cluster_parking(params, rng).duration();
          },
          reps, master_seed, stream);
      // Delta method for K / E[tau].
      pt.estimate = k / stats.mean;
      pt.ci_half_width = k * stats.ci_half_width / (stats.mean * stats.mean);
      pt.guaranteed = guaranteed_rate(means, h, k);
      pt.idealized = idealized_rate(means, h, k);
    } catch (const std::exception& ex) {
      pt.error = ex.what();
    }
    stream += static_cast<std::uint64_t>(reps);
    curve.points.push_back(pt);
  }
  return curve;
}

std::string shape_name(ShapeClass s) {
  switch (s) {
    case ShapeClass::CapShaped: return "capShaped";
    case ShapeClass::CupShaped: return "cupShaped";
    case ShapeClass::MonotoneLike: return "monotoneLike";
    case ShapeClass::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ShapeClass classify_shape(const ThroughputCurve& curve) {
  std::vector<const CurvePoint*> pts;
  for (const auto& p : curve.points) {
    if (!p.error) pts.push_back(&p);
  }
  if (pts.size() < 5) {
    throw std::domain_error("performance: classify_shape requires >= 5 grid points");
  }
  const CurvePoint& first = *pts.front();
  const CurvePoint& last = *pts.back();
  bool cap = false;
  bool cup = false;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const CurvePoint& p = *pts[i];
    if (p.estimate > first.estimate + p.ci_half_width + first.ci_half_width &&
        p.estimate > last.estimate + p.ci_half_width + last.ci_half_width) {
      cap = true;
    }
    if (p.estimate < first.estimate - p.ci_half_width - first.ci_half_width &&
        p.estimate < last.estimate - p.ci_half_width - last.ci_half_width) {
      cup = true;
    }
  }
  if (cap && !cup) return ShapeClass::CapShaped;
  if (cup && !cap) return ShapeClass::CupShaped;
  if (cap && cup) return ShapeClass::Inconclusive;
  // No significant interior extremum: monotone-like iff all significant
  // successive differences share one sign.
  int sign = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double diff = pts[i + 1]->estimate - pts[i]->estimate;
    if (std::abs(diff) <= pts[i]->ci_half_width + pts[i + 1]->ci_half_width) continue;
    const int s = diff > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return ShapeClass::Inconclusive;
  }
  return ShapeClass::MonotoneLike;
}

ThroughputCurve sweep_interdependence(const InteractionParams& base,
                                      const SlowdownSpec& h, double rho_total,
                                      const std::vector<double>& rho1_grid,
                                      long reps, std::uint64_t master_seed) {
  for (double r1 : rho1_grid) {
    if (!(r1 > 0.0) || !(r1 < rho_total)) {
      throw std::domain_error(
          "performance: rho1 grid must be interior to (0, rho)");
    }
  }
  ThroughputCurve curve;
  curve.kind = CurveKind::MonteCarlo;
  std::uint64_t stream = 0;
  for (double r1 : rho1_grid) {
    CurvePoint pt;
    pt.x = r1;
    try {
      InteractionParams params{base.g1.with_mass(r1),
                               base.g2.with_mass(rho_total - r1), 1.0};
      AsyncMeans means = estimate_async_means(params, reps, master_seed, stream);
      stream += static_cast<std::uint64_t>(2 * reps);
      OptimalConcurrency opt = solve_kstar(means, h);
      params.eta = 1.0 / h.eval(opt.k_star);
      auto stats = estimate_duration_stats(
          [&](RngStream& rng) {
            return simulate_cluster_parking(params, rng).duration();
          },
          reps, master_seed, stream);
      stream += static_cast<std::uint64_t>(reps);
      pt.estimate = opt.k_star / stats.mean;
      pt.ci_half_width =
          opt.k_star * stats.ci_half_width / (stats.mean * stats.mean);
      pt.guaranteed = opt.g_at_star;
      pt.idealized = opt.i_at_star;
    } catch (const std::exception& ex) {
      pt.error = ex.what();
    }
    curve.points.push_back(pt);
  }
  return curve;
}

BoundsReport check_duration_bounds(const AsyncMeans& means, double eta,
                                   double estimate, double estimate_ci) {
  if (!(eta > 0.0)) {
    throw std::domain_error("performance: check_duration_bounds requires eta > 0");
  }
  BoundsReport rep;
  rep.lower = std::max(means.mean_tau1, means.mean_tau2 / eta);
  rep.upper = means.mean_tau1 + means.mean_tau2 / eta;
  rep.estimate = estimate;
  rep.slack = estimate_ci + means.ci1 + means.ci2 / eta;
  rep.within = estimate >= rep.lower - rep.slack && estimate <= rep.upper + rep.slack;
  return rep;
}

}  // namespace hawkes
