#ifndef HAWKES_PERFORMANCE_HPP
#define HAWKES_PERFORMANCE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hawkes/cluster.hpp"
#include "hawkes/kernels.hpp"

namespace hawkes {

/// Estimated mean durations under 1-paced and 2-paced asynchrony; the inputs
/// to all throughput analytics.
struct AsyncMeans {
  double mean_tau1 = 0.0;
  double mean_tau2 = 0.0;
  double ci1 = 0.0;
  double ci2 = 0.0;
};

AsyncMeans estimate_async_means(const InteractionParams& params, long replications,
                                std::uint64_t master_seed, std::uint64_t stream_base = 0);

enum class CurveKind { Guaranteed, Idealized, MonteCarlo, Symmetric };

struct CurvePoint {
  double x = 0.0;          // concurrency K or interdependence rho1
  double estimate = 0.0;   // rate
  double ci_half_width = 0.0;
  double guaranteed = 0.0;
  double idealized = 0.0;
  std::optional<std::string> error;  // per-point failure, sweep continues
};

struct ThroughputCurve {
  CurveKind kind = CurveKind::MonteCarlo;
  std::vector<CurvePoint> points;
};

/// K / (E[tau1] + E[tau2] h(K)) — successive-work lower bound.
double guaranteed_rate(const AsyncMeans& means, const SlowdownSpec& h, double k);

/// K / max(E[tau1], E[tau2] h(K)) — simultaneous-work upper bound.
double idealized_rate(const AsyncMeans& means, const SlowdownSpec& h, double k);

struct OptimalConcurrency {
  double k_star = 0.0;
  double k_lower = 0.0;
  double k_upper = 0.0;
  double g_at_star = 0.0;
  double i_at_star = 0.0;
};

/// Root of K h'(K) - h(K) = E[tau1]/E[tau2] by bisection, plus the peak
/// bracket. Requires strictly convex h; throws NoOptimumError otherwise.
OptimalConcurrency solve_kstar(const AsyncMeans& means, const SlowdownSpec& h);

/// Closed form for h(K) = K^sigma, sigma > 1.
OptimalConcurrency poly_kstar(const AsyncMeans& means, double sigma);

/// K / (E[tau_hat(1)] h(K)) — both sides slowed by the concurrency.
double symmetric_rate(double mean_hat_tau1, const SlowdownSpec& h, double k);

/// Monte Carlo throughput over a concurrency grid with eta = 1/h(K),
/// alongside the analytic bound curves from the supplied means.
ThroughputCurve sweep_concurrency(const InteractionParams& base,
                                  const SlowdownSpec& h, const AsyncMeans& means,
                                  const std::vector<double>& k_grid, long reps,
                                  std::uint64_t master_seed);

enum class ShapeClass { CapShaped, CupShaped, MonotoneLike, Inconclusive };

std::string shape_name(ShapeClass s);

/// CI-aware finite-grid reading of the asymptotic shape classes.
ShapeClass classify_shape(const ThroughputCurve& curve);

/// Optimized throughput across the interdependence spectrum: for each rho1,
/// kernel masses rescaled to (rho1, rho - rho1) with shapes held, K* solved
/// from estimated asynchrony means, Monte Carlo throughput run at K*.
ThroughputCurve sweep_interdependence(const InteractionParams& base,
                                      const SlowdownSpec& h, double rho_total,
                                      const std::vector<double>& rho1_grid,
                                      long reps, std::uint64_t master_seed);

struct BoundsReport {
  double lower = 0.0;
  double upper = 0.0;
  double estimate = 0.0;
  double slack = 0.0;
  bool within = false;
};

/// Checks max(E[tau1], E[tau2]/eta) <= E[tau] <= E[tau1] + E[tau2]/eta with
/// CI slack on both sides.
BoundsReport check_duration_bounds(const AsyncMeans& means, double eta,
                                   double estimate, double estimate_ci);

}  // namespace hawkes

#endif
