#ifndef HAWKES_CLUSTER_HPP
#define HAWKES_CLUSTER_HPP

#include <functional>
#include <vector>

#include "hawkes/combinatorics.hpp"
#include "hawkes/kernels.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

/// Side label of a contribution. The initializing point at time 0 belongs to
/// neither side and is excluded from the per-side counts.
enum class Side : int { Initial = 0, One = 1, Two = 2 };

/// One realized interaction: epochs in chronological order starting at 0,
/// per-point side labels, parent links (the prompt each point answers,
/// -1 for the initial point), and marks (1 for unmarked clusters).
struct ClusterRecord {
  std::vector<double> epochs;
  std::vector<Side> sides;
  std::vector<int> parents;
  std::vector<double> marks;

  long size() const { return static_cast<long>(epochs.size()); }
  double duration() const { return epochs.empty() ? 0.0 : epochs.back(); }
  long side_count(Side s) const;

  /// Type invariants: epoch[0] = 0, strictly increasing epochs, parents
  /// earlier than children, positive marks. Throws std::logic_error.
  void validate() const;
};

/// Two-sided interaction: side-specific kernels plus synchronicity eta. The
/// eta rescaling is applied at sampling sites (side-2 offsets divided by eta),
/// never baked into g2, so mass(g2) is eta-invariant.
struct InteractionParams {
  ResponseKernel g1;
  ResponseKernel g2;
  double eta = 1.0;

  double rho() const { return g1.mass() + g2.mass(); }
  void require_stable() const;  // throws StabilityError if rho >= 1 or eta <= 0
};

enum class MarkKind { Constant, Borel };

/// Single-kernel marked cluster: intensity sum_i M_i * g(t - tau_i) with
/// i.i.d. marks (initial point included).
struct MarkedParams {
  ResponseKernel kernel;
  MarkKind mark_kind = MarkKind::Constant;
  double mark_value = 1.0;  // Constant: the mark; Borel: the branching ratio

  double mean_mark() const;
  void require_stable() const;  // mass * E[mark] < 1
};

inline constexpr long kClusterPointGuard = 1000000;

/// Intensity-route sampler: the branching view simulated directly, each point
/// emitting per-side inhomogeneous Poisson response streams (exact parents).
ClusterRecord simulate_cluster_thinning(const InteractionParams& params,
                                        RngStream& rng);

/// End-state-conditioned sampler: Borel size, uniform parking function,
/// Bernoulli sides, inverse-CDF offsets.
ClusterRecord simulate_cluster_parking(const InteractionParams& params,
                                       RngStream& rng);

ClusterRecord simulate_marked_thinning(const MarkedParams& params, RngStream& rng);

enum class OversizePolicy { Resample, Error };

/// Marked cluster via the weighted-Dyck-path route; sizes whose path length
/// exceeds the enumeration bound are resampled or rejected per policy.
ClusterRecord simulate_dyck_cluster(const MarkedParams& params, RngStream& rng,
                                    OversizePolicy policy = OversizePolicy::Resample);

/// Closed-form conditional chronology for an exponential kernel: given the
/// marks (m_0..m_n), draws the weighted Dyck path and builds epochs as scaled
/// sums of independent exponentials.
ClusterRecord simulate_exp_marked_conditional(double beta,
                                              const std::vector<double>& marks,
                                              RngStream& rng);

/// Epoch-gap rate sum_{j<=l+1} kappa_j - l for gap l (0-based).
int dyck_gap_rate(const std::vector<int>& kappa, int l);
/// The same rate in the alternate parameterization i+1 - sum_{j>=n-i} kappa_j
/// with i = n - 1 - l, n the path length.
int dyck_gap_rate_alternate(const std::vector<int>& kappa, int i);

/// Duration under one-paced asynchrony: the parking construction with the
/// other side's offsets forced to zero. Side 2 uses g2 at eta = 1.
double simulate_asynchrony_limit(Side side, const InteractionParams& params,
                                 RngStream& rng);

struct DurationStats {
  double mean = 0.0;
  double variance = 0.0;
  double ci_half_width = 0.0;  // 99% normal approximation
  long replications = 0;
};

DurationStats estimate_duration_stats(const std::function<double(RngStream&)>& sampler,
                                      long replications, std::uint64_t master_seed,
                                      std::uint64_t stream_base);

}  // namespace hawkes

#endif
