#ifndef HAWKES_QUEUE_SIM_HPP
#define HAWKES_QUEUE_SIM_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hawkes/kernels.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

/// Quad-directional kernel bundle; direction (x,y) is side x responding to a
/// side-y contribution.
struct QuadParams {
  ResponseKernel g11 = ResponseKernel::exponential(0.25, 1.0);
  ResponseKernel g12 = ResponseKernel::exponential(0.25, 1.0);
  ResponseKernel g21 = ResponseKernel::exponential(0.25, 1.0);
  ResponseKernel g22 = ResponseKernel::exponential(0.25, 1.0);

  const ResponseKernel& kernel(int x, int y) const;
  double ratio(int x, int y) const { return kernel(x, y).mass(); }
  void require_stable() const;
};

/// Spectral radius of the 2x2 responsiveness-ratio matrix (closed form);
/// stable iff < 1.
double check_stability_quad(const QuadParams& quad);

/// E[N] = (1 - rho22 + rho21) / ((1-rho11)(1-rho22) - rho12 rho21)
double expected_size_quad(const QuadParams& quad);

enum class Preset { HighCo, ModerateCo, ModerateSelf, HighSelf };

/// Interdependence presets built from contact-center parameter estimates. The
/// responsiveness ratios are stored as ground truth; jumps are derived as
/// alpha = ratio * beta with the decay rates unchanged across presets.
QuadParams preset_params(Preset preset);
std::string preset_name(Preset preset);
std::optional<Preset> preset_from_name(const std::string& name);
/// Provenance caveats worth carrying into output metadata.
std::string preset_metadata_note();

struct QueueConfig {
  double arrival_rate = 16.0;     // lambda
  double patience_rate = 0.5;     // theta; 0 disables abandonment
  int max_concurrency = 1;        // kappa
  double closure_target = 0.9;    // p
  SlowdownSpec slowdown = SlowdownSpec::polynomial(1.0);
  QuadParams quad;
  double horizon = 200.0;
  long replications = 1024;
  std::uint64_t seed = 0;

  /// Test double: when set, conversations are fixed-duration stubs with no
  /// contribution dynamics (validates the event engine alone).
  std::optional<double> fixed_duration_stub;

  void validate() const;
};

struct QueueMetrics {
  double throughput = 0.0;  // completions per unit time
  double throughput_ci = 0.0;
  double abandonment_rate = 0.0;
  double abandonment_ci = 0.0;
  double mean_occupancy = 0.0;
};

struct ReplicationResult {
  long arrivals = 0;
  long completions = 0;
  long abandonments = 0;
  long residual_in_system = 0;  // waiting + active at the horizon
  long contributions = 0;       // opening messages plus accepted responses
  double occupancy_integral = 0.0;
};

/// Conversation-local Markov state for exponential kernels: four decayed
/// per-direction sums plus the agent's operational clock.
class ConversationState {
 public:
  explicit ConversationState(const QuadParams& quad);

  /// Decay all four sums by dt of wall time at synchronicity eta (the agent
  /// directions advance in operational time eta * dt).
  void advance(double dt, double eta);

  /// Register a contribution by the given side (1 or 2) at the current time.
  void add_contribution(int side);

  double intensity_side1() const;
  double intensity_side2(double eta) const;

  /// Sum of residual direct-response masses over all past contributions.
  double residual_mass() const;

  /// exp(-residual_mass): probability of no further contributions.
  double closure_probability() const;

  /// Wall-time delay until closure_probability first reaches target, at
  /// constant eta. Zero if already reached.
  double closure_delay(double eta, double target) const;

 private:
  const QuadParams* quad_;
  // sums_[x-1][y-1]: sum over side-y contributions of exp(-beta_{x,y} * age),
  // ages measured in side-x's clock.
  std::array<std::array<double, 2>, 2> sums_{};
};

ReplicationResult run_queue_replication(const QueueConfig& config, RngStream& rng,
                                        std::ostream* event_log = nullptr);

QueueMetrics simulate_queue(const QueueConfig& config,
                            std::ostream* event_log = nullptr);

struct KappaCell {
  double sigma = 1.0;
  int kappa = 1;
  QueueMetrics metrics;
  std::optional<std::string> error;
};

struct KappaTable {
  std::vector<KappaCell> cells;

  /// Empirical argmax of throughput among a sigma's cells.
  std::optional<int> throughput_argmax(double sigma) const;
  /// Empirical argmin of abandonment rate among a sigma's cells.
  std::optional<int> abandonment_argmin(double sigma) const;
};

KappaTable sweep_kappa(const QueueConfig& base, const std::vector<int>& kappa_grid,
                       const std::vector<double>& sigma_grid);

}  // namespace hawkes

#endif
