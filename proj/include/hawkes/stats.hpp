#ifndef HAWKES_STATS_HPP
#define HAWKES_STATS_HPP

#include <cstddef>
#include <utility>
#include <vector>

namespace hawkes {

/// Repository-wide level for the theorem-as-test suites.
inline constexpr double kTestLevel = 0.01;

struct TestReport {
  double statistic = 0.0;
  double p_value = 1.0;
  std::pair<std::size_t, std::size_t> sample_sizes{0, 0};
  double level = kTestLevel;
  bool verdict = true;  // p_value > level
};

/// Two-sided two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
TestReport ks_two_sample(std::vector<double> a, std::vector<double> b,
                         double level = kTestLevel);

/// Pearson chi-square against expected cell probabilities; trailing cells are
/// pooled until every expected count is >= 5.
TestReport chi_square_gof(const std::vector<long>& counts,
                          const std::vector<double>& expected_probs,
                          double level = kTestLevel);

struct MeanCi {
  double mean = 0.0;
  double half_width = 0.0;
};

/// Normal-approximation interval, half width z * s / sqrt(n).
MeanCi mean_ci(const std::vector<double>& samples, double confidence = 0.99);

/// Upper tail of the chi-square distribution (p-value helper).
double chi_square_sf(double statistic, double dof);

/// Standard normal quantile.
double normal_quantile(double p);

}  // namespace hawkes

#endif
