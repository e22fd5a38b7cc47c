#include "hawkes/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace hawkes {

namespace {

// Asymptotic KS survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)
double ks_sf(double lambda) {
  if (lambda < 1e-12) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

TestReport ks_two_sample(std::vector<double> a, std::vector<double> b, double level) {
  if (a.size() < 10 || b.size() < 10) {
    throw std::domain_error("stats-verify: ks_two_sample requires >= 10 samples each");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double va = a[ia];
    const double vb = b[ib];
    if (va <= vb) {
      while (ia < a.size() && a[ia] == va) ++ia;
    }
    if (vb <= va) {
      while (ib < b.size() && b[ib] == vb) ++ib;
    }
    d = std::max(d, std::abs(ia / na - ib / nb));
  }
  const double n_eff = na * nb / (na + nb);
  const double lambda = (std::sqrt(n_eff) + 0.12 + 0.11 / std::sqrt(n_eff)) * d;
  TestReport rep;
  rep.statistic = d;
  rep.p_value = ks_sf(lambda);
  rep.sample_sizes = {a.size(), b.size()};
  rep.level = level;
  rep.verdict = rep.p_value > level;
  return rep;
}

TestReport chi_square_gof(const std::vector<long>& counts,
                          const std::vector<double>& expected_probs, double level) {
  if (counts.size() != expected_probs.size()) {
    throw std::domain_error("stats-verify: chi_square_gof length mismatch");
  }
  if (counts.empty()) {
    throw std::domain_error("stats-verify: chi_square_gof requires cells");
  }
  long total = 0;
  for (long c : counts) {
    if (c < 0) {
      throw std::domain_error("stats-verify: chi_square_gof counts must be >= 0");
    }
    total += c;
  }
  double prob_total = 0.0;
  for (double p : expected_probs) {
    if (p < 0.0) {
      throw std::domain_error(
          "stats-verify: chi_square_gof probabilities must be >= 0");
    }
    prob_total += p;
  }
  if (std::abs(prob_total - 1.0) > 1e-8) {
    throw std::domain_error(
        "stats-verify: chi_square_gof probabilities must sum to 1");
  }
  const double n = static_cast<double>(total);

  // Pool trailing cells until expected >= 5.
  std::vector<double> obs, exp;
  double pend_obs = 0.0, pend_exp = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    pend_obs += static_cast<double>(counts[i]);
    pend_exp += n * expected_probs[i];
    if (pend_exp >= 5.0) {
      obs.push_back(pend_obs);
      exp.push_back(pend_exp);
      pend_obs = pend_exp = 0.0;
    }
  }
  if (pend_exp > 0.0 || pend_obs > 0.0) {
    if (exp.empty()) {
      obs.push_back(pend_obs);
      exp.push_back(pend_exp);
    } else {
      obs.back() += pend_obs;
      exp.back() += pend_exp;
    }
  }

  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double diff = obs[i] - exp[i];
    stat += diff * diff / exp[i];
  }
  const double dof = static_cast<double>(obs.size()) - 1.0;
  TestReport rep;
  rep.statistic = stat;
  rep.p_value = dof < 1.0 ? 1.0 : chi_square_sf(stat, dof);
  rep.sample_sizes = {static_cast<std::size_t>(total), obs.size()};
  rep.level = level;
  rep.verdict = rep.p_value > level;
  return rep;
}

MeanCi mean_ci(const std::vector<double>& samples, double confidence) {
  if (samples.size() < 2) {
    throw std::domain_error("stats-verify: mean_ci requires >= 2 samples");
  }
  const double n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double v : samples) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : samples) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1.0);
  const double z = normal_quantile(0.5 * (1.0 + confidence));
  return {mean, z * std::sqrt(var / n)};
}

double chi_square_sf(double statistic, double dof) {
  if (statistic <= 0.0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double normal_quantile(double p) {
  boost::math::normal dist;
  return boost::math::quantile(dist, p);
}

}  // namespace hawkes
