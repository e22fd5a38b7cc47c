#include "hawkes/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hawkes/errors.hpp"

namespace hawkes {

bool is_parking_function(const std::vector<int>& candidate) {
  for (int v : candidate) {
    if (v <= 0) {
      throw std::domain_error(
          "combinatorics: parking function entries must be positive");
    }
  }
  std::vector<int> sorted(candidate);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] > static_cast<int>(i) + 1) return false;
  }
  return true;
}

bool is_dyck_path(const std::vector<int>& candidate) {
  int prev = 1;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    int v = candidate[i];
    if (v < prev || v > static_cast<int>(i) + 1 || v < 1) return false;
    prev = v;
  }
  return true;
}

ParkingFunction sample_uniform_parking_function(int k, RngStream& rng) {
  if (k < 1) {
    throw std::domain_error(
        "combinatorics: sample_uniform_parking_function requires k >= 1");
  }
  const int m = k + 1;  // circle size
  std::vector<int> pref(k);
  for (int i = 0; i < k; ++i) pref[i] = static_cast<int>(rng.uniform_int(0, m - 1));

  // Park on the circle; next_free implements the "next available space"
  // walk with path compression.
  std::vector<int> next_free(m);
  std::iota(next_free.begin(), next_free.end(), 0);
  auto find_free = [&](int s) {
    int root = s;
    while (next_free[root] != root) root = next_free[root];
    while (next_free[s] != root) {
      int t = next_free[s];
      next_free[s] = root;
      s = t;
    }
    return root;
  };
  std::vector<bool> occupied(m, false);
  for (int i = 0; i < k; ++i) {
    int spot = find_free(pref[i]);
    occupied[spot] = true;
    next_free[spot] = (spot + 1) % m;
    // Re-point to the true next free spot lazily on the next lookup. A filled
    // circle segment collapses via path compression above.
  }
  int empty = -1;
  for (int s = 0; s < m; ++s) {
    if (!occupied[s]) {
      empty = s;
      break;
    }
  }
  // Rotate so the empty spot lands on slot m-1 (1-based slot k+1).
  const int shift = (m - 1 - empty + m) % m;
  ParkingFunction out(k);
  for (int i = 0; i < k; ++i) out[i] = (pref[i] + shift) % m + 1;
  return out;
}

namespace {

void extend_dyck(int n, int pos, int low, std::vector<int>& cur,
                 std::vector<DyckPath>& out) {
  if (pos > n) {
    out.push_back(cur);
    return;
  }
  for (int v = low; v <= pos; ++v) {
    cur.push_back(v);
    extend_dyck(n, pos + 1, v, cur, out);
    cur.pop_back();
  }
}

}  // namespace

const std::vector<DyckPath>& enumerate_dyck_paths(int n) {
  if (n < 1) {
    throw std::domain_error("combinatorics: enumerate_dyck_paths requires n >= 1");
  }
  if (n > kDyckEnumerationBound) {
    throw CapacityError("combinatorics: enumerate_dyck_paths capped at n = " +
                        std::to_string(kDyckEnumerationBound) + ", got n = " +
                        std::to_string(n));
  }
  static std::map<int, std::vector<DyckPath>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::vector<DyckPath> paths;
    std::vector<int> cur;
    extend_dyck(n, 1, 1, cur, paths);
    it = cache.emplace(n, std::move(paths)).first;
  }
  return it->second;
}

std::vector<int> kappa_histogram(const std::vector<int>& entries) {
  const int n = static_cast<int>(entries.size());
  std::vector<int> kappa(n, 0);
  for (int v : entries) {
    if (v >= 1 && v <= n) ++kappa[v - 1];
  }
  return kappa;
}

std::vector<double> weighted_dyck_distribution(int n,
                                               const std::vector<double>& marks) {
  if (static_cast<int>(marks.size()) < n) {
    throw std::domain_error(
        "combinatorics: weighted Dyck sampling needs n marks m_0..m_{n-1}");
  }
  for (int i = 0; i < n; ++i) {
    if (!(marks[i] > 0.0)) {
      throw std::domain_error("combinatorics: marks must be positive");
    }
  }
  const auto& paths = enumerate_dyck_paths(n);
  std::vector<double> logw(paths.size());
  double max_logw = -1e300;
  for (std::size_t p = 0; p < paths.size(); ++p) {
    auto kappa = kappa_histogram(paths[p]);
    double lw = 0.0;
    for (int i = 0; i < n; ++i) {
      lw += kappa[i] * std::log(marks[i]) - std::lgamma(kappa[i] + 1.0);
    }
    logw[p] = lw;
    max_logw = std::max(max_logw, lw);
  }
  double total = 0.0;
  for (double& w : logw) {
    w = std::exp(w - max_logw);
    total += w;
  }
  for (double& w : logw) w /= total;
  return logw;
}

DyckPath sample_weighted_dyck_path(int n, const std::vector<double>& marks,
                                   RngStream& rng) {
  const auto probs = weighted_dyck_distribution(n, marks);
  const auto& paths = enumerate_dyck_paths(n);
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t p = 0; p < probs.size(); ++p) {
    acc += probs[p];
    if (u < acc) return paths[p];
  }
  return paths.back();
}

long sample_borel(const BorelLaw& law, RngStream& rng) {
  const double rho = law.branching_ratio;
  if (!(rho >= 0.0) || rho >= 1.0) {
    throw StabilityError("combinatorics: sample_borel requires 0 <= rho < 1");
  }
  long total = 1;
  long frontier = 1;
  while (frontier > 0) {
    long offspring = rng.poisson(rho * static_cast<double>(frontier));
    total += offspring;
    frontier = offspring;
    if (total > 1000000) {
      throw DivergenceError("combinatorics: Borel progeny exceeded 10^6 points");
    }
  }
  return total;
}

double borel_pmf(const BorelLaw& law, long n) {
  if (n < 1) {
    throw std::domain_error("combinatorics: borel_pmf requires n >= 1");
  }
  const double rho = law.branching_ratio;
  if (rho == 0.0) return n == 1 ? 1.0 : 0.0;
  const double x = rho * static_cast<double>(n);
  return std::exp(-x + (n - 1) * std::log(x) - std::lgamma(n + 1.0));
}

}  // namespace hawkes
