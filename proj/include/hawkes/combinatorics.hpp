#ifndef HAWKES_COMBINATORICS_HPP
#define HAWKES_COMBINATORICS_HPP

#include <cstdint>
#include <vector>

#include "hawkes/rng.hpp"

namespace hawkes {

/// Exhaustive Dyck-path enumeration is capped here; Catalan(14) ~ 2.67M.
inline constexpr int kDyckEnumerationBound = 14;

using ParkingFunction = std::vector<int>;

/// A non-decreasing positive vector d with d_i <= i (1-based).
using DyckPath = std::vector<int>;

/// True iff the sorted entries satisfy pi_(i) <= i. Length 0 counts as valid.
bool is_parking_function(const std::vector<int>& candidate);

bool is_dyck_path(const std::vector<int>& candidate);

/// Uniform draw over the (k+1)^(k-1) parking functions of length k, by
/// Pollak's rotation on the (k+1)-cycle.
ParkingFunction sample_uniform_parking_function(int k, RngStream& rng);

/// All n-step Dyck paths; list size is Catalan(n). n must be within
/// kDyckEnumerationBound.
const std::vector<DyckPath>& enumerate_dyck_paths(int n);

/// kappa_i = |{j : entries_j = i}| for i in 1..n.
std::vector<int> kappa_histogram(const std::vector<int>& entries);

/// Draws d with probability proportional to prod_i marks[i-1]^kappa_i / kappa_i!.
/// marks must have n positive entries (one per point 0..n-1).
DyckPath sample_weighted_dyck_path(int n, const std::vector<double>& marks,
                                   RngStream& rng);

/// Exact weights of the distribution above, normalized, indexed like
/// enumerate_dyck_paths(n).
std::vector<double> weighted_dyck_distribution(int n, const std::vector<double>& marks);

struct BorelLaw {
  double branching_ratio = 0.0;  // rho in [0, 1)
};

/// Total progeny of a branching walk with Poisson(rho) offspring; N >= 1 with
/// mean 1/(1-rho).
long sample_borel(const BorelLaw& law, RngStream& rng);

/// e^{-rho n} (rho n)^{n-1} / n!
double borel_pmf(const BorelLaw& law, long n);

}  // namespace hawkes

#endif
