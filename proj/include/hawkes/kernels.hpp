#ifndef HAWKES_KERNELS_HPP
#define HAWKES_KERNELS_HPP

#include <string>

namespace hawkes {

/// One-directional response function g with cached total mass rho = int_0^inf g
/// and mean offset numerator int_0^inf t*g(t)dt. Exponential is the only
/// built-in kind: g(t) = alpha * exp(-beta * t), mass alpha/beta.
class ResponseKernel {
 public:
  enum class Kind { Exponential };

  static ResponseKernel exponential(double alpha, double beta);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  /// g(t); t must be >= 0.
  double eval(double t) const;

  /// rho_s = int_0^inf g(t) dt
  double mass() const { return mass_; }

  /// int_0^inf t*g(t) dt (finite by construction)
  double mean_offset_numerator() const { return mean_offset_numerator_; }

  /// Mean response offset, mean_offset_numerator / mass.
  double mean_offset() const { return mean_offset_numerator_ / mass_; }

  /// G^{-1}(u * rho) for G(x) = int_0^x g; u in [0, 1). Strictly increasing.
  double inverse_cdf(double u) const;

  /// A copy with mass rescaled to target_mass, shape (decay) unchanged.
  ResponseKernel with_mass(double target_mass) const;

  std::string describe() const;

 private:
  ResponseKernel(Kind kind, double alpha, double beta);

  Kind kind_;
  double alpha_ = 0;
  double beta_ = 0;
  double mass_ = 0;
  double mean_offset_numerator_ = 0;
};

/// Concurrency-driven time dilation h with h(0)=0, h(1)=1, non-decreasing and
/// unbounded. Polynomial is the only built-in kind: h(x) = x^sigma.
class SlowdownSpec {
 public:
  enum class Kind { Polynomial };

  static SlowdownSpec polynomial(double sigma);

  Kind kind() const { return kind_; }
  double sigma() const { return sigma_; }

  /// h(K); K must be >= 0.
  double eval(double k) const;
  /// h'(K); K must be >= 0.
  double derivative(double k) const;

  bool strictly_convex() const { return sigma_ > 1.0; }

 private:
  explicit SlowdownSpec(double sigma);

  Kind kind_;
  double sigma_ = 1.0;
};

}  // namespace hawkes

#endif
