#include "hawkes/kernels.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hawkes {

ResponseKernel::ResponseKernel(Kind kind, double alpha, double beta)
    : kind_(kind), alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::domain_error(
        "core-kernels: exponential kernel requires alpha > 0 and beta > 0");
  }
  mass_ = alpha / beta;
  mean_offset_numerator_ = alpha / (beta * beta);
}

ResponseKernel ResponseKernel::exponential(double alpha, double beta) {
  return ResponseKernel(Kind::Exponential, alpha, beta);
}

double ResponseKernel::eval(double t) const {
  if (t < 0.0) {
    throw std::domain_error("core-kernels: kernel_eval requires t >= 0");
  }
  return alpha_ * std::exp(-beta_ * t);
}

double ResponseKernel::inverse_cdf(double u) const {
  if (!(u >= 0.0) || !(u < 1.0)) {
    throw std::domain_error("core-kernels: kernel_inverse_cdf requires u in [0, 1)");
  }
  // G(x) = rho * (1 - exp(-beta x)); invert at u*rho.
  return -std::log1p(-u) / beta_;
}

ResponseKernel ResponseKernel::with_mass(double target_mass) const {
  return exponential(target_mass * beta_, beta_);
}

std::string ResponseKernel::describe() const {
  std::ostringstream out;
  out << "exponential(alpha=" << alpha_ << ", beta=" << beta_
      << ", mass=" << mass_ << ")";
  return out.str();
}

SlowdownSpec::SlowdownSpec(double sigma) : kind_(Kind::Polynomial), sigma_(sigma) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("core-kernels: polynomial slowdown requires sigma > 0");
  }
}

SlowdownSpec SlowdownSpec::polynomial(double sigma) { return SlowdownSpec(sigma); }

double SlowdownSpec::eval(double k) const {
  if (k < 0.0) {
    throw std::domain_error("core-kernels: slowdown_eval requires K >= 0");
  }
  return std::pow(k, sigma_);
}

double SlowdownSpec::derivative(double k) const {
  if (k < 0.0) {
    throw std::domain_error("core-kernels: slowdown_derivative requires K >= 0");
  }
  return sigma_ * std::pow(k, sigma_ - 1.0);
}

}  // namespace hawkes
