#pragma once

#include <utility>
#include <vector>

#include "specflow/eig.hpp"

namespace specflow {

/// tau(x) = sum_k weight_k Tr(x_k).
Complex trace(const AlgebraElement& x);

/// tau(x y) without materializing the product element.
Complex trace_product(const AlgebraElement& x, const AlgebraElement& y);

/// Uniform (operator) norm: largest singular value over all blocks.
double operator_norm(const AlgebraElement& x);

/// ||x||_p = (tau(|x|^p))^{1/p}; p = inf returns the operator norm.
double schatten_norm(const AlgebraElement& x, double p);

/// Decreasing step function on [0, tau(1)): the generalized singular value
/// function mu_s(x).  Steps are (width, value) with nonincreasing values.
class SingularValueFunction {
 public:
  SingularValueFunction() = default;
  explicit SingularValueFunction(std::vector<std::pair<double, double>> steps);

  /// Builds from unordered (width, value) samples by sorting values
  /// descending.  Every singular value of a block carries that block's
  /// trace weight as its width.
  static SingularValueFunction from_weighted_values(std::vector<std::pair<double, double>> samples);

  const std::vector<std::pair<double, double>>& steps() const { return steps_; }
  double domain_end() const { return domain_end_; }

  /// mu_s at s (right-continuous; 0 beyond the domain).
  double value_at(double s) const;

  /// Exact partial integral over [0, t] (the function is a step function,
  /// so this is a finite sum plus one partial term).
  double integral_to(double t) const;

  /// Integral of mu^p over the whole domain.
  double integral_pow(double p) const;

  SingularValueFunction scaled(double factor) const;   // values * factor, factor >= 0
  SingularValueFunction dilated(double factor) const;  // widths * factor, factor > 0

  /// Cumulative step boundaries (positive, ending at domain_end).
  std::vector<double> breakpoints() const;

 private:
  std::vector<std::pair<double, double>> steps_;
  double domain_end_ = 0.0;
};

SingularValueFunction mu(const AlgebraElement& x);

struct SubmajorizationResult {
  bool holds = false;
  double margin = 0.0;  // min over merged breakpoints of (integral of y - integral of x)
};

/// Checks x <<= y (x submajorized by y): the partial integrals of mu(x)
/// stay below those of mu(y) + tol on the merged breakpoint grid.  Complete
/// for step functions because the integral difference is piecewise linear.
SubmajorizationResult submajorizes(const SingularValueFunction& y, const SingularValueFunction& x,
                                   double tol = 0.0);

}  // namespace specflow
