#pragma once

#include <array>
#include <functional>
#include <optional>

#include "specflow/norms.hpp"

namespace specflow {

/// A parametrized Hermitian family t -> D_t on [0,1] with tangent data.
/// Linear paths D_t = D0 + t A carry the exact constant tangent A;
/// conjugation paths D_t = e^{-itH} D0 e^{itH} differentiate analytically;
/// sampled paths use central differences on their native grid.
class OperatorPath {
 public:
  enum class Kind { Linear, Conjugation, Sampled };

  static OperatorPath linear(AlgebraElement d0, AlgebraElement a, int grid_points = 33);
  static OperatorPath conjugation(AlgebraElement d0, AlgebraElement h, int grid_points = 33);
  static OperatorPath sampled(std::vector<double> t_grid, std::vector<AlgebraElement> samples);

  Kind kind() const { return kind_; }
  const AlgebraPtr& algebra() const { return d0_.algebra(); }
  const std::vector<double>& grid() const { return grid_; }

  /// D_t.  Analytic kinds extend outside [0,1]; sampled paths clamp.
  AlgebraElement at(double t) const;
  AlgebraElement tangent(double t) const;

  OperatorPath reversed() const;

  // generator access for serialization
  const AlgebraElement& d0() const { return d0_; }
  const AlgebraElement& generator() const { return gen_; }
  const std::vector<AlgebraElement>& samples() const { return samples_; }

 private:
  OperatorPath(Kind kind, AlgebraElement d0, AlgebraElement gen)
      : kind_(kind), d0_(std::move(d0)), gen_(std::move(gen)) {}

  Kind kind_;
  AlgebraElement d0_;
  AlgebraElement gen_;  // A for linear, H for conjugation, unused for sampled
  std::vector<double> grid_;
  std::vector<AlgebraElement> samples_;
  std::vector<AlgebraElement> node_tangents_;
  // conjugation: eigendecomposition of H for the matrix exponential
  std::vector<Eigen::VectorXd> h_evals_;
  std::vector<Matrix> h_vecs_;
};

struct QuadratureSpec {
  double tol = 1e-8;
  int max_panels = 1 << 14;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
  bool converged = false;
};

/// Adaptive composite Simpson with Richardson correction.  Deterministic
/// for a given (f, spec).
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            const QuadratureSpec& spec);

struct SpectralFlowResult {
  double crossing_sf = 0.0;  // NaN when an endpoint kernel blocks the count
  double integral_sf = 0.0;
  double numerator = 0.0;  // un-normalized integral, for exactness checks
  std::string method;
  double exponent = 0.0;  // m (unbounded) or q (bounded)
  double quad_tol = 0.0;
  int panels = 0;
  double quad_error_estimate = 0.0;
  std::array<double, 2> endpoint_min_eigs = {0.0, 0.0};
  /// bounded method only: |bounded(q) - unbounded(q/2 + 1)|
  double consistency_delta = 0.0;
};

/// Net signed spectral crossing count: tau E_neg(start) - tau E_neg(end).
/// Interior samples with near-kernel eigenvalues on a too-coarse grid are
/// reported through `warnings` (computation never needs them).
double crossing_sf(const OperatorPath& path, double zero_tol,
                   std::vector<std::string>* warnings = nullptr);

/// sf = (1/C~_m) integral of tau(D'_t (1 + D_t^2)^{-m}) dt, m > 1.
SpectralFlowResult integral_sf_unbounded(const OperatorPath& path, double m,
                                         const QuadratureSpec& quad = {});

/// sf = (1/C_{(q-1)/2}) integral of tau(F'_t (1 - F_t^2)^{(q-1)/2}) dt with
/// F_t = phi(D_t); the tangent F'_t comes from exact divided differences of
/// phi on the spectrum of D_t.
SpectralFlowResult integral_sf_bounded(const OperatorPath& path, double q,
                                       const QuadratureSpec& quad = {});

/// |tau(dphi(D_t)/dt (1-phi^2)^n) - tau(D'_t (1+D_t^2)^{-n-3/2})| with the
/// left side through a central finite difference of step h.  O(h^2).
double verify_diff_formula(const OperatorPath& path, double n, double t, double h);

/// tau(g_m(D)) with g_m(u) the antiderivative of (1+u^2)^{-m}; differences
/// of this potential give one-form integrals exactly in finite dimensions.
double eta_potential(const AlgebraElement& d, double m);

/// Normalized one-forms on the tangent spaces.
double alpha_form(const AlgebraElement& d, const AlgebraElement& a, double m);
double theta_form(const AlgebraElement& f0, const AlgebraElement& x, double q);

/// C~_m = integral over R of (1+u^2)^{-m} = sqrt(pi) Gamma(m-1/2) / Gamma(m).
double ctilde_constant(double m);
/// C_a = integral over [-1,1] of (1-u^2)^a = sqrt(pi) Gamma(a+1) / Gamma(a+3/2).
double cweight_constant(double a);

}  // namespace specflow
