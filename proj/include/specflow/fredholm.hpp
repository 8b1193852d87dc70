#pragma once

#include "specflow/inequalities.hpp"

namespace specflow {

/// Desk-scale stand-in for an odd p-summable module: the operator D0 and a
/// finite set of unitaries playing the role of U(A_0).
struct ModuleSpec {
  AlgebraPtr algebra;
  AlgebraElement D0;
  double p = 2.0;
  std::vector<AlgebraElement> unitaries;
  double zero_tol = 1e-10;

  /// Checks the structural invariants (unitarity to 1e-10, 1 < p < inf).
  void validate() const;
};

struct SummabilityProfile {
  double norm_unbounded = 0.0;  // ||(1 + D0^2)^{-1/2}||_p
  double norm_bounded = 0.0;    // || |1 - phi(D0)^2|^{1/2} ||_p
  double residual = 0.0;        // |difference|, an exact identity up to roundoff
  /// Norm restricted to the first k blocks, k = 1..num_blocks; makes
  /// summability trends visible on algebras emulating spectral growth.
  std::vector<double> truncation_profile;
};

SummabilityProfile summability_profile(const ModuleSpec& spec);

/// Per-unitary record for the bounded-module passage.
struct Corollary04Report {
  double comm_D = 0.0;          // ||[D0, u]||
  double comm_phi_p = 0.0;      // ||[phi(D0), u]||_p
  double comm_sgn_p = 0.0;      // ||[sgn(D0), u]||_p
  double conj_residual = 0.0;   // ||[phi(D0),u] - u(phi(u* D0 u) - phi(D0))||
  double factor_residual = 0.0; // ||(sgn-phi)(sgn+phi) - (1+D0^2)^{-1}||
  double gap_p = 0.0;           // ||sgn(D0) - phi(D0)||_p
  double gap_bound = 0.0;       // ||(1+D0^2)^{-1}||_p ||(sgn+phi)^{-1}||
  bool gap_bound_holds = false;
  double triangle_lhs = 0.0;    // ||[sgn(D0), u]||_p
  double triangle_rhs = 0.0;    // 2 ||sgn-phi||_p + ||[phi(D0), u]||_p
  bool triangle_holds = false;
  double phi_comm_bound = 0.0;  // Z_p' max(...) ||z||_p applied to D = u* D0 u
  bool phi_comm_bound_holds = false;
};

/// Runs the bounded-module checks for every listed unitary.  Requires D0
/// invertible beyond zero_tol (sgn must be defined).
std::vector<Corollary04Report> check_corollary04(const ModuleSpec& spec, double Kp);

/// ||X||_p + ||X F0 + F0 X||_{p/2}.  For p < 2 the second exponent drops
/// below 1 and the quantity is only a quasi-norm; strict mode rejects it.
double norm_p_phalf(const AlgebraElement& X, const AlgebraElement& F0, double p,
                    bool strict = false);

struct PhiAffineImage {
  double x_norm_p_phalf = 0.0;
  double identity_residual = 0.0;  // 1 - phi(D)^2 vs 1 - F0^2 - (X^2 + F0 X + X F0)
  double bound_lhs = 0.0;          // ||X_D||_p
  double bound_rhs = 0.0;          // Z_p' max(||A||^{1/2}, ||A||) ||z||_p
  bool bound_holds = false;
  bool quasi_norm = false;         // p < 2: mixed norm is only a quasi-norm
};

/// X_D = phi(D0 + A) - phi(D0) with the affine-image decomposition identity
/// and the phi-difference bound.
PhiAffineImage phi_affine_image(const AlgebraElement& D0, const AlgebraElement& A, double p,
                                double Kp);

/// tau(F0 [F0,a^0][F0,a^1] ... [F0,a^{2n+1}]) for a symmetry F0 (F0^2 = 1)
/// and an even-length list (odd cocycle degree).
Complex chern_character(const AlgebraElement& F0, const std::vector<AlgebraElement>& arguments);

}  // namespace specflow
