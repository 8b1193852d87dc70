#pragma once

#include "specflow/schur.hpp"

namespace specflow {

/// Constant transfer between the weighted-absolute-value inequality and the
/// phi-difference inequality: c -> c + (2^{3/2} + 1) ||z||_p, both ways.
enum class TransferDirection { ToPhi, FromPhi };
double transfer_constant(double c, double z_norm, TransferDirection direction);

/// max(||a||^{1/2}, ||a||) in operator norm; the Hoelder-type modulus every
/// bound below is stated against.
double perturbation_modulus(const AlgebraElement& a);

/// Both halves of the main theorem at exponent p, with y := x - a and
/// z := (1 + x^2)^{-1/2}:
///   first:  ||(|x| - |y|) z||_p  <= Z_p  max(...) ||z||_p
///   second: ||phi(y) - phi(x)||_p <= Z_p' max(...) ||z||_p
std::pair<InequalityReport, InequalityReport> verify_thm03i(const AlgebraElement& x,
                                                            const AlgebraElement& a, double p,
                                                            double Kp);

/// ||(|x| - |y|) z||_p <= 2 (1 + K_p) ||a|| ||z||_p for commuting, fully
/// supported z >= 0.
InequalityReport verify_thm03ii(const AlgebraElement& x, const AlgebraElement& a,
                                const AlgebraElement& z, double p, double Kp);

/// The constant-free estimate: with y := x - a,
/// || |y|(1+y^2)^{-1/2} - |x|(1+x^2)^{-1/2} ||_p <= 2^{3/2} ||z||_p max(...).
/// Valid down to p = 1.
InequalityReport verify_25(const AlgebraElement& x, const AlgebraElement& a, double p);

/// mu_s(x) <= mu_{s/2}(y) whenever -y <= x <= y, plus the square-root
/// submajorization corollary f(|x|) <<= 2 f(y) for f = sqrt.
std::pair<InequalityReport, InequalityReport> verify_lemmaA1(const AlgebraElement& x,
                                                             const AlgebraElement& y);

/// Submajorization corollary for a fixed continuous increasing f with
/// f(0) >= 0: mu-step comparison of f(|x|) against 2 f(y).
InequalityReport verify_corA1(const AlgebraElement& x, const AlgebraElement& y,
                              const std::function<double(double)>& f, const std::string& fname);

/// The resolvent-difference submajorization with the sandwich bound
/// -2 M z^2 <= (1+y^2)^{-1} - (1+x^2)^{-1} <= 2 M z^2, M = max(||a||^2, ||a||),
/// plus its L_p norm consequence at the given p.
InequalityReport verify_A2(const AlgebraElement& x, const AlgebraElement& a, double p);

/// a^{1/2} - b^{1/2} <<= |a - b|^{1/2} for positive a, b.
InequalityReport verify_bks(const AlgebraElement& a, const AlgebraElement& b);

/// PSD check used by the order-sensitive verifiers: min eigenvalue >= -tol.
bool is_psd(const AlgebraElement& x, double tol = 1e-10);

}  // namespace specflow
