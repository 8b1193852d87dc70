#include "specflow/fredholm.hpp"

#include <cmath>

namespace specflow {

void ModuleSpec::validate() const {
  if (!(p > 1.0) || std::isinf(p)) throw Error(Errc::BadExponent, "module needs 1 < p < inf");
  if (!D0.hermitian()) throw Error(Errc::NonHermitian, "D0 must be Hermitian");
  for (const AlgebraElement& u : unitaries) {
    const AlgebraElement gram = u.adjoint() * u - AlgebraElement::identity(u.algebra());
    if (operator_norm(gram) > 1e-10) throw Error(Errc::BadConfig, "listed element is not unitary");
  }
}

SummabilityProfile summability_profile(const ModuleSpec& spec) {
  SummabilityProfile out;
  const AlgebraElement z = resolvent_half(spec.D0);
  const AlgebraElement f0 = phi_map(spec.D0);
  const AlgebraElement one = AlgebraElement::identity(spec.algebra);
  const AlgebraElement gap = (one - f0 * f0).hermitian_part();
  const AlgebraElement bounded = func_calc(gap, [](double t) { return std::sqrt(std::abs(t)); });

  out.norm_unbounded = schatten_norm(z, spec.p);
  out.norm_bounded = schatten_norm(bounded, spec.p);
  out.residual = std::abs(out.norm_unbounded - out.norm_bounded);

  // cumulative truncation profile over block prefixes
  double acc = 0.0;
  for (int k = 0; k < spec.algebra->num_blocks(); ++k) {
    const double w = spec.algebra->block(k).weight;
    Eigen::VectorXd evals;
    Matrix vecs;
    detail::jacobi_hermitian(z.block(k), evals, vecs, k);
    for (int i = 0; i < evals.size(); ++i) acc += w * std::pow(std::abs(evals(i)), spec.p);
    out.truncation_profile.push_back(std::pow(acc, 1.0 / spec.p));
  }
  return out;
}

std::vector<Corollary04Report> check_corollary04(const ModuleSpec& spec, double Kp) {
  spec.validate();
  const SpectralDecomposition dec = eig_hermitian(spec.D0);
  if (dec.min_abs_eigenvalue() <= spec.zero_tol)
    throw Error(Errc::KernelTooClose, "D0 has spectrum within zero_tol of 0");

  const AlgebraElement one = AlgebraElement::identity(spec.algebra);
  const AlgebraElement f0 = phi_map(spec.D0);
  const AlgebraElement sgn = sgn_op(spec.D0, spec.zero_tol);
  const AlgebraElement resolvent = dec.apply([](double t) { return 1.0 / (1.0 + t * t); });
  const AlgebraElement gap = sgn - f0;
  const AlgebraElement sum_inv = func_calc((sgn + f0).hermitian_part(), [](double t) {
    return 1.0 / t;
  });

  const double factor_residual = operator_norm(gap * (sgn + f0) - resolvent);
  const double gap_p = schatten_norm(gap, spec.p);
  const double gap_bound = schatten_norm(resolvent, spec.p) * operator_norm(sum_inv);
  const double z_norm = schatten_norm(resolvent_half(spec.D0), spec.p);

  std::vector<Corollary04Report> reports;
  reports.reserve(spec.unitaries.size());
  for (const AlgebraElement& u : spec.unitaries) {
    Corollary04Report r;
    r.comm_D = operator_norm(commutator(spec.D0, u));
    const AlgebraElement comm_phi = commutator(f0, u);
    r.comm_phi_p = schatten_norm(comm_phi, spec.p);
    r.comm_sgn_p = schatten_norm(commutator(sgn, u), spec.p);

    const AlgebraElement conjugated = (u.adjoint() * spec.D0 * u).hermitian_part();
    r.conj_residual = operator_norm(comm_phi - u * (phi_map(conjugated) - f0));
    r.factor_residual = factor_residual;

    r.gap_p = gap_p;
    r.gap_bound = gap_bound;
    r.gap_bound_holds = gap_p <= gap_bound + 1e-9;

    r.triangle_lhs = r.comm_sgn_p;
    r.triangle_rhs = 2.0 * gap_p + r.comm_phi_p;
    r.triangle_holds = r.triangle_lhs <= r.triangle_rhs + 1e-9;

    // Proof of the commutator membership: [phi(D0), u] = u (phi(D) - phi(D0))
    // with D = u* D0 u, so the main theorem bounds its norm.
    const double defect = operator_norm(commutator(spec.D0, u));
    const double modulus = std::max(std::sqrt(defect), defect);
    r.phi_comm_bound = zprime_p(Kp) * modulus * z_norm;
    r.phi_comm_bound_holds = r.comm_phi_p <= r.phi_comm_bound + 1e-8;

    reports.push_back(r);
  }
  return reports;
}

double norm_p_phalf(const AlgebraElement& X, const AlgebraElement& F0, double p, bool strict) {
  if (!(p >= 1.0)) throw Error(Errc::BadExponent, "mixed norm needs p >= 1");
  if (strict && p < 2.0)
    throw Error(Errc::BadExponent, "p/2 < 1: mixed quantity is only a quasi-norm");
  const double head = schatten_norm(X, p);
  const AlgebraElement cross = X * F0 + F0 * X;
  // For p < 2 this evaluates the quasi-norm with the same formula.
  const double tail_exp = p / 2.0;
  double tail;
  if (tail_exp >= 1.0) {
    tail = schatten_norm(cross, tail_exp);
  } else {
    double acc = 0.0;
    const SingularValueFunction m = mu(cross);
    acc = m.integral_pow(tail_exp);
    tail = std::pow(acc, 1.0 / tail_exp);
  }
  return head + tail;
}

PhiAffineImage phi_affine_image(const AlgebraElement& D0, const AlgebraElement& A, double p,
                                double Kp) {
  if (!(p > 1.0) || std::isinf(p)) throw Error(Errc::BadExponent, "needs 1 < p < inf");
  if (!D0.hermitian() || !A.hermitian()) throw Error(Errc::NonHermitian, "needs Hermitian D0, A");

  const AlgebraElement D = (D0 + A).hermitian_part();
  const AlgebraElement f0 = phi_map(D0);
  const AlgebraElement f = phi_map(D);
  const AlgebraElement x_d = f - f0;
  const AlgebraElement one = AlgebraElement::identity(D0.algebra());

  PhiAffineImage out;
  out.quasi_norm = p < 2.0;
  out.x_norm_p_phalf = norm_p_phalf(x_d, f0, p);

  const AlgebraElement lhs = one - f * f;
  const AlgebraElement rhs = one - f0 * f0 - (x_d * x_d + f0 * x_d + x_d * f0);
  out.identity_residual = operator_norm(lhs - rhs);

  out.bound_lhs = schatten_norm(x_d, p);
  out.bound_rhs = zprime_p(Kp) * perturbation_modulus(A) * schatten_norm(resolvent_half(D0), p);
  out.bound_holds = out.bound_lhs <= out.bound_rhs + 1e-8;
  return out;
}

Complex chern_character(const AlgebraElement& F0, const std::vector<AlgebraElement>& arguments) {
  if (!F0.hermitian()) throw Error(Errc::NotSymmetry, "F0 must be a Hermitian symmetry");
  const AlgebraElement one = AlgebraElement::identity(F0.algebra());
  if (operator_norm(F0 * F0 - one) > 1e-10)
    throw Error(Errc::NotSymmetry, "F0^2 must equal 1");
  if (arguments.empty() || arguments.size() % 2 != 0)
    throw Error(Errc::BadConfig, "character needs 2n+2 arguments");

  AlgebraElement acc = F0;
  for (const AlgebraElement& a : arguments) acc = acc * commutator(F0, a);
  return trace(acc);
}

}  // namespace specflow
