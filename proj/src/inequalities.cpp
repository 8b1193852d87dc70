#include "specflow/inequalities.hpp"

#include <cmath>

namespace specflow {

namespace {

constexpr double kTwoPow32 = 2.8284271247461900976;  // 2^{3/2}

}  // namespace

double transfer_constant(double c, double z_norm, TransferDirection) {
  if (c < 0.0 || z_norm < 0.0) throw Error(Errc::BadConfig, "transfer_constant needs c, z_norm >= 0");
  // the proposition is symmetric: both directions add the same term
  return c + (kTwoPow32 + 1.0) * z_norm;
}

double perturbation_modulus(const AlgebraElement& a) {
  const double nrm = operator_norm(a);
  return std::max(std::sqrt(nrm), nrm);
}

bool is_psd(const AlgebraElement& x, double tol) {
  return eig_hermitian(x).min_eigenvalue() >= -tol;
}

std::pair<InequalityReport, InequalityReport> verify_thm03i(const AlgebraElement& x,
                                                            const AlgebraElement& a, double p,
                                                            double Kp) {
  if (!(p > 1.0) || std::isinf(p)) throw Error(Errc::BadExponent, "theorem 0.3(i) needs 1 < p < inf");
  if (!x.hermitian() || !a.hermitian())
    throw Error(Errc::NonHermitian, "theorem 0.3(i) needs Hermitian x, a");

  const AlgebraElement y = (x - a).hermitian_part();
  const AlgebraElement z = resolvent_half(x);
  const double z_norm = schatten_norm(z, p);
  const double modulus = perturbation_modulus(a);
  const std::string digest = digest_of({&x, &a}, p);

  const double lhs_abs = schatten_norm((abs_op(x) - abs_op(y)) * z, p);
  const double c_abs = z_p(Kp);
  InequalityReport abs_report = make_report("thm03i_abs", p, lhs_abs, c_abs * modulus * z_norm,
                                            c_abs, 1e-8, digest);

  const double lhs_phi = schatten_norm(phi_map(y) - phi_map(x), p);
  const double c_phi = zprime_p(Kp);
  InequalityReport phi_report = make_report("thm03i_phi", p, lhs_phi, c_phi * modulus * z_norm,
                                            c_phi, 1e-8, digest);
  return {abs_report, phi_report};
}

InequalityReport verify_thm03ii(const AlgebraElement& x, const AlgebraElement& a,
                                const AlgebraElement& z, double p, double Kp) {
  if (!(p > 1.0) || std::isinf(p)) throw Error(Errc::BadExponent, "theorem 0.3(ii) needs 1 < p < inf");
  if (!x.hermitian() || !a.hermitian())
    throw Error(Errc::NonHermitian, "theorem 0.3(ii) needs Hermitian x, a");
  if (!z.hermitian() || eig_hermitian(z).min_eigenvalue() <= 1e-12)
    throw Error(Errc::SupportDeficient, "z must be positive with full support");
  require_commuting(x, z);

  const AlgebraElement y = (x - a).hermitian_part();
  const double constant = kcal_p(Kp);
  const double lhs = schatten_norm((abs_op(x) - abs_op(y)) * z, p);
  const double rhs = constant * operator_norm(a) * schatten_norm(z, p);
  return make_report("thm03ii", p, lhs, rhs, constant, 1e-8, digest_of({&x, &a, &z}, p));
}

InequalityReport verify_25(const AlgebraElement& x, const AlgebraElement& a, double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw Error(Errc::BadExponent, "estimate (2.5) needs 1 <= p < inf");
  if (!x.hermitian() || !a.hermitian())
    throw Error(Errc::NonHermitian, "estimate (2.5) needs Hermitian x, a");

  const AlgebraElement y = (x - a).hermitian_part();
  const AlgebraElement z = resolvent_half(x);
  const auto weighted_abs = [](double t) { return std::abs(t) / std::sqrt(1.0 + t * t); };
  const double lhs = schatten_norm(func_calc(y, weighted_abs) - func_calc(x, weighted_abs), p);
  const double rhs = kTwoPow32 * schatten_norm(z, p) * perturbation_modulus(a);
  return make_report("ineq25", p, lhs, rhs, kTwoPow32, 1e-8, digest_of({&x, &a}, p));
}

std::pair<InequalityReport, InequalityReport> verify_lemmaA1(const AlgebraElement& x,
                                                             const AlgebraElement& y) {
  if (!x.hermitian() || !y.hermitian())
    throw Error(Errc::NonHermitian, "lemma A.1 needs Hermitian x, y");
  if (!is_psd(y + x) || !is_psd(y - x))
    throw Error(Errc::OrderViolation, "lemma A.1 needs -y <= x <= y");

  const std::string digest = digest_of({&x, &y});
  const SingularValueFunction mux = mu(x);
  // mu_{s/2}(y) as a function of s is mu(y) with doubled step widths
  const SingularValueFunction muy_half = mu(y).dilated(2.0);

  std::vector<double> grid = mux.breakpoints();
  const std::vector<double> gy = muy_half.breakpoints();
  grid.insert(grid.end(), gy.begin(), gy.end());
  grid.push_back(0.0);

  // pointwise comparison of two step functions: checking just after every
  // breakpoint of either covers all s
  double worst = 0.0;
  for (double s : grid) worst = std::max(worst, mux.value_at(s) - muy_half.value_at(s));
  InequalityReport pointwise = make_report("lemma_a1", 0.0, worst, 0.0, 0.0, 1e-9, digest);

  InequalityReport half_power =
      verify_corA1(x, y, [](double t) { return std::sqrt(t); }, "sqrt");
  return {pointwise, half_power};
}

InequalityReport verify_corA1(const AlgebraElement& x, const AlgebraElement& y,
                              const std::function<double(double)>& f, const std::string& fname) {
  if (!x.hermitian() || !y.hermitian())
    throw Error(Errc::NonHermitian, "corollary A.1 needs Hermitian x, y");
  if (!is_psd(y + x) || !is_psd(y - x))
    throw Error(Errc::OrderViolation, "corollary A.1 needs -y <= x <= y");

  const AlgebraElement fx = func_calc(abs_op(x), f);
  const AlgebraElement fy = func_calc(y, f);
  const auto sub = submajorizes(mu(fy).scaled(2.0), mu(fx), 1e-9);
  return make_report("cor_a1_" + fname, 0.0, -sub.margin, 0.0, 2.0, 1e-9, digest_of({&x, &y}));
}

InequalityReport verify_A2(const AlgebraElement& x, const AlgebraElement& a, double p) {
  if (!x.hermitian() || !a.hermitian())
    throw Error(Errc::NonHermitian, "estimate (A.2) needs Hermitian x, a");

  const AlgebraElement y = (x - a).hermitian_part();
  const AlgebraElement rx = func_calc(x, [](double t) { return 1.0 / (1.0 + t * t); });
  const AlgebraElement ry = func_calc(y, [](double t) { return 1.0 / (1.0 + t * t); });
  const AlgebraElement diff = (ry - rx).hermitian_part();
  const AlgebraElement lhs_op = func_calc(diff, [](double t) { return std::sqrt(std::abs(t)); });

  const double nrm = operator_norm(a);
  const double m_quad = std::max(nrm * nrm, nrm);
  const double factor = 2.0 * std::sqrt(2.0 * m_quad);
  const AlgebraElement z = resolvent_half(x);

  const auto sub = submajorizes(mu(z).scaled(factor), mu(lhs_op), 1e-9);
  const double eig_lower = eig_hermitian(((2.0 * m_quad) * rx + diff).hermitian_part()).min_eigenvalue();
  const double eig_upper = eig_hermitian(((2.0 * m_quad) * rx - diff).hermitian_part()).min_eigenvalue();

  // norm consequence at p, here with slack folded into the violation below
  const double norm_lhs = schatten_norm(lhs_op, p);
  const double norm_rhs = kTwoPow32 * std::sqrt(m_quad) * schatten_norm(z, p);

  // worst violation over submajorization, the two sandwich orderings, and
  // the norm consequence; all nonpositive up to roundoff when (A.2) holds
  const double violation = std::max(std::max(-sub.margin, norm_lhs - norm_rhs),
                                    std::max(-eig_lower, -eig_upper));
  InequalityReport r = make_report("a2", p, violation, 0.0, kTwoPow32, 1e-9, digest_of({&x, &a}, p));
  return r;
}

InequalityReport verify_bks(const AlgebraElement& a, const AlgebraElement& b) {
  if (!a.hermitian() || !b.hermitian()) throw Error(Errc::NotPsd, "BKS needs positive operands");
  if (!is_psd(a) || !is_psd(b)) throw Error(Errc::NotPsd, "BKS needs positive operands");

  const auto sqrt_clamped = [](double t) { return std::sqrt(std::max(0.0, t)); };
  const AlgebraElement lhs = func_calc(a, sqrt_clamped) - func_calc(b, sqrt_clamped);
  const AlgebraElement rhs = func_calc((a - b).hermitian_part(),
                                       [](double t) { return std::sqrt(std::abs(t)); });
  const auto sub = submajorizes(mu(rhs), mu(lhs), 1e-9);
  // margin is recoverable as -lhs
  return make_report("bks", 0.0, -sub.margin, 0.0, 0.0, 1e-9, digest_of({&a, &b}));
}

}  // namespace specflow
