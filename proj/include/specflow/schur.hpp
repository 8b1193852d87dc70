#pragma once

#include <array>
#include <optional>

#include "specflow/norms.hpp"
#include "specflow/report.hpp"

namespace specflow {

/// Mutually orthogonal projections with one real value attached to each.
struct ProjectionFamily {
  std::vector<AlgebraElement> projections;
  std::vector<double> values;

  int size() const { return static_cast<int>(projections.size()); }
  AlgebraElement sum() const;
};

/// Clusters the spectrum of x within cluster_tol and returns one projection
/// per cluster; the reconstruction sum_i value_i P_i reproduces x up to
/// cluster_tol * (number of clusters).
ProjectionFamily spectral_projection_family(const AlgebraElement& x, double cluster_tol = -1.0);

/// The multiplier transform sum_{m,n} (lambda_m - mu_n)/(lambda_m + mu_n)
/// p_m a q_n.  Values must be nonnegative with lambda_m + mu_n > 0 for
/// every pair.
AlgebraElement schur_transform(const AlgebraElement& a, const ProjectionFamily& fam_p,
                               const ProjectionFamily& fam_q);

enum class ConstantName { Kp, Zp, ZpPrime, KcalP, Cp251 };

const char* constant_name_str(ConstantName n);
std::optional<ConstantName> parse_constant_name(const std::string& s);

/// Empirically estimated constant with the instance achieving the maximum.
/// The witness is stored structurally and serialized by the io layer.
struct ConstantEstimate {
  ConstantName name = ConstantName::Kp;
  double p = 0.0;
  double value = 0.0;
  int trials = 0;
  uint64_t seed = 0;

  std::vector<Matrix> witness_projections;
  std::vector<double> witness_lambda;
  std::vector<double> witness_mu;
  Matrix witness_a;
  int witness_dim = 0;
};

/// Maximizes the transform's L_p -> L_p norm ratio over random instances
/// (one projection family, two value lists) followed by 50 rounds of local
/// refinement.  Deterministic in seed; trials run concurrently and reduce
/// by (ratio, trial index).
ConstantEstimate estimate_Kp(double p, const std::vector<int>& dims, int trials, uint64_t seed);

/// Recomputes the ratio from the stored witness.
double reevaluate_witness(const ConstantEstimate& est, double p);

/// Derived constants of the inequality chain.
double kcal_p(double Kp);      // 2 (1 + K_p)
double zprime_p(double Kp);    // kcal_p + 2^{3/2} + 1
double z_p(double Kp);         // zprime_p + 2^{3/2} + 1

/// c1 = [x,y]z and c2 = [|x|,y]z; requires x Hermitian and xz = zx to
/// 1e-8 relative.
std::pair<AlgebraElement, AlgebraElement> weighted_commutators(const AlgebraElement& x,
                                                               const AlgebraElement& y,
                                                               const AlgebraElement& z);

/// ||[|x|,y] z||_p <= 2 (1 + K_p) ||[x,y] z||_p.
InequalityReport verify_prop21(const AlgebraElement& x, const AlgebraElement& y,
                               const AlgebraElement& z, double p, double Kp);

struct CornerResiduals {
  // pos/neg corner equalities, then the two off-corner coefficient sums
  std::array<double, 4> residuals = {0.0, 0.0, 0.0, 0.0};
  bool degenerate_split = false;  // x had a trivial positive or negative part
  double max() const { return std::max(std::max(residuals[0], residuals[1]), std::max(residuals[2], residuals[3])); }
};

/// Residuals of the four spectral-corner identities behind the commutator
/// estimate; empty corners contribute zero.
CornerResiduals corner_identities(const AlgebraElement& x, const AlgebraElement& y,
                                  const AlgebraElement& z);

struct Dilation {
  AlgebraPtr doubled;
  AlgebraElement X;  // diag(x, y)
  AlgebraElement Y;  // lower shift
  AlgebraElement Z;  // diag(z, 0)
  double corner_residual = 0.0;  // [|X|,Y]Z lower-left vs (|y| - |x|) z
};

/// The 2x2 dilation that turns the commutator estimate into the
/// absolute-value difference estimate.
Dilation dilate_2x2(const AlgebraElement& x, const AlgebraElement& y, const AlgebraElement& z);

/// ||(|x| - |y|) z||_p <= 2 (1 + K_p) ||(x - y) z||_p.
InequalityReport verify_prop22(const AlgebraElement& x, const AlgebraElement& y,
                               const AlgebraElement& z, double p, double Kp);

/// Throws NotCommuting unless ||xz - zx|| <= tol_rel * ||x|| ||z||.
void require_commuting(const AlgebraElement& x, const AlgebraElement& z, double tol_rel = 1e-8);

}  // namespace specflow
