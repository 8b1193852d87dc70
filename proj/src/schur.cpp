#include "specflow/schur.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specflow/gen.hpp"
#include "specflow/parallel.hpp"

namespace specflow {

void require_commuting(const AlgebraElement& x, const AlgebraElement& z, double tol_rel) {
  const double defect = operator_norm(commutator(x, z));
  const double scale = operator_norm(x) * operator_norm(z);
  if (defect > tol_rel * std::max(scale, 1e-300))
    throw Error(Errc::NotCommuting, "commutation defect " + std::to_string(defect));
}

AlgebraElement ProjectionFamily::sum() const {
  if (projections.empty()) throw Error(Errc::BadConfig, "empty projection family has no algebra");
  AlgebraElement s = AlgebraElement::zeros(projections.front().algebra());
  for (const auto& proj : projections) s += proj;
  return s;
}

ProjectionFamily spectral_projection_family(const AlgebraElement& x, double cluster_tol) {
  const SpectralDecomposition dec = eig_hermitian(x, cluster_tol);

  struct Entry {
    double value;
    int block;
    int col;
  };
  std::vector<Entry> entries;
  for (int k = 0; k < x.num_blocks(); ++k)
    for (int i = 0; i < dec.eigenvalues[static_cast<size_t>(k)].size(); ++i)
      entries.push_back({dec.eigenvalues[static_cast<size_t>(k)](i), k, i});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.value < b.value; });

  ProjectionFamily fam;
  size_t start = 0;
  while (start < entries.size()) {
    size_t end = start + 1;
    // chained clustering: extend while consecutive gaps stay within tolerance
    while (end < entries.size() && entries[end].value - entries[end - 1].value <= dec.cluster_tol)
      ++end;

    std::vector<Matrix> blocks;
    for (int k = 0; k < x.num_blocks(); ++k) {
      const int n = x.algebra()->block(k).size;
      blocks.push_back(Matrix::Zero(n, n));
    }
    double mean = 0.0;
    for (size_t i = start; i < end; ++i) {
      const Entry& e = entries[i];
      const auto col = dec.vectors[static_cast<size_t>(e.block)].col(e.col);
      blocks[static_cast<size_t>(e.block)] += col * col.adjoint();
      mean += e.value;
    }
    mean /= static_cast<double>(end - start);

    AlgebraElement proj(x.algebra(), std::move(blocks));
    proj.certify_hermitian();
    fam.projections.push_back(std::move(proj));
    fam.values.push_back(mean);
    start = end;
  }
  return fam;
}

AlgebraElement schur_transform(const AlgebraElement& a, const ProjectionFamily& fam_p,
                               const ProjectionFamily& fam_q) {
  if (fam_p.size() != static_cast<int>(fam_p.values.size()) ||
      fam_q.size() != static_cast<int>(fam_q.values.size()))
    throw Error(Errc::BadConfig, "projection family values out of sync");
  for (double v : fam_p.values)
    if (v < 0.0) throw Error(Errc::DomainError, "schur transform needs nonnegative lambda");
  for (double v : fam_q.values)
    if (v < 0.0) throw Error(Errc::DomainError, "schur transform needs nonnegative mu");
  for (double lam : fam_p.values)
    for (double mu : fam_q.values)
      if (!(lam + mu > 0.0))
        throw Error(Errc::DegeneratePair, "pair with lambda + mu = 0 is not allowed");

  AlgebraElement out = AlgebraElement::zeros(a.algebra());
  for (int m = 0; m < fam_p.size(); ++m) {
    const AlgebraElement left = fam_p.projections[static_cast<size_t>(m)] * a;
    for (int n = 0; n < fam_q.size(); ++n) {
      const double lam = fam_p.values[static_cast<size_t>(m)];
      const double mu = fam_q.values[static_cast<size_t>(n)];
      const double coef = (lam - mu) / (lam + mu);
      if (coef == 0.0) continue;
      out += coef * (left * fam_q.projections[static_cast<size_t>(n)]);
    }
  }
  return out;
}

const char* constant_name_str(ConstantName n) {
  switch (n) {
    case ConstantName::Kp: return "K_p";
    case ConstantName::Zp: return "Z_p";
    case ConstantName::ZpPrime: return "Z_p'";
    case ConstantName::KcalP: return "K_cal_p";
    case ConstantName::Cp251: return "C_p_251";
  }
  return "?";
}

std::optional<ConstantName> parse_constant_name(const std::string& s) {
  if (s == "K_p") return ConstantName::Kp;
  if (s == "Z_p") return ConstantName::Zp;
  if (s == "Z_p'") return ConstantName::ZpPrime;
  if (s == "K_cal_p") return ConstantName::KcalP;
  if (s == "C_p_251") return ConstantName::Cp251;
  return std::nullopt;
}

double kcal_p(double Kp) { return 2.0 * (1.0 + Kp); }
double zprime_p(double Kp) { return kcal_p(Kp) + std::pow(2.0, 1.5) + 1.0; }
double z_p(double Kp) { return zprime_p(Kp) + std::pow(2.0, 1.5) + 1.0; }

namespace {

struct KpInstance {
  ProjectionFamily fam_p;  // lambda values
  ProjectionFamily fam_q;  // same projections, mu values
  AlgebraElement a;

  KpInstance() : a(AlgebraElement::zeros(make_algebra({{1, 1.0}}))) {}
};

double instance_ratio(const KpInstance& inst, double p) {
  const double denom = schatten_norm(inst.a, p);
  if (!(denom > 0.0)) return 0.0;
  return schatten_norm(schur_transform(inst.a, inst.fam_p, inst.fam_q), p) / denom;
}

Matrix plain_gaussian(Rng& rng, int n) {
  Matrix g(n, n);
  const double factor = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = factor * rng.gaussian_complex();
  return g;
}

Matrix plain_unitary(Rng& rng, int n) {
  Matrix g = plain_gaussian(rng, n);
  for (int j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) g.col(j) -= g.col(i).dot(g.col(j)) * g.col(i);
    g.col(j) /= g.col(j).norm();
  }
  return g;
}

double sample_value(Rng& rng) {
  // log-uniform over [1e-4, 1e4]; the multiplier saturates at extreme ratios
  return std::exp(rng.uniform(std::log(1e-4), std::log(1e4)));
}

KpInstance sample_instance(Rng& rng, int dim) {
  KpInstance inst;
  const AlgebraPtr alg = make_algebra({{dim, 1.0}});
  const int groups = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(dim)));
  std::vector<int> assignment(static_cast<size_t>(dim));
  for (int& g : assignment) g = static_cast<int>(rng.below(static_cast<uint64_t>(groups)));
  const Matrix u = plain_unitary(rng, dim);

  ProjectionFamily fam;
  for (int g = 0; g < groups; ++g) {
    Matrix d = Matrix::Zero(dim, dim);
    for (int j = 0; j < dim; ++j)
      if (assignment[static_cast<size_t>(j)] == g) d(j, j) = 1.0;
    AlgebraElement proj(alg, {u * d * u.adjoint()});
    proj.certify_hermitian();
    fam.projections.push_back(std::move(proj));
    fam.values.push_back(0.0);
  }
  inst.fam_p = fam;
  inst.fam_q = fam;
  for (int g = 0; g < groups; ++g) {
    inst.fam_p.values[static_cast<size_t>(g)] = sample_value(rng);
    // boundary case mu = 0 saturates the multiplier at 1
    inst.fam_q.values[static_cast<size_t>(g)] = rng.uniform() < 0.15 ? 0.0 : sample_value(rng);
  }
  inst.a = AlgebraElement(alg, {plain_gaussian(rng, dim)});
  return inst;
}

// u |b|^{r} via the polar decomposition; near-kernel directions are dropped.
AlgebraElement polar_power(const AlgebraElement& b, double r) {
  std::vector<Matrix> blocks;
  for (int k = 0; k < b.num_blocks(); ++k) {
    Eigen::VectorXd w;
    Matrix v;
    detail::jacobi_hermitian(b.block(k).adjoint() * b.block(k), w, v, k);
    Eigen::VectorXd s(w.size());
    double smax = 0.0;
    for (int i = 0; i < w.size(); ++i) {
      s(i) = std::sqrt(std::max(0.0, w(i)));
      smax = std::max(smax, s(i));
    }
    Eigen::VectorXd d(w.size());
    for (int i = 0; i < w.size(); ++i)
      d(i) = s(i) > 1e-12 * smax ? std::pow(s(i), r - 1.0) : 0.0;
    blocks.push_back(b.block(k) * v * d.asDiagonal() * v.adjoint());
  }
  return AlgebraElement(b.algebra(), std::move(blocks));
}

void refine_instance(KpInstance& inst, double p, double& best, Rng& rng) {
  (void)rng;
  const int rounds = 50;
  const double qexp = p / (p - 1.0);
  for (int round = 0; round < rounds; ++round) {
    // coordinate ascent on the value lists
    for (int which = 0; which < 2; ++which) {
      std::vector<double>& values = which == 0 ? inst.fam_p.values : inst.fam_q.values;
      for (double& v : values) {
        const double saved = v;
        double best_v = saved;
        for (double cand : {saved * 4.0, saved * 0.25, saved * 1.25, saved * 0.8, 0.0}) {
          if (which == 0 && !(cand > 0.0)) continue;  // keep lambda strictly positive
          v = cand;
          const double r = instance_ratio(inst, p);
          if (r > best) {
            best = r;
            best_v = cand;
          }
        }
        v = best_v;
      }
    }
    // power-iteration-style ascent on a
    const AlgebraElement image = schur_transform(inst.a, inst.fam_p, inst.fam_q);
    const AlgebraElement dual = polar_power(image, p - 1.0);
    const AlgebraElement pulled = schur_transform(dual, inst.fam_p, inst.fam_q);
    AlgebraElement candidate = polar_power(pulled, qexp - 1.0);
    const double nrm = schatten_norm(candidate, p);
    if (nrm > 0.0) {
      candidate *= 1.0 / nrm;
      const AlgebraElement saved = inst.a;
      inst.a = candidate;
      const double r = instance_ratio(inst, p);
      if (r > best)
        best = r;
      else
        inst.a = saved;
    }
  }
}

}  // namespace

ConstantEstimate estimate_Kp(double p, const std::vector<int>& dims, int trials, uint64_t seed) {
  if (!(p > 1.0) || std::isinf(p)) throw Error(Errc::BadExponent, "estimate_Kp needs 1 < p < inf");
  if (trials < 1 || dims.empty()) throw Error(Errc::BadConfig, "estimate_Kp needs trials and dims");

  const uint64_t suite_hash = fnv1a("estimate_Kp");
  std::vector<double> ratios(static_cast<size_t>(trials), 0.0);
  parallel_for(trials, [&](int t) {
    Rng rng(substream(seed, suite_hash, static_cast<uint64_t>(t)));
    const KpInstance inst = sample_instance(rng, dims[static_cast<size_t>(t) % dims.size()]);
    ratios[static_cast<size_t>(t)] = instance_ratio(inst, p);
  });

  int winner = 0;
  for (int t = 1; t < trials; ++t)
    if (ratios[static_cast<size_t>(t)] > ratios[static_cast<size_t>(winner)]) winner = t;

  Rng rng(substream(seed, suite_hash, static_cast<uint64_t>(winner)));
  KpInstance inst = sample_instance(rng, dims[static_cast<size_t>(winner) % dims.size()]);
  double best = instance_ratio(inst, p);

  Rng refine_rng(substream(seed, fnv1a("estimate_Kp.refine")));
  refine_instance(inst, p, best, refine_rng);

  ConstantEstimate est;
  est.name = ConstantName::Kp;
  est.p = p;
  est.value = best;
  est.trials = trials;
  est.seed = seed;
  est.witness_dim = static_cast<int>(inst.a.block(0).rows());
  for (const auto& proj : inst.fam_p.projections) est.witness_projections.push_back(proj.block(0));
  est.witness_lambda = inst.fam_p.values;
  est.witness_mu = inst.fam_q.values;
  est.witness_a = inst.a.block(0);
  return est;
}

double reevaluate_witness(const ConstantEstimate& est, double p) {
  const AlgebraPtr alg = make_algebra({{est.witness_dim, 1.0}});
  KpInstance inst;
  for (const Matrix& m : est.witness_projections) {
    AlgebraElement proj(alg, {m});
    proj.certify_hermitian();
    inst.fam_p.projections.push_back(proj);
    inst.fam_q.projections.push_back(std::move(proj));
  }
  inst.fam_p.values = est.witness_lambda;
  inst.fam_q.values = est.witness_mu;
  inst.a = AlgebraElement(alg, {est.witness_a});
  return instance_ratio(inst, p);
}

std::pair<AlgebraElement, AlgebraElement> weighted_commutators(const AlgebraElement& x,
                                                               const AlgebraElement& y,
                                                               const AlgebraElement& z) {
  if (!x.hermitian()) throw Error(Errc::NonHermitian, "weighted_commutators needs Hermitian x");
  require_commuting(x, z);
  return {commutator(x, y) * z, commutator(abs_op(x), y) * z};
}

InequalityReport verify_prop21(const AlgebraElement& x, const AlgebraElement& y,
                               const AlgebraElement& z, double p, double Kp) {
  if (!(p > 1.0) || std::isinf(p)) throw Error(Errc::BadExponent, "prop 2.1 needs 1 < p < inf");
  const auto [plain, weighted] = weighted_commutators(x, y, z);
  const double constant = kcal_p(Kp);
  return make_report("prop21", p, schatten_norm(weighted, p), constant * schatten_norm(plain, p),
                     constant, 1e-8, digest_of({&x, &y, &z}, p));
}

CornerResiduals corner_identities(const AlgebraElement& x, const AlgebraElement& y,
                                  const AlgebraElement& z) {
  if (!x.hermitian()) throw Error(Errc::NonHermitian, "corner_identities needs Hermitian x");
  require_commuting(x, z);

  const ProjectionFamily fam = spectral_projection_family(x);
  // zero eigenvalues land in the positive family so that p + q = 1
  ProjectionFamily pos, neg;
  for (int i = 0; i < fam.size(); ++i) {
    if (fam.values[static_cast<size_t>(i)] >= 0.0) {
      pos.projections.push_back(fam.projections[static_cast<size_t>(i)]);
      pos.values.push_back(fam.values[static_cast<size_t>(i)]);
    } else {
      neg.projections.push_back(fam.projections[static_cast<size_t>(i)]);
      neg.values.push_back(-fam.values[static_cast<size_t>(i)]);
    }
  }

  CornerResiduals out;
  out.degenerate_split = pos.projections.empty() || neg.projections.empty();

  const AlgebraElement zero = AlgebraElement::zeros(x.algebra());
  const AlgebraElement psum = pos.projections.empty() ? zero : pos.sum();
  const AlgebraElement qsum = neg.projections.empty() ? zero : neg.sum();

  const AlgebraElement c_abs = commutator(abs_op(x), y) * z;
  const AlgebraElement c_x = commutator(x, y) * z;

  out.residuals[0] = operator_norm(psum * c_abs * psum - psum * c_x * psum);
  out.residuals[1] = operator_norm(qsum * c_abs * qsum + qsum * c_x * qsum);

  AlgebraElement sum_minus = zero;
  AlgebraElement sum_plus = zero;
  for (size_t i = 0; i < pos.projections.size(); ++i) {
    const AlgebraElement left = pos.projections[i] * y;
    for (size_t j = 0; j < neg.projections.size(); ++j) {
      const AlgebraElement corner = left * neg.projections[j] * z;
      sum_minus += (pos.values[i] - neg.values[j]) * corner;
      sum_plus += (pos.values[i] + neg.values[j]) * corner;
    }
  }
  out.residuals[2] = operator_norm(psum * c_abs * qsum - sum_minus);
  out.residuals[3] = operator_norm(psum * c_x * qsum - sum_plus);
  return out;
}

Dilation dilate_2x2(const AlgebraElement& x, const AlgebraElement& y, const AlgebraElement& z) {
  if (!x.same_algebra(y) || !x.same_algebra(z))
    throw Error(Errc::AlgebraMismatch, "dilation operands live in different algebras");
  if (!x.hermitian() || !y.hermitian())
    throw Error(Errc::NonHermitian, "dilate_2x2 needs Hermitian x, y");
  require_commuting(x, z);

  std::vector<Block> doubled_blocks;
  for (const Block& b : x.algebra()->blocks()) doubled_blocks.push_back({2 * b.size, b.weight});
  const AlgebraPtr doubled = make_algebra(std::move(doubled_blocks));

  std::vector<Matrix> bx, by, bz;
  for (int k = 0; k < x.num_blocks(); ++k) {
    const int n = x.algebra()->block(k).size;
    Matrix mx = Matrix::Zero(2 * n, 2 * n);
    mx.topLeftCorner(n, n) = x.block(k);
    mx.bottomRightCorner(n, n) = y.block(k);
    Matrix my = Matrix::Zero(2 * n, 2 * n);
    my.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
    Matrix mz = Matrix::Zero(2 * n, 2 * n);
    mz.topLeftCorner(n, n) = z.block(k);
    bx.push_back(std::move(mx));
    by.push_back(std::move(my));
    bz.push_back(std::move(mz));
  }

  Dilation dil{doubled, AlgebraElement(doubled, std::move(bx)), AlgebraElement(doubled, std::move(by)),
               AlgebraElement(doubled, std::move(bz)), 0.0};
  dil.X.certify_hermitian();

  const AlgebraElement lhs = commutator(abs_op(dil.X), dil.Y) * dil.Z;
  const AlgebraElement expected = (abs_op(y) - abs_op(x)) * z;
  std::vector<Matrix> corner_blocks;
  for (int k = 0; k < x.num_blocks(); ++k) {
    const int n = x.algebra()->block(k).size;
    corner_blocks.push_back(lhs.block(k).bottomLeftCorner(n, n));
  }
  const AlgebraElement corner(x.algebra(), std::move(corner_blocks));
  dil.corner_residual = operator_norm(corner - expected);
  return dil;
}

InequalityReport verify_prop22(const AlgebraElement& x, const AlgebraElement& y,
                               const AlgebraElement& z, double p, double Kp) {
  if (!(p > 1.0) || std::isinf(p)) throw Error(Errc::BadExponent, "prop 2.2 needs 1 < p < inf");
  if (!x.hermitian() || !y.hermitian())
    throw Error(Errc::NonHermitian, "prop 2.2 needs Hermitian x, y");
  require_commuting(x, z);
  const double constant = kcal_p(Kp);
  const double lhs = schatten_norm((abs_op(x) - abs_op(y)) * z, p);
  const double rhs = constant * schatten_norm((x - y) * z, p);
  return make_report("prop22", p, lhs, rhs, constant, 1e-8, digest_of({&x, &y, &z}, p));
}

}  // namespace specflow
