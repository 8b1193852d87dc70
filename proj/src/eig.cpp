#include "specflow/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace specflow {

namespace detail {

void jacobi_hermitian(const Matrix& input, Eigen::VectorXd& evals, Matrix& vecs, int block_index) {
  const int n = static_cast<int>(input.rows());
  Matrix a = input;
  vecs = Matrix::Identity(n, n);
  evals.resize(n);
  if (n == 1) {
    evals(0) = a(0, 0).real();
    return;
  }

  const double frob0 = std::max(1.0, a.norm());
  const double off_threshold = 1e-13 * frob0;
  const int max_sweeps = 100;

  auto off_mass = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  bool converged = off_mass() <= off_threshold;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double b = std::abs(apq);
        if (b < 1e-300) continue;
        const Complex u = apq / b;  // phase of the pivot entry
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * b);
        const double t = tau >= 0.0 ? -1.0 / (tau + std::sqrt(tau * tau + 1.0))
                                    : 1.0 / (-tau + std::sqrt(tau * tau + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // a <- U* a U with U = [[c, -s u],[s conj(u), c]] on the (p,q) plane
        for (int k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp + s * std::conj(u) * akq;
          a(k, q) = -s * u * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk + s * u * aqk;
          a(q, k) = -s * std::conj(u) * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (int k = 0; k < n; ++k) {
          const Complex vkp = vecs(k, p);
          const Complex vkq = vecs(k, q);
          vecs(k, p) = c * vkp + s * std::conj(u) * vkq;
          vecs(k, q) = -s * u * vkp + c * vkq;
        }
      }
    }
    converged = off_mass() <= off_threshold;
  }
  if (!converged)
    throw Error(Errc::NoConvergence,
                "jacobi failed to converge on block " + std::to_string(block_index));

  for (int i = 0; i < n; ++i) evals(i) = a(i, i).real();

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return evals(i) < evals(j); });
  Eigen::VectorXd sorted(n);
  Matrix perm = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    sorted(i) = evals(order[static_cast<size_t>(i)]);
    perm.col(i) = vecs.col(order[static_cast<size_t>(i)]);
  }
  evals = sorted;
  vecs = perm;
}

}  // namespace detail

SpectralDecomposition eig_hermitian(const AlgebraElement& x, double cluster_tol) {
  if (!x.hermitian()) throw Error(Errc::NonHermitian, "eig_hermitian needs a certified Hermitian element");
  SpectralDecomposition dec;
  dec.algebra = x.algebra();
  dec.eigenvalues.resize(static_cast<size_t>(x.num_blocks()));
  dec.vectors.resize(static_cast<size_t>(x.num_blocks()));
  for (int k = 0; k < x.num_blocks(); ++k)
    detail::jacobi_hermitian(x.block(k), dec.eigenvalues[static_cast<size_t>(k)],
                             dec.vectors[static_cast<size_t>(k)], k);
  dec.cluster_tol = cluster_tol >= 0.0 ? cluster_tol : 1e-8 * (1.0 + dec.max_abs_eigenvalue());
  return dec;
}

AlgebraElement SpectralDecomposition::apply(const std::function<double(double)>& f) const {
  std::vector<Matrix> blocks;
  blocks.reserve(eigenvalues.size());
  for (size_t k = 0; k < eigenvalues.size(); ++k) {
    const int n = static_cast<int>(eigenvalues[k].size());
    Eigen::VectorXd fv(n);
    for (int i = 0; i < n; ++i) {
      const double v = f(eigenvalues[k](i));
      if (!std::isfinite(v))
        throw Error(Errc::DomainError,
                    "function undefined at eigenvalue " + std::to_string(eigenvalues[k](i)));
      fv(i) = v;
    }
    blocks.push_back(vectors[k] * fv.asDiagonal() * vectors[k].adjoint());
  }
  AlgebraElement out(algebra, std::move(blocks));
  out.certify_hermitian();
  return out;
}

double SpectralDecomposition::min_abs_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& ev : eigenvalues)
    for (int i = 0; i < ev.size(); ++i) m = std::min(m, std::abs(ev(i)));
  return m;
}

double SpectralDecomposition::max_abs_eigenvalue() const {
  double m = 0.0;
  for (const auto& ev : eigenvalues)
    for (int i = 0; i < ev.size(); ++i) m = std::max(m, std::abs(ev(i)));
  return m;
}

double SpectralDecomposition::min_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& ev : eigenvalues)
    if (ev.size() > 0) m = std::min(m, ev(0));
  return m;
}

double SpectralDecomposition::max_eigenvalue() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& ev : eigenvalues)
    if (ev.size() > 0) m = std::max(m, ev(ev.size() - 1));
  return m;
}

AlgebraElement func_calc(const AlgebraElement& x, const std::function<double(double)>& f) {
  return eig_hermitian(x).apply(f);
}

AlgebraElement abs_op(const AlgebraElement& x) {
  if (x.hermitian()) return func_calc(x, [](double t) { return std::abs(t); });
  // General element: |x| = (x*x)^{1/2} per block.
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(x.num_blocks()));
  for (int k = 0; k < x.num_blocks(); ++k) {
    const Matrix gram = x.block(k).adjoint() * x.block(k);
    Eigen::VectorXd w;
    Matrix v;
    detail::jacobi_hermitian(gram, w, v, k);
    Eigen::VectorXd s(w.size());
    for (int i = 0; i < w.size(); ++i) s(i) = std::sqrt(std::max(0.0, w(i)));
    blocks.push_back(v * s.asDiagonal() * v.adjoint());
  }
  AlgebraElement out(x.algebra(), std::move(blocks));
  out.certify_hermitian();
  return out;
}

AlgebraElement phi_map(const AlgebraElement& x) {
  return func_calc(x, [](double t) { return t / std::sqrt(1.0 + t * t); });
}

AlgebraElement resolvent_half(const AlgebraElement& x) {
  return func_calc(x, [](double t) { return 1.0 / std::sqrt(1.0 + t * t); });
}

AlgebraElement sgn_op(const AlgebraElement& x, double zero_tol) {
  const SpectralDecomposition dec = eig_hermitian(x);
  if (dec.min_abs_eigenvalue() <= zero_tol)
    throw Error(Errc::KernelTooClose, "sgn undefined: eigenvalue within " + std::to_string(zero_tol) +
                                          " of zero");
  return dec.apply([](double t) { return t > 0.0 ? 1.0 : -1.0; });
}

}  // namespace specflow
