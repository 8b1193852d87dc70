#include "specflow/paths.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace specflow {

namespace {

std::vector<double> linspace01(int points) {
  if (points < 2) points = 2;
  std::vector<double> g(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i)
    g[static_cast<size_t>(i)] = static_cast<double>(i) / static_cast<double>(points - 1);
  g.front() = 0.0;
  g.back() = 1.0;
  return g;
}

}  // namespace

OperatorPath OperatorPath::linear(AlgebraElement d0, AlgebraElement a, int grid_points) {
  if (!d0.hermitian() || !a.hermitian())
    throw Error(Errc::NonHermitian, "linear path needs Hermitian D0 and A");
  OperatorPath p(Kind::Linear, std::move(d0), std::move(a));
  p.grid_ = linspace01(grid_points);
  return p;
}

OperatorPath OperatorPath::conjugation(AlgebraElement d0, AlgebraElement h, int grid_points) {
  if (!d0.hermitian() || !h.hermitian())
    throw Error(Errc::NonHermitian, "conjugation path needs Hermitian D0 and H");
  OperatorPath p(Kind::Conjugation, std::move(d0), std::move(h));
  p.grid_ = linspace01(grid_points);
  const SpectralDecomposition dec = eig_hermitian(p.gen_);
  p.h_evals_ = dec.eigenvalues;
  p.h_vecs_ = dec.vectors;
  return p;
}

OperatorPath OperatorPath::sampled(std::vector<double> t_grid, std::vector<AlgebraElement> samples) {
  if (t_grid.size() < 2 || t_grid.size() != samples.size())
    throw Error(Errc::BadConfig, "sampled path needs matching t grid and samples");
  if (t_grid.front() != 0.0 || t_grid.back() != 1.0)
    throw Error(Errc::BadConfig, "sampled path must start at t=0 and end at t=1");
  for (size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1]))
      throw Error(Errc::BadConfig, "sampled path grid must be strictly increasing");
  for (auto& s : samples)
    if (!s.hermitian()) throw Error(Errc::NonHermitian, "sampled path entries must be Hermitian");

  OperatorPath p(Kind::Sampled, samples.front(), samples.front());
  p.grid_ = std::move(t_grid);
  p.samples_ = std::move(samples);

  // central differences on the native grid, one-sided at the ends
  const size_t n = p.samples_.size();
  p.node_tangents_.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const size_t lo = i == 0 ? 0 : i - 1;
    const size_t hi = i + 1 == n ? n - 1 : i + 1;
    AlgebraElement diff = p.samples_[hi] - p.samples_[lo];
    diff *= Complex(1.0 / (p.grid_[hi] - p.grid_[lo]), 0.0);
    p.node_tangents_.push_back(diff.hermitian_part());
  }
  return p;
}

AlgebraElement OperatorPath::at(double t) const {
  switch (kind_) {
    case Kind::Linear: {
      AlgebraElement out = d0_ + t * gen_;
      return out.hermitian_part();
    }
    case Kind::Conjugation: {
      std::vector<Matrix> blocks;
      blocks.reserve(static_cast<size_t>(d0_.num_blocks()));
      for (int k = 0; k < d0_.num_blocks(); ++k) {
        const Eigen::VectorXd& ev = h_evals_[static_cast<size_t>(k)];
        const Matrix& u = h_vecs_[static_cast<size_t>(k)];
        Eigen::VectorXcd phase(ev.size());
        for (int i = 0; i < ev.size(); ++i) phase(i) = std::exp(Complex(0.0, -t * ev(i)));
        const Matrix e = u * phase.asDiagonal() * u.adjoint();
        blocks.push_back(e * d0_.block(k) * e.adjoint());
      }
      AlgebraElement out(d0_.algebra(), std::move(blocks));
      return out.hermitian_part();
    }
    case Kind::Sampled: {
      const double tc = std::clamp(t, 0.0, 1.0);
      const auto it = std::upper_bound(grid_.begin(), grid_.end(), tc);
      size_t hi = static_cast<size_t>(std::distance(grid_.begin(), it));
      if (hi >= grid_.size()) hi = grid_.size() - 1;
      if (hi == 0) hi = 1;
      const size_t lo = hi - 1;
      const double w = (tc - grid_[lo]) / (grid_[hi] - grid_[lo]);
      AlgebraElement out = (1.0 - w) * samples_[lo] + w * samples_[hi];
      return out.hermitian_part();
    }
  }
  throw Error(Errc::BadConfig, "unreachable path kind");
}

AlgebraElement OperatorPath::tangent(double t) const {
  switch (kind_) {
    case Kind::Linear:
      return gen_;
    case Kind::Conjugation: {
      // d/dt e^{-itH} D0 e^{itH} = -i [H, D_t]
      const AlgebraElement dt = at(t);
      AlgebraElement out = Complex(0.0, -1.0) * commutator(gen_, dt);
      return out.hermitian_part();
    }
    case Kind::Sampled: {
      const double tc = std::clamp(t, 0.0, 1.0);
      const auto it = std::upper_bound(grid_.begin(), grid_.end(), tc);
      size_t hi = static_cast<size_t>(std::distance(grid_.begin(), it));
      if (hi >= grid_.size()) hi = grid_.size() - 1;
      if (hi == 0) hi = 1;
      const size_t lo = hi - 1;
      const double w = (tc - grid_[lo]) / (grid_[hi] - grid_[lo]);
      AlgebraElement out = (1.0 - w) * node_tangents_[lo] + w * node_tangents_[hi];
      return out.hermitian_part();
    }
  }
  throw Error(Errc::BadConfig, "unreachable path kind");
}

OperatorPath OperatorPath::reversed() const {
  switch (kind_) {
    case Kind::Linear:
      return linear((d0_ + gen_).hermitian_part(), -gen_, static_cast<int>(grid_.size()));
    case Kind::Conjugation:
      return conjugation(at(1.0), -gen_, static_cast<int>(grid_.size()));
    case Kind::Sampled: {
      std::vector<double> t(grid_.size());
      std::vector<AlgebraElement> s;
      s.reserve(samples_.size());
      for (size_t i = 0; i < grid_.size(); ++i) {
        t[i] = 1.0 - grid_[grid_.size() - 1 - i];
        s.push_back(samples_[samples_.size() - 1 - i]);
      }
      t.front() = 0.0;
      t.back() = 1.0;
      return sampled(std::move(t), std::move(s));
    }
  }
  throw Error(Errc::BadConfig, "unreachable path kind");
}

QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            const QuadratureSpec& spec) {
  struct Panel {
    double a, b, fa, fm, fb, s, tol;
  };
  auto simpson = [](double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  };

  QuadResult res;
  const double fa = f(a);
  const double fm = f(0.5 * (a + b));
  const double fb = f(b);
  std::deque<Panel> work{{a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), spec.tol}};
  int evals_panels = 1;

  while (!work.empty()) {
    const Panel panel = work.front();
    work.pop_front();
    const double m = 0.5 * (panel.a + panel.b);
    const double fl = f(0.5 * (panel.a + m));
    const double fr = f(0.5 * (m + panel.b));
    const double s1 = simpson(panel.a, m, panel.fa, fl, panel.fm);
    const double s2 = simpson(m, panel.b, panel.fm, fr, panel.fb);
    const double delta = s1 + s2 - panel.s;
    if (std::abs(delta) <= 15.0 * panel.tol) {
      res.value += s1 + s2 + delta / 15.0;
      res.error_estimate += std::abs(delta) / 15.0;
      res.panels += 2;
    } else {
      evals_panels += 2;
      if (evals_panels > spec.max_panels) {
        res.converged = false;
        return res;
      }
      work.push_back({panel.a, m, panel.fa, fl, panel.fm, s1, 0.5 * panel.tol});
      work.push_back({m, panel.b, panel.fm, fr, panel.fb, s2, 0.5 * panel.tol});
    }
  }
  res.converged = true;
  return res;
}

double ctilde_constant(double m) {
  if (!(m > 0.5)) throw Error(Errc::BadExponent, "C~ needs m > 1/2");
  return std::exp(0.5 * std::log(M_PI) + std::lgamma(m - 0.5) - std::lgamma(m));
}

double cweight_constant(double a) {
  if (!(a > -1.0)) throw Error(Errc::BadExponent, "C needs exponent > -1");
  return std::exp(0.5 * std::log(M_PI) + std::lgamma(a + 1.0) - std::lgamma(a + 1.5));
}

namespace {

double tau_negative(const AlgebraElement& x) {
  const SpectralDecomposition dec = eig_hermitian(x);
  double tau = 0.0;
  for (size_t k = 0; k < dec.eigenvalues.size(); ++k) {
    const double w = x.algebra()->block(static_cast<int>(k)).weight;
    for (int i = 0; i < dec.eigenvalues[k].size(); ++i)
      if (dec.eigenvalues[k](i) < 0.0) tau += w;
  }
  return tau;
}

double unbounded_integrand(const OperatorPath& path, double t, double m) {
  const AlgebraElement dt = path.at(t);
  const AlgebraElement resolvent_pow =
      func_calc(dt, [m](double u) { return std::pow(1.0 + u * u, -m); });
  return trace_product(path.tangent(t), resolvent_pow).real();
}

// Exact derivative of phi(D_t) through divided differences of phi on the
// spectrum, then traced against (1 - phi^2)^{(q-1)/2}.
double bounded_integrand(const OperatorPath& path, double t, double q) {
  const AlgebraElement dt = path.at(t);
  const AlgebraElement dot = path.tangent(t);
  const SpectralDecomposition dec = eig_hermitian(dt);
  const auto phi = [](double u) { return u / std::sqrt(1.0 + u * u); };
  const auto dphi = [](double u) { return std::pow(1.0 + u * u, -1.5); };
  const double half = 0.5 * (q - 1.0);

  double acc = 0.0;
  for (int k = 0; k < dt.num_blocks(); ++k) {
    const Eigen::VectorXd& ev = dec.eigenvalues[static_cast<size_t>(k)];
    const Matrix& u = dec.vectors[static_cast<size_t>(k)];
    const Matrix w = u.adjoint() * dot.block(k) * u;
    const int n = static_cast<int>(ev.size());
    Matrix fdot(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double gap = ev(i) - ev(j);
        const double dd = std::abs(gap) > 1e-9 ? (phi(ev(i)) - phi(ev(j))) / gap
                                               : dphi(0.5 * (ev(i) + ev(j)));
        fdot(i, j) = dd * w(i, j);
      }
    }
    Eigen::VectorXd gdiag(n);
    for (int i = 0; i < n; ++i) {
      const double p2 = phi(ev(i)) * phi(ev(i));
      gdiag(i) = std::pow(std::max(0.0, 1.0 - p2), half);
    }
    // trace(Fdot * G) in the eigenbasis of D_t
    const Matrix g = gdiag.asDiagonal();
    acc += dt.algebra()->block(k).weight * (fdot * g).trace().real();
  }
  return acc;
}

}  // namespace

double crossing_sf(const OperatorPath& path, double zero_tol, std::vector<std::string>* warnings) {
  const AlgebraElement start = path.at(0.0);
  const AlgebraElement end = path.at(1.0);
  const SpectralDecomposition dec0 = eig_hermitian(start);
  const SpectralDecomposition dec1 = eig_hermitian(end);
  if (dec0.min_abs_eigenvalue() <= zero_tol || dec1.min_abs_eigenvalue() <= zero_tol)
    throw Error(Errc::EndpointKernel, "endpoint spectrum within zero_tol of 0");

  if (warnings != nullptr) {
    const auto& grid = path.grid();
    for (size_t i = 1; i + 1 < grid.size(); ++i) {
      const double t = grid[i];
      const SpectralDecomposition dec = eig_hermitian(path.at(t));
      if (dec.min_abs_eigenvalue() > zero_tol) continue;
      const double spacing = std::max(grid[i] - grid[i - 1], grid[i + 1] - grid[i]);
      const double speed = operator_norm(path.tangent(t));
      if (spacing > zero_tol / std::max(speed, 1e-300))
        warnings->push_back("eigenvalue near 0 at t=" + std::to_string(t) +
                            " with grid spacing too coarse to resolve the crossing");
    }
  }
  return tau_negative(start) - tau_negative(end);
}

namespace {

SpectralFlowResult make_sf_result(const OperatorPath& path, const QuadResult& quad,
                                  double normalizer, std::string method, double exponent,
                                  const QuadratureSpec& spec) {
  if (!quad.converged)
    throw Error(Errc::QuadratureFailure, "quadrature failed to reach tolerance within panel budget");
  SpectralFlowResult res;
  res.numerator = quad.value;
  res.integral_sf = quad.value / normalizer;
  res.method = std::move(method);
  res.exponent = exponent;
  res.quad_tol = spec.tol;
  res.panels = quad.panels;
  res.quad_error_estimate = quad.error_estimate;

  const SpectralDecomposition dec0 = eig_hermitian(path.at(0.0));
  const SpectralDecomposition dec1 = eig_hermitian(path.at(1.0));
  res.endpoint_min_eigs = {dec0.min_abs_eigenvalue(), dec1.min_abs_eigenvalue()};
  res.crossing_sf = tau_negative(path.at(0.0)) - tau_negative(path.at(1.0));
  return res;
}

}  // namespace

SpectralFlowResult integral_sf_unbounded(const OperatorPath& path, double m,
                                         const QuadratureSpec& quad) {
  if (!(m > 1.0)) throw Error(Errc::BadExponent, "unbounded formula needs m > 1");
  const QuadResult q =
      adaptive_simpson([&](double t) { return unbounded_integrand(path, t, m); }, 0.0, 1.0, quad);
  return make_sf_result(path, q, ctilde_constant(m), "unbounded", m, quad);
}

SpectralFlowResult integral_sf_bounded(const OperatorPath& path, double q,
                                       const QuadratureSpec& quad) {
  if (!(q > 1.0)) throw Error(Errc::BadExponent, "bounded formula needs q > 1");
  const QuadResult qr =
      adaptive_simpson([&](double t) { return bounded_integrand(path, t, q); }, 0.0, 1.0, quad);
  SpectralFlowResult res =
      make_sf_result(path, qr, cweight_constant(0.5 * (q - 1.0)), "bounded", q, quad);
  const SpectralFlowResult unb = integral_sf_unbounded(path, 0.5 * q + 1.0, quad);
  res.consistency_delta = std::abs(res.integral_sf - unb.integral_sf);
  return res;
}

double verify_diff_formula(const OperatorPath& path, double n, double t, double h) {
  if (h < 1e-8) throw Error(Errc::StepTooSmall, "finite-difference step below 1e-8");
  if (t - h < 0.0 || t + h > 1.0)
    throw Error(Errc::BadConfig, "t +- h must stay inside [0, 1]");

  const AlgebraElement f_plus = phi_map(path.at(t + h));
  const AlgebraElement f_minus = phi_map(path.at(t - h));
  AlgebraElement fdot = f_plus - f_minus;
  fdot *= Complex(1.0 / (2.0 * h), 0.0);

  const AlgebraElement dt = path.at(t);
  const AlgebraElement weight = func_calc(dt, [n](double u) {
    const double p2 = 1.0 - u * u / (1.0 + u * u);
    return std::pow(std::max(0.0, p2), n);
  });
  const double lhs = trace_product(fdot, weight).real();
  const double rhs =
      trace_product(path.tangent(t),
                    func_calc(dt, [n](double u) { return std::pow(1.0 + u * u, -n - 1.5); }))
          .real();
  return std::abs(lhs - rhs);
}

double eta_potential(const AlgebraElement& d, double m) {
  if (!(m > 0.5)) throw Error(Errc::BadExponent, "eta potential needs m > 1/2");
  const auto g = [m](double u) -> double {
    if (m == 1.0) return std::atan(u);
    if (m == 1.5) return u / std::sqrt(1.0 + u * u);
    if (m == 2.0) return u / (2.0 * (1.0 + u * u)) + 0.5 * std::atan(u);
    const double sign = u < 0.0 ? -1.0 : 1.0;
    const double hi = std::abs(u);
    if (hi == 0.0) return 0.0;
    QuadratureSpec spec;
    spec.tol = 1e-12;
    spec.max_panels = 1 << 20;
    const QuadResult q = adaptive_simpson(
        [m](double s) { return std::pow(1.0 + s * s, -m); }, 0.0, hi, spec);
    if (!q.converged) throw Error(Errc::QuadratureFailure, "eta potential quadrature failed");
    return sign * q.value;
  };
  return trace(func_calc(d, g)).real();
}

double alpha_form(const AlgebraElement& d, const AlgebraElement& a, double m) {
  if (!(m > 0.5)) throw Error(Errc::BadExponent, "alpha form needs m > 1/2");
  const AlgebraElement weight = func_calc(d, [m](double u) { return std::pow(1.0 + u * u, -m); });
  return trace_product(a, weight).real() / ctilde_constant(m);
}

double theta_form(const AlgebraElement& f0, const AlgebraElement& x, double q) {
  if (!(q > 1.0)) throw Error(Errc::BadExponent, "theta form needs q > 1");
  const double half = 0.5 * (q - 1.0);
  const AlgebraElement weight = func_calc(f0, [half](double u) {
    return std::pow(std::max(0.0, 1.0 - u * u), half);
  });
  return trace_product(x, weight).real() / cweight_constant(half);
}

}  // namespace specflow
