#include "specflow/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace specflow {

namespace {

// Singular values of one block, descending.  Hermitian blocks use |eigenvalue|.
Eigen::VectorXd block_singular_values(const Matrix& b, bool hermitian, int block_index) {
  Eigen::VectorXd w;
  Matrix v;
  if (hermitian) {
    detail::jacobi_hermitian(b, w, v, block_index);
    for (int i = 0; i < w.size(); ++i) w(i) = std::abs(w(i));
  } else {
    detail::jacobi_hermitian(b.adjoint() * b, w, v, block_index);
    for (int i = 0; i < w.size(); ++i) w(i) = std::sqrt(std::max(0.0, w(i)));
  }
  std::sort(w.data(), w.data() + w.size(), std::greater<double>());
  return w;
}

}  // namespace

Complex trace(const AlgebraElement& x) {
  Complex t = 0.0;
  for (int k = 0; k < x.num_blocks(); ++k) t += x.algebra()->block(k).weight * x.block(k).trace();
  return t;
}

Complex trace_product(const AlgebraElement& x, const AlgebraElement& y) {
  if (!x.same_algebra(y)) throw Error(Errc::AlgebraMismatch, "trace of a cross-algebra product");
  Complex t = 0.0;
  for (int k = 0; k < x.num_blocks(); ++k)
    t += x.algebra()->block(k).weight * (x.block(k) * y.block(k)).trace();
  return t;
}

double operator_norm(const AlgebraElement& x) {
  double m = 0.0;
  for (int k = 0; k < x.num_blocks(); ++k) {
    const Eigen::VectorXd s = block_singular_values(x.block(k), x.hermitian(), k);
    if (s.size() > 0) m = std::max(m, s(0));
  }
  return m;
}

double schatten_norm(const AlgebraElement& x, double p) {
  if (std::isinf(p) && p > 0.0) return operator_norm(x);
  if (!(p >= 1.0)) throw Error(Errc::BadExponent, "schatten norm needs p >= 1");
  double acc = 0.0;
  for (int k = 0; k < x.num_blocks(); ++k) {
    const double w = x.algebra()->block(k).weight;
    const Eigen::VectorXd s = block_singular_values(x.block(k), x.hermitian(), k);
    for (int i = 0; i < s.size(); ++i) acc += w * std::pow(s(i), p);
  }
  return std::pow(acc, 1.0 / p);
}

SingularValueFunction::SingularValueFunction(std::vector<std::pair<double, double>> steps)
    : steps_(std::move(steps)) {
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& [width, value] : steps_) {
    if (!(width > 0.0)) throw Error(Errc::BadConfig, "step widths must be positive");
    if (value < 0.0) throw Error(Errc::BadConfig, "step values must be nonnegative");
    if (value > prev) throw Error(Errc::BadConfig, "step values must be nonincreasing");
    prev = value;
    domain_end_ += width;
  }
}

SingularValueFunction SingularValueFunction::from_weighted_values(
    std::vector<std::pair<double, double>> samples) {
  std::sort(samples.begin(), samples.end(),
            [](const auto& a, const auto& b) { return a.second > b.second; });
  return SingularValueFunction(std::move(samples));
}

double SingularValueFunction::value_at(double s) const {
  if (s < 0.0) s = 0.0;
  double t = 0.0;
  for (const auto& [width, value] : steps_) {
    if (s < t + width) return value;
    t += width;
  }
  return 0.0;
}

double SingularValueFunction::integral_to(double t) const {
  if (t <= 0.0) return 0.0;
  double acc = 0.0;
  double pos = 0.0;
  for (const auto& [width, value] : steps_) {
    if (t >= pos + width) {
      acc += width * value;
    } else {
      acc += (t - pos) * value;
      return acc;
    }
    pos += width;
  }
  return acc;
}

double SingularValueFunction::integral_pow(double p) const {
  double acc = 0.0;
  for (const auto& [width, value] : steps_) acc += width * std::pow(value, p);
  return acc;
}

SingularValueFunction SingularValueFunction::scaled(double factor) const {
  if (factor < 0.0) throw Error(Errc::BadConfig, "scale factor must be nonnegative");
  std::vector<std::pair<double, double>> steps = steps_;
  for (auto& [width, value] : steps) value *= factor;
  return SingularValueFunction(std::move(steps));
}

SingularValueFunction SingularValueFunction::dilated(double factor) const {
  if (!(factor > 0.0)) throw Error(Errc::BadConfig, "dilation factor must be positive");
  std::vector<std::pair<double, double>> steps = steps_;
  for (auto& [width, value] : steps) width *= factor;
  return SingularValueFunction(std::move(steps));
}

std::vector<double> SingularValueFunction::breakpoints() const {
  std::vector<double> out;
  out.reserve(steps_.size());
  double pos = 0.0;
  for (const auto& [width, value] : steps_) {
    pos += width;
    out.push_back(pos);
  }
  return out;
}

SingularValueFunction mu(const AlgebraElement& x) {
  std::vector<std::pair<double, double>> samples;
  samples.reserve(static_cast<size_t>(x.algebra()->total_dim()));
  for (int k = 0; k < x.num_blocks(); ++k) {
    const double w = x.algebra()->block(k).weight;
    Eigen::VectorXd s;
    Matrix v;
    if (x.hermitian()) {
      detail::jacobi_hermitian(x.block(k), s, v, k);
      for (int i = 0; i < s.size(); ++i) samples.emplace_back(w, std::abs(s(i)));
    } else {
      detail::jacobi_hermitian(x.block(k).adjoint() * x.block(k), s, v, k);
      for (int i = 0; i < s.size(); ++i) samples.emplace_back(w, std::sqrt(std::max(0.0, s(i))));
    }
  }
  return SingularValueFunction::from_weighted_values(std::move(samples));
}

SubmajorizationResult submajorizes(const SingularValueFunction& y, const SingularValueFunction& x,
                                   double tol) {
  std::vector<double> grid = x.breakpoints();
  const std::vector<double> gy = y.breakpoints();
  grid.insert(grid.end(), gy.begin(), gy.end());
  grid.push_back(std::max(x.domain_end(), y.domain_end()));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  SubmajorizationResult res;
  res.margin = std::numeric_limits<double>::infinity();
  if (grid.empty() || (grid.size() == 1 && grid[0] == 0.0)) {
    res.margin = 0.0;  // both empty
    res.holds = true;
    return res;
  }
  for (double t : grid) {
    if (t <= 0.0) continue;
    res.margin = std::min(res.margin, y.integral_to(t) - x.integral_to(t));
  }
  if (!std::isfinite(res.margin)) res.margin = 0.0;
  res.holds = res.margin >= -tol;
  return res;
}

}  // namespace specflow
