#include "specflow/algebra.hpp"

#include <cmath>
#include <iostream>
#include <utility>

namespace specflow {

namespace {

void default_warning(const std::string& msg) { std::cerr << "[specflow] warning: " << msg << "\n"; }

void (*g_warning_handler)(const std::string&) = &default_warning;

}  // namespace

void set_warning_handler(void (*handler)(const std::string&)) {
  g_warning_handler = handler != nullptr ? handler : &default_warning;
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonHermitian: return "NonHermitian";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::DomainError: return "DomainError";
    case Errc::KernelTooClose: return "KernelTooClose";
    case Errc::AlgebraMismatch: return "AlgebraMismatch";
    case Errc::BadExponent: return "BadExponent";
    case Errc::DegeneratePair: return "DegeneratePair";
    case Errc::NotCommuting: return "NotCommuting";
    case Errc::SupportDeficient: return "SupportDeficient";
    case Errc::OrderViolation: return "OrderViolation";
    case Errc::NotPsd: return "NotPsd";
    case Errc::NotSymmetry: return "NotSymmetry";
    case Errc::EndpointKernel: return "EndpointKernel";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::StepTooSmall: return "StepTooSmall";
    case Errc::SuiteUnknown: return "SuiteUnknown";
    case Errc::IoError: return "IoError";
    case Errc::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

BlockAlgebra::BlockAlgebra(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error(Errc::BadConfig, "algebra needs at least one block");
  for (const Block& b : blocks_) {
    if (b.size < 1) throw Error(Errc::BadConfig, "block size must be >= 1");
    if (!(b.weight > 0.0)) throw Error(Errc::BadConfig, "block weight must be > 0");
    total_trace_ += b.size * b.weight;
    total_dim_ += b.size;
  }
}

bool BlockAlgebra::operator==(const BlockAlgebra& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (size_t k = 0; k < blocks_.size(); ++k) {
    if (blocks_[k].size != other.blocks_[k].size) return false;
    if (blocks_[k].weight != other.blocks_[k].weight) return false;
  }
  return true;
}

AlgebraPtr make_algebra(std::vector<Block> blocks) {
  return std::make_shared<const BlockAlgebra>(std::move(blocks));
}

AlgebraElement::AlgebraElement(AlgebraPtr algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (!algebra_) throw Error(Errc::BadConfig, "element needs an algebra");
  if (static_cast<int>(blocks_.size()) != algebra_->num_blocks())
    throw Error(Errc::AlgebraMismatch, "block count does not match algebra");
  for (int k = 0; k < algebra_->num_blocks(); ++k) {
    const int n = algebra_->block(k).size;
    if (blocks_[static_cast<size_t>(k)].rows() != n || blocks_[static_cast<size_t>(k)].cols() != n)
      throw Error(Errc::AlgebraMismatch, "block shape does not match algebra");
  }
}

AlgebraElement AlgebraElement::zeros(const AlgebraPtr& algebra) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(algebra->num_blocks()));
  for (int k = 0; k < algebra->num_blocks(); ++k)
    blocks.push_back(Matrix::Zero(algebra->block(k).size, algebra->block(k).size));
  AlgebraElement out(algebra, std::move(blocks));
  out.hermitian_ = true;
  return out;
}

AlgebraElement AlgebraElement::identity(const AlgebraPtr& algebra) {
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(algebra->num_blocks()));
  for (int k = 0; k < algebra->num_blocks(); ++k)
    blocks.push_back(Matrix::Identity(algebra->block(k).size, algebra->block(k).size));
  AlgebraElement out(algebra, std::move(blocks));
  out.hermitian_ = true;
  return out;
}

AlgebraElement AlgebraElement::scalar(const AlgebraPtr& algebra, Complex value) {
  AlgebraElement out = identity(algebra);
  out *= value;
  return out;
}

AlgebraElement& AlgebraElement::certify_hermitian() {
  const double scale = max_abs();
  double defect = 0.0;
  for (const Matrix& b : blocks_) {
    const double d = (b - b.adjoint()).cwiseAbs().maxCoeff();
    defect = std::max(defect, d);
  }
  if (defect > 1e-12 * std::max(scale, 1e-300))
    throw Error(Errc::NonHermitian, "hermitian certification failed: defect " + std::to_string(defect));
  if (scale > 0.0 && defect > 1e-14 * scale)
    g_warning_handler("symmetrizing element with relative defect " + std::to_string(defect / scale));
  for (Matrix& b : blocks_) b = 0.5 * (b + b.adjoint().eval());
  hermitian_ = true;
  return *this;
}

AlgebraElement AlgebraElement::hermitian_part() const {
  AlgebraElement out = *this;
  for (Matrix& b : out.blocks_) b = 0.5 * (b + b.adjoint().eval());
  out.hermitian_ = true;
  return out;
}

AlgebraElement AlgebraElement::adjoint() const {
  if (hermitian_) return *this;  // symmetrized on certification, so exact
  AlgebraElement out = *this;
  for (Matrix& b : out.blocks_) b = b.adjoint().eval();
  return out;
}

double AlgebraElement::max_abs() const {
  double m = 0.0;
  for (const Matrix& b : blocks_)
    if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

double AlgebraElement::frobenius_norm() const {
  double s = 0.0;
  for (const Matrix& b : blocks_) s += b.squaredNorm();
  return std::sqrt(s);
}

bool AlgebraElement::same_algebra(const AlgebraElement& other) const {
  return algebra_ == other.algebra_ || *algebra_ == *other.algebra_;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& rhs) {
  if (!same_algebra(rhs)) throw Error(Errc::AlgebraMismatch, "operands live in different algebras");
  for (size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += rhs.blocks_[k];
  hermitian_ = hermitian_ && rhs.hermitian_;
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& rhs) {
  if (!same_algebra(rhs)) throw Error(Errc::AlgebraMismatch, "operands live in different algebras");
  for (size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= rhs.blocks_[k];
  hermitian_ = hermitian_ && rhs.hermitian_;
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex scalar) {
  for (Matrix& b : blocks_) b *= scalar;
  hermitian_ = hermitian_ && scalar.imag() == 0.0;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& lhs, const AlgebraElement& rhs) {
  if (!lhs.same_algebra(rhs)) throw Error(Errc::AlgebraMismatch, "operands live in different algebras");
  std::vector<Matrix> blocks;
  blocks.reserve(lhs.blocks_.size());
  for (size_t k = 0; k < lhs.blocks_.size(); ++k) blocks.push_back(lhs.blocks_[k] * rhs.blocks_[k]);
  return AlgebraElement(lhs.algebra_, std::move(blocks));
}

AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b) { return a * b - b * a; }

AlgebraElement anticommutator(const AlgebraElement& a, const AlgebraElement& b) { return a * b + b * a; }

}  // namespace specflow
