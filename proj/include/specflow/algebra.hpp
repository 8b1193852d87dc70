#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace specflow {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

enum class Errc {
  NonHermitian,
  NoConvergence,
  DomainError,
  KernelTooClose,
  AlgebraMismatch,
  BadExponent,
  DegeneratePair,
  NotCommuting,
  SupportDeficient,
  OrderViolation,
  NotPsd,
  NotSymmetry,
  EndpointKernel,
  QuadratureFailure,
  StepTooSmall,
  SuiteUnknown,
  IoError,
  BadConfig,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

const char* errc_name(Errc c);

/// One matrix block of a traced algebra: an n x n summand with trace weight.
struct Block {
  int size = 0;
  double weight = 1.0;
};

/// Finite direct sum of matrix blocks with a weighted trace
/// tau(x) = sum_k weight_k * Tr(x_k).  This is the ambient (M, tau): the
/// trace is exactly tracial and faithful, and non-integer weights give it
/// genuinely non-factor behaviour (fractional projection traces).
class BlockAlgebra {
 public:
  explicit BlockAlgebra(std::vector<Block> blocks);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Block& block(int k) const { return blocks_[static_cast<size_t>(k)]; }
  const std::vector<Block>& blocks() const { return blocks_; }

  /// tau(1)
  double total_trace() const { return total_trace_; }
  /// Dimension of the underlying Hilbert space (sum of block sizes).
  int total_dim() const { return total_dim_; }

  bool operator==(const BlockAlgebra& other) const;

 private:
  std::vector<Block> blocks_;
  double total_trace_ = 0.0;
  int total_dim_ = 0;
};

using AlgebraPtr = std::shared_ptr<const BlockAlgebra>;

AlgebraPtr make_algebra(std::vector<Block> blocks);

/// A block-structured element of a BlockAlgebra.  Values are immutable
/// after construction; all operations return new elements, so concurrent
/// use needs no synchronization.
///
/// The hermitian flag is a certificate: it is set only after checking
/// max-entry |x - x*| <= 1e-12 * max-entry |x| and symmetrizing.
class AlgebraElement {
 public:
  AlgebraElement(AlgebraPtr algebra, std::vector<Matrix> blocks);

  static AlgebraElement zeros(const AlgebraPtr& algebra);
  static AlgebraElement identity(const AlgebraPtr& algebra);
  /// Scalar multiple of the identity.
  static AlgebraElement scalar(const AlgebraPtr& algebra, Complex value);

  const AlgebraPtr& algebra() const { return algebra_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Matrix& block(int k) const { return blocks_[static_cast<size_t>(k)]; }
  const std::vector<Matrix>& blocks() const { return blocks_; }

  bool hermitian() const { return hermitian_; }

  /// Checks the Hermitian certificate, symmetrizes via (x + x*)/2 and sets
  /// the flag.  Throws NonHermitian when the defect exceeds the tolerance;
  /// logs a warning when it exceeds 1e-14 relative.
  AlgebraElement& certify_hermitian();

  /// Same as certify_hermitian but on a copy.
  AlgebraElement hermitian_part() const;

  AlgebraElement adjoint() const;

  /// Largest entry magnitude over all blocks.
  double max_abs() const;
  double frobenius_norm() const;

  bool same_algebra(const AlgebraElement& other) const;

  AlgebraElement& operator+=(const AlgebraElement& rhs);
  AlgebraElement& operator-=(const AlgebraElement& rhs);
  AlgebraElement& operator*=(Complex scalar);

  friend AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend AlgebraElement operator*(AlgebraElement lhs, Complex scalar) {
    lhs *= scalar;
    return lhs;
  }
  friend AlgebraElement operator*(Complex scalar, AlgebraElement rhs) {
    rhs *= scalar;
    return rhs;
  }
  friend AlgebraElement operator*(AlgebraElement lhs, double scalar) {
    lhs *= Complex(scalar, 0.0);
    return lhs;
  }
  friend AlgebraElement operator*(double scalar, AlgebraElement rhs) {
    rhs *= Complex(scalar, 0.0);
    return rhs;
  }
  friend AlgebraElement operator-(AlgebraElement x) {
    x *= Complex(-1.0, 0.0);
    return x;
  }
  friend AlgebraElement operator*(const AlgebraElement& lhs, const AlgebraElement& rhs);

 private:
  AlgebraPtr algebra_;
  std::vector<Matrix> blocks_;
  bool hermitian_ = false;
};

AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement anticommutator(const AlgebraElement& a, const AlgebraElement& b);

/// Handler for certification warnings; defaults to stderr.  Replaceable for
/// quiet test runs.
void set_warning_handler(void (*handler)(const std::string&));

}  // namespace specflow
