#pragma once

#include <initializer_list>
#include <string>

#include "specflow/algebra.hpp"

namespace specflow {

/// One verified inequality or identity: LHS vs RHS with the constant used,
/// the constant-free ratio, and a digest of the inputs so the instance can
/// be replayed.
struct InequalityReport {
  std::string name;
  double p = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant_used = 0.0;
  double ratio = 0.0;  // lhs / max(rhs without its constant, tiny)
  bool pass = false;
  double abs_tol = 0.0;
  std::string instance_digest;
};

InequalityReport make_report(std::string name, double p, double lhs, double rhs,
                             double constant_used, double abs_tol, std::string digest);

/// FNV-1a over the canonical bytes of the inputs (block shapes, weights and
/// entry bit patterns), hex-encoded.  Stable across runs for equal inputs.
std::string digest_of(std::initializer_list<const AlgebraElement*> elements, double p = 0.0);

uint64_t hash_bytes(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ULL);
uint64_t hash_element(const AlgebraElement& x, uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace specflow
