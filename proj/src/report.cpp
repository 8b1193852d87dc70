#include "specflow/report.hpp"

#include <cmath>
#include <cstring>

namespace specflow {

uint64_t hash_bytes(const void* data, size_t len, uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

uint64_t hash_double(double v, uint64_t h) {
  uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof(bits));
  return hash_bytes(&bits, sizeof(bits), h);
}

}  // namespace

uint64_t hash_element(const AlgebraElement& x, uint64_t h) {
  for (int k = 0; k < x.num_blocks(); ++k) {
    const int n = x.algebra()->block(k).size;
    h = hash_bytes(&n, sizeof(n), h);
    h = hash_double(x.algebra()->block(k).weight, h);
    const Matrix& b = x.block(k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        h = hash_double(b(i, j).real(), h);
        h = hash_double(b(i, j).imag(), h);
      }
  }
  return h;
}

std::string digest_of(std::initializer_list<const AlgebraElement*> elements, double p) {
  uint64_t h = 0xcbf29ce484222325ULL;
  h = hash_double(p, h);
  for (const AlgebraElement* e : elements) h = hash_element(*e, h);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

InequalityReport make_report(std::string name, double p, double lhs, double rhs,
                             double constant_used, double abs_tol, std::string digest) {
  InequalityReport r;
  r.name = std::move(name);
  r.p = p;
  r.lhs = lhs;
  r.rhs = rhs;
  r.constant_used = constant_used;
  const double denom = constant_used > 0.0 ? rhs / constant_used : rhs;
  r.ratio = lhs / std::max(denom, 1e-30);
  r.pass = lhs <= rhs + abs_tol;
  r.abs_tol = abs_tol;
  r.instance_digest = std::move(digest);
  return r;
}

}  // namespace specflow
