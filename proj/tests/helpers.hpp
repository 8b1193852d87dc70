#pragma once

#include "specflow/gen.hpp"
#include "specflow/norms.hpp"

namespace specflow::test {

inline AlgebraPtr unit_algebra(int dim) { return make_algebra({{dim, 1.0}}); }

inline AlgebraPtr mixed_algebra() {
  // binary-exact weights keep step breakpoints exact
  return make_algebra({{2, 0.5}, {1, 1.0}, {1, 2.5}});
}

inline AlgebraPtr mixed_algebra8() { return make_algebra({{4, 0.5}, {3, 1.0}, {1, 2.5}}); }

inline AlgebraElement diag_element(const AlgebraPtr& algebra, const std::vector<double>& values) {
  std::vector<Matrix> blocks;
  size_t idx = 0;
  for (int k = 0; k < algebra->num_blocks(); ++k) {
    const int n = algebra->block(k).size;
    Matrix m = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = values.at(idx++);
    blocks.push_back(std::move(m));
  }
  AlgebraElement out(algebra, std::move(blocks));
  out.certify_hermitian();
  return out;
}

}  // namespace specflow::test
