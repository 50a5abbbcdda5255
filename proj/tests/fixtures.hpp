#pragma once

#include <vector>

#include "boundkey/multipartite.hpp"

namespace boundkey::testing {

// The 9x9 unit-trace-norm block matrix for shield dimension 3 and its
// absolute value, entered digit by digit as independent references.
inline MultipartiteOperator x3_reference() {
  CMatrix m = CMatrix::Zero(9, 9);
  for (int i = 0; i < 9; ++i) m(i, i) = 1.0 / 11.0;
  for (int c : {0, 4, 8}) m(c, c) = -1.0 / 11.0;
  const int corners[3] = {0, 4, 8};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) m(corners[a], corners[b]) = 1.0 / 11.0;
  return MultipartiteOperator({3, 3}, m);
}

inline MultipartiteOperator abs_x3_reference() {
  CMatrix m = CMatrix::Zero(9, 9);
  for (int i = 0; i < 9; ++i) m(i, i) = 1.0 / 11.0;
  for (int c : {0, 4, 8}) m(c, c) = 5.0 / 33.0;
  const int corners[3] = {0, 4, 8};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (a != b) m(corners[a], corners[b]) = -1.0 / 33.0;
  return MultipartiteOperator({3, 3}, m);
}

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const MultipartiteOperator& a,
                           const MultipartiteOperator& b) {
  return max_abs_diff(a.matrix(), b.matrix());
}

}  // namespace boundkey::testing
