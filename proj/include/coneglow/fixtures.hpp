#pragma once

#include "coneglow/conemaps.hpp"

namespace coneglow::fixtures {

// Coefficient tables (rows a_i, b_i, c_i, d_i) of the two Schoen maps in the
// four-dimensional benchmark.
inline Mat schoen_table_f() {
  Mat t(4, 4);
  t << 1, 2, 3, 4,  //
      2, 1, 1, 1,   //
      3, 1, 3, 5,   //
      4, 3, 1, 2;
  return t;
}

inline Mat schoen_table_g() {
  Mat t(4, 4);
  t << 2, 5, 7, 2,  //
      3, 3, 1, 1,   //
      4, 4, 13, 1,  //
      1, 2, 7, 8;
  return t;
}

// f o g.
inline MapSpec schoen_composite() {
  return MapSpec::compose({MapSpec::schoen(schoen_table_f()), MapSpec::schoen(schoen_table_g())});
}

}  // namespace coneglow::fixtures
