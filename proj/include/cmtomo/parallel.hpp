#pragma once

// Thin wrapper so the kernels compile with or without OpenMP.

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cmtomo {

/// Selects the OpenMP kernel or the serial reference kernel. Both produce
/// bit-identical results; the serial path is kept for testing.
enum class Exec { serial, parallel };

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

}  // namespace cmtomo
