#pragma once

#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ngfix {

/// Resolves a requested thread count: positive values pass through,
/// 0 means "auto" (NGFIX_THREADS env var, then the OpenMP default).
/// Always 1 when built without OpenMP.
inline int resolve_threads(int requested) {
#ifdef _OPENMP
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NGFIX_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  return omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

}  // namespace ngfix
