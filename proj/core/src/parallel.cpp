// Copyright 2026 The RLSP Authors
// SPDX-License-Identifier: Apache-2.0

#include "rlsp/parallel.hpp"

#ifdef RLSP_HAVE_OPENMP
#include <omp.h>
#endif
#ifdef __GLIBC__
#include <malloc.h>
#endif

namespace rlsp {

namespace {
int g_default_threads = 0;
}

void set_num_threads(int threads) {
#ifdef RLSP_HAVE_OPENMP
  if (g_default_threads == 0) g_default_threads = omp_get_max_threads();
  omp_set_num_threads(threads >= 1 ? threads : g_default_threads);
#else
  (void)threads;
  (void)g_default_threads;
#endif
}

int num_threads() {
#ifdef RLSP_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void retain_heap_memory() {
#ifdef __GLIBC__
  constexpr int kThreshold = 256 << 20;
  mallopt(M_MMAP_THRESHOLD, kThreshold);
  mallopt(M_TRIM_THRESHOLD, kThreshold);
#endif
}

}  // namespace rlsp
