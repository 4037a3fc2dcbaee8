// Copyright 2026 The triggerprobe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2 variant of the chi-squared kernel. Built with -mavx2 only (no FMA).

#include <cstddef>

#include "triggerprobe/kernels/chi2.h"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace triggerprobe::kernels {

#if defined(__AVX2__)

void Chi2TwoClassAvx2(std::span<const double> observed_a,
                      std::span<const double> observed_b, double share_a,
                      double share_b, std::span<double> out) {
  const std::size_t n = out.size();
  const double *pa = observed_a.data();
  const double *pb = observed_b.data();
  double *po = out.data();
  const __m256d sa = _mm256_set1_pd(share_a);
  const __m256d sb = _mm256_set1_pd(share_b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(pa + i);
    const __m256d b = _mm256_loadu_pd(pb + i);
    const __m256d total = _mm256_add_pd(a, b);
    const __m256d ea = _mm256_mul_pd(sa, total);
    const __m256d eb = _mm256_mul_pd(sb, total);
    const __m256d da = _mm256_sub_pd(a, ea);
    const __m256d db = _mm256_sub_pd(b, eb);
    const __m256d qa = _mm256_div_pd(_mm256_mul_pd(da, da), ea);
    const __m256d qb = _mm256_div_pd(_mm256_mul_pd(db, db), eb);
    _mm256_storeu_pd(po + i, _mm256_add_pd(qa, qb));
  }
  if (i < n) {
    Chi2TwoClassScalar(observed_a.subspan(i), observed_b.subspan(i), share_a,
                       share_b, out.subspan(i));
  }
}

#else

void Chi2TwoClassAvx2(std::span<const double> observed_a,
                      std::span<const double> observed_b, double share_a,
                      double share_b, std::span<double> out) {
  Chi2TwoClassScalar(observed_a, observed_b, share_a, share_b, out);
}

#endif

}  // namespace triggerprobe::kernels
