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

// NEON variant of the chi-squared kernel (aarch64 only).

#include <cstddef>

#include "triggerprobe/kernels/chi2.h"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace triggerprobe::kernels {

#if defined(__aarch64__)

void Chi2TwoClassNeon(std::span<const double> observed_a,
                      std::span<const double> observed_b, double share_a,
                      double share_b, std::span<double> out) {
  const std::size_t n = out.size();
  const double *pa = observed_a.data();
  const double *pb = observed_b.data();
  double *po = out.data();
  const float64x2_t sa = vdupq_n_f64(share_a);
  const float64x2_t sb = vdupq_n_f64(share_b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(pa + i);
    const float64x2_t b = vld1q_f64(pb + i);
    const float64x2_t total = vaddq_f64(a, b);
    const float64x2_t ea = vmulq_f64(sa, total);
    const float64x2_t eb = vmulq_f64(sb, total);
    const float64x2_t da = vsubq_f64(a, ea);
    const float64x2_t db = vsubq_f64(b, eb);
    const float64x2_t qa = vdivq_f64(vmulq_f64(da, da), ea);
    const float64x2_t qb = vdivq_f64(vmulq_f64(db, db), eb);
    vst1q_f64(po + i, vaddq_f64(qa, qb));
  }
  if (i < n) {
    Chi2TwoClassScalar(observed_a.subspan(i), observed_b.subspan(i), share_a,
                       share_b, out.subspan(i));
  }
}

#else

void Chi2TwoClassNeon(std::span<const double> observed_a,
                      std::span<const double> observed_b, double share_a,
                      double share_b, std::span<double> out) {
  Chi2TwoClassScalar(observed_a, observed_b, share_a, share_b, out);
}

#endif

}  // namespace triggerprobe::kernels
