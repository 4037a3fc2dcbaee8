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

// Scalar reference for the chi-squared kernel.

#include <cstddef>

#include "triggerprobe/kernels/chi2.h"

namespace triggerprobe::kernels {

void Chi2TwoClassScalar(std::span<const double> observed_a,
                        std::span<const double> observed_b, double share_a,
                        double share_b, std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double a = observed_a[i];
    const double b = observed_b[i];
    const double total = a + b;
    const double ea = share_a * total;
    const double eb = share_b * total;
    const double da = a - ea;
    const double db = b - eb;
    out[i] = (da * da) / ea + (db * db) / eb;
  }
}

}  // namespace triggerprobe::kernels
