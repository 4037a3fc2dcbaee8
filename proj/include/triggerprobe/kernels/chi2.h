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

#ifndef TRIGGERPROBE_KERNELS_CHI2_H_
#define TRIGGERPROBE_KERNELS_CHI2_H_

#include <span>
#include <string_view>

namespace triggerprobe::kernels {

// Instruction-set variants of the data-parallel kernels. Every variant
// performs the same per-lane operation sequence without fused multiply-add,
// so results are bit-identical to the scalar reference.
enum class Isa { kScalar, kAvx2, kNeon };

std::string_view IsaName(Isa isa);

// Best variant the running CPU supports. TRIGGERPROBE_ISA=scalar|avx2|neon
// in the environment forces a variant (falls back to scalar if unsupported).
Isa ActiveIsa();
bool IsaSupported(Isa isa);

// Two-class chi-squared per term:
//   e_c = share_c * (a + b);  out = (a - e_a)^2 / e_a + (b - e_b)^2 / e_b
// `observed_a`, `observed_b` and `out` must have equal length; every
// a + b must be positive and both shares positive.
void Chi2TwoClassScalar(std::span<const double> observed_a,
                        std::span<const double> observed_b, double share_a,
                        double share_b, std::span<double> out);
void Chi2TwoClassAvx2(std::span<const double> observed_a,
                      std::span<const double> observed_b, double share_a,
                      double share_b, std::span<double> out);
void Chi2TwoClassNeon(std::span<const double> observed_a,
                      std::span<const double> observed_b, double share_a,
                      double share_b, std::span<double> out);

// Explicit variant; throws InvalidArgument when `isa` is not supported here.
void Chi2TwoClass(Isa isa, std::span<const double> observed_a,
                  std::span<const double> observed_b, double share_a,
                  double share_b, std::span<double> out);

// Dispatches to ActiveIsa().
void Chi2TwoClass(std::span<const double> observed_a,
                  std::span<const double> observed_b, double share_a,
                  double share_b, std::span<double> out);

}  // namespace triggerprobe::kernels

#endif  // TRIGGERPROBE_KERNELS_CHI2_H_
