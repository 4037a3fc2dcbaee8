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

#include <cstdlib>
#include <string>

#include "triggerprobe/errors.h"
#include "triggerprobe/kernels/chi2.h"

namespace triggerprobe::kernels {

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "scalar";
}

bool IsaSupported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

namespace {

Isa DetectIsa() {
  if (const char *forced = std::getenv("TRIGGERPROBE_ISA")) {
    const std::string name(forced);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (name == IsaName(isa)) return IsaSupported(isa) ? isa : Isa::kScalar;
    }
  }
  if (IsaSupported(Isa::kAvx2)) return Isa::kAvx2;
  if (IsaSupported(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

void CheckShapes(std::span<const double> a, std::span<const double> b,
                 std::span<double> out) {
  if (a.size() != out.size() || b.size() != out.size()) {
    throw InvalidArgument("chi2 kernel: mismatched input lengths");
  }
}

}  // namespace

Isa ActiveIsa() {
  static const Isa isa = DetectIsa();
  return isa;
}

void Chi2TwoClass(Isa isa, std::span<const double> observed_a,
                  std::span<const double> observed_b, double share_a,
                  double share_b, std::span<double> out) {
  CheckShapes(observed_a, observed_b, out);
  if (!IsaSupported(isa)) {
    throw InvalidArgument("ISA '" + std::string(IsaName(isa)) +
                          "' not supported on this CPU");
  }
  switch (isa) {
    case Isa::kScalar:
      Chi2TwoClassScalar(observed_a, observed_b, share_a, share_b, out);
      return;
    case Isa::kAvx2:
      Chi2TwoClassAvx2(observed_a, observed_b, share_a, share_b, out);
      return;
    case Isa::kNeon:
      Chi2TwoClassNeon(observed_a, observed_b, share_a, share_b, out);
      return;
  }
}

void Chi2TwoClass(std::span<const double> observed_a,
                  std::span<const double> observed_b, double share_a,
                  double share_b, std::span<double> out) {
  Chi2TwoClass(ActiveIsa(), observed_a, observed_b, share_a, share_b, out);
}

}  // namespace triggerprobe::kernels
