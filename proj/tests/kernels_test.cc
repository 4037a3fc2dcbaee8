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

#include "triggerprobe/kernels/chi2.h"

#include <gtest/gtest.h>

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include "triggerprobe/errors.h"

namespace triggerprobe::kernels {
namespace {

struct Inputs {
  std::vector<double> a, b;
  double share_a, share_b;
};

Inputs RandomInputs(std::mt19937_64 &rng, std::size_t n) {
  std::uniform_int_distribution<int> count(0, 500);
  std::uniform_int_distribution<int> docs(1, 1000);
  Inputs in;
  for (std::size_t i = 0; i < n; ++i) {
    int a = count(rng), b = count(rng);
    if (a + b == 0) a = 1;
    in.a.push_back(a);
    in.b.push_back(b);
  }
  const double da = docs(rng), db = docs(rng);
  in.share_a = da / (da + db);
  in.share_b = db / (da + db);
  return in;
}

TEST(Chi2KernelTest, ScalarMatchesFormula) {
  const std::vector<double> a = {2, 0, 3}, b = {0, 1, 1};
  std::vector<double> out(3);
  Chi2TwoClassScalar(a, b, 0.5, 0.5, out);
  EXPECT_DOUBLE_EQ(out[0], 2.0);
  EXPECT_DOUBLE_EQ(out[1], 1.0);
  EXPECT_DOUBLE_EQ(out[2], 1.0);
}

TEST(Chi2KernelTest, EveryVariantIsBitIdenticalToScalar) {
  std::mt19937_64 rng(5);
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (!IsaSupported(isa)) {
      GTEST_LOG_(INFO) << IsaName(isa) << " not supported on this CPU";
      continue;
    }
    // Lengths straddle the vector width so the tails are covered.
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 1000u, 1003u}) {
      const Inputs in = RandomInputs(rng, n);
      std::vector<double> ref(n), got(n);
      Chi2TwoClassScalar(in.a, in.b, in.share_a, in.share_b, ref);
      Chi2TwoClass(isa, in.a, in.b, in.share_a, in.share_b, got);
      for (std::size_t i = 0; i < n; ++i) {
        ASSERT_EQ(std::bit_cast<std::uint64_t>(ref[i]), std::bit_cast<std::uint64_t>(got[i]))
            << IsaName(isa) << " n=" << n << " i=" << i;
      }
    }
  }
}

TEST(Chi2KernelTest, DispatchMatchesScalar) {
  std::mt19937_64 rng(6);
  const Inputs in = RandomInputs(rng, 77);
  std::vector<double> ref(77), got(77);
  Chi2TwoClassScalar(in.a, in.b, in.share_a, in.share_b, ref);
  Chi2TwoClass(in.a, in.b, in.share_a, in.share_b, got);
  EXPECT_EQ(ref, got);
  EXPECT_TRUE(IsaSupported(ActiveIsa()));
  EXPECT_TRUE(IsaSupported(Isa::kScalar));
}

TEST(Chi2KernelTest, ShapeMismatchThrows) {
  std::vector<double> a(3, 1), b(2, 1), out(3);
  EXPECT_THROW(Chi2TwoClass(Isa::kScalar, a, b, 0.5, 0.5, out), InvalidArgument);
}

TEST(Chi2KernelTest, UnsupportedVariantThrows) {
  std::vector<double> a(1, 1), b(1, 1), out(1);
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (!IsaSupported(isa)) {
      EXPECT_THROW(Chi2TwoClass(isa, a, b, 0.5, 0.5, out), InvalidArgument);
    }
  }
}

}  // namespace
}  // namespace triggerprobe::kernels
