// Copyright 2026 The Chanprune Authors.
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

#include "chanprune/search_space.h"

#include <gtest/gtest.h>

#include <map>
#include <numeric>

#include "chanprune/error.h"
#include "test_util.h"

namespace chanprune {
namespace {

using testing::arch_path;
using testing::shared_arch;

CompressedSpace two_dim_space() { return build_space({64, 128}, StepVector{{8, 16}}); }

TEST(BuildSpace, TwoDimensionalExample) {
  const CompressedSpace space = two_dim_space();
  ASSERT_EQ(space.dimension(), 2u);
  EXPECT_EQ(space.box()[0].lo, 8);
  EXPECT_EQ(space.box()[0].max_admissible(), 64);
  EXPECT_EQ(space.box()[1].lo, 16);
  EXPECT_EQ(space.box()[1].max_admissible(), 128);
  EXPECT_EQ(space_size(space), 64);
}

TEST(BuildSpace, Vgg16EighthStepsGivesEightToTheThirteenth) {
  auto arch = shared_arch(arch_path("vgg16-cifar.arch"));
  const CompressedSpace space =
      build_space(arch, eighth_steps(arch->base_structure()), SparsityTargets(0, 0));
  BigInt expected = 1;
  for (int i = 0; i < 13; ++i) expected *= 8;
  EXPECT_EQ(space_size(space), expected);
}

TEST(BuildSpace, SinglePoint) {
  const CompressedSpace space = build_space({5}, StepVector{{5}});
  EXPECT_EQ(space_size(space), 1);
  EXPECT_EQ(space.minimum(), (StructureVector{5}));
}

TEST(BuildSpace, StepsEqualToBaseGiveOnePoint) {
  const StructureVector base{3, 17, 64, 9};
  EXPECT_EQ(space_size(build_space(base, StepVector{base.vec()})), 1);
}

TEST(BuildSpace, NonMultipleBaseRoundsDown) {
  const CompressedSpace space = build_space({10}, StepVector{{4}});
  EXPECT_EQ(space_size(space), 2);
  EXPECT_EQ(space.box()[0].max_admissible(), 8);
  EXPECT_FALSE(space.contains({10}));
}

TEST(BuildSpace, RejectsBadSteps) {
  EXPECT_THROW(build_space({64, 128}, StepVector{{8}}), ValidationError);
  EXPECT_THROW(build_space({64}, StepVector{{0}}), ValidationError);
  EXPECT_THROW(build_space({64}, StepVector{{65}}), ValidationError);
}

TEST(SpaceSize, ResNet56IsBeyondSixtyFourBits) {
  auto arch = shared_arch(arch_path("resnet56-cifar.arch"));
  const CompressedSpace space =
      build_space(arch, multiple_steps(arch->base_structure(), 1), SparsityTargets(0, 0));
  const BigInt size = space_size(space);
  EXPECT_GT(size, BigInt(std::numeric_limits<std::uint64_t>::max()));
}

TEST(SpaceSize, MatchesEnumeration) {
  const std::vector<std::pair<StructureVector, StepVector>> cases = {
      {{4, 4, 4}, StepVector{{1, 1, 1}}},
      {{64, 128}, StepVector{{8, 16}}},
      {{10, 7, 9, 3}, StepVector{{3, 2, 4, 1}}},
      {{12, 12}, StepVector{{5, 12}}},
  };
  for (const auto& [base, steps] : cases) {
    const CompressedSpace space = build_space(base, steps);
    std::uint64_t count = 0;
    std::vector<std::int64_t> v(base.size());
    std::function<void(std::size_t)> walk = [&](std::size_t d) {
      if (d == v.size()) {
        EXPECT_TRUE(space.contains(StructureVector(v)));
        ++count;
        return;
      }
      // Every integer in [1, c_i]; count only the admissible ones.
      for (std::int64_t x = 1; x <= base[d]; ++x) {
        if (x % steps[d] != 0) continue;
        v[d] = x;
        walk(d + 1);
      }
    };
    walk(0);
    EXPECT_EQ(space_size(space), BigInt(count)) << base.to_string();
  }
}

TEST(SampleUniform, SinglePointSpaceAlwaysReturnsIt) {
  const CompressedSpace space = build_space({5, 6}, StepVector{{5, 6}});
  Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_uniform(space, rng), (StructureVector{5, 6}));
}

TEST(SampleUniform, BinaryDimensionIsFair) {
  const CompressedSpace space = build_space({16}, StepVector{{8}});
  Rng rng(2024);
  int eights = 0;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    const std::int64_t x = sample_uniform(space, rng)[0];
    ASSERT_TRUE(x == 8 || x == 16);
    eights += x == 8;
  }
  EXPECT_NEAR(static_cast<double>(eights) / kDraws, 0.5, 0.02);
}

TEST(SampleUniform, MarginalsUniformWithinThreeSigma) {
  const CompressedSpace space = build_space({64, 30}, StepVector{{8, 5}});
  Rng rng(99);
  constexpr int kDraws = 10000;
  std::vector<std::map<std::int64_t, int>> counts(2);
  for (int i = 0; i < kDraws; ++i) {
    const StructureVector s = sample_uniform(space, rng);
    ASSERT_TRUE(space.contains(s));
    for (std::size_t d = 0; d < 2; ++d) ++counts[d][s[d]];
  }
  for (std::size_t d = 0; d < 2; ++d) {
    const double p = 1.0 / static_cast<double>(space.box()[d].count());
    const double sigma = std::sqrt(p * (1 - p) / kDraws);
    ASSERT_EQ(counts[d].size(), static_cast<std::size_t>(space.box()[d].count()));
    for (const auto& [value, n] : counts[d]) {
      EXPECT_NEAR(static_cast<double>(n) / kDraws, p, 3 * sigma) << d << ":" << value;
    }
  }
}

TEST(SampleUniform, SeedDeterminesSequence) {
  const CompressedSpace space = two_dim_space();
  Rng a(5), b(5);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sample_uniform(space, a), sample_uniform(space, b));
}

TEST(SnapAndClamp, Examples) {
  const CompressedSpace space = two_dim_space();
  EXPECT_EQ(snap_and_clamp({13, 30}, space), (StructureVector{8, 16}));
  EXPECT_EQ(snap_and_clamp({-5, 999}, space), (StructureVector{8, 128}));
  EXPECT_EQ(snap_and_clamp({40, 96}, space), (StructureVector{40, 96}));
  EXPECT_EQ(snap_and_clamp({-17, 0}, space), (StructureVector{8, 16}));
}

TEST(SnapAndClamp, ClampsToLargestAdmissibleBelowBase) {
  const CompressedSpace space = build_space({10}, StepVector{{4}});
  EXPECT_EQ(snap_and_clamp({10}, space), (StructureVector{8}));
  EXPECT_EQ(snap_and_clamp({1000}, space), (StructureVector{8}));
}

TEST(SnapAndClamp, RejectsLengthMismatch) {
  EXPECT_THROW(snap_and_clamp({8}, two_dim_space()), ValidationError);
}

TEST(SnapAndClampProperty, IdempotentAndAdmissible) {
  const CompressedSpace space = build_space({64, 100, 7}, StepVector{{8, 12, 3}});
  Rng rng(3);
  std::uniform_int_distribution<std::int64_t> raw(-300, 300);
  for (int i = 0; i < 5000; ++i) {
    const StructureVector v{raw(rng), raw(rng), raw(rng)};
    const StructureVector once = snap_and_clamp(v, space);
    EXPECT_TRUE(space.contains(once)) << v.to_string();
    EXPECT_EQ(snap_and_clamp(once, space), once);
  }
}

TEST(Rescale, FeasibleInputOnlySnaps) {
  auto arch = shared_arch(arch_path("t2.arch"));
  const CompressedSpace space =
      build_space(arch, StepVector{{1, 1}}, SparsityTargets(0.5, 0));
  Rng rng(1);
  EXPECT_EQ(rescale({2, 8}, space, rng), (StructureVector{2, 8}));
  EXPECT_EQ(rescale({1, 3}, space, rng), (StructureVector{1, 3}));
}

TEST(Rescale, UnlinkedSpaceIsSnapAndClamp) {
  const CompressedSpace space = two_dim_space();
  Rng rng(1);
  EXPECT_EQ(rescale({13, 30}, space, rng), (StructureVector{8, 16}));
}

TEST(Rescale, RepairsT2UntilFlopsTargetHolds) {
  auto arch = shared_arch(arch_path("t2.arch"));
  const SparsityTargets targets(0.5, 0);
  const CompressedSpace space = build_space(arch, StepVector{{1, 1}}, targets);
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const StructureVector out = rescale({4, 8}, space, rng);
    EXPECT_TRUE(space.contains(out));
    EXPECT_TRUE(is_feasible(*arch, out, targets)) << out.to_string();
  }
}

TEST(Rescale, ExplicitTargetsOverload) {
  auto arch = shared_arch(arch_path("t2.arch"));
  const CompressedSpace space = build_space(arch->base_structure(), StepVector{{1, 1}});
  const SparsityTargets targets(0.5, 0.5);
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const StructureVector out = rescale({9, -2}, space, *arch, targets, rng);
    EXPECT_TRUE(is_feasible(*arch, out, targets));
  }
}

TEST(Rescale, UnattainableTargetsRaiseMinimumReached) {
  auto arch = shared_arch(arch_path("t2.arch"));
  Rng rng(1);
  for (const StepVector& steps : {StepVector{{2, 4}}, eighth_steps(arch->base_structure())}) {
    const CompressedSpace space = build_space(arch, steps, SparsityTargets(0.999, 0.999));
    EXPECT_FALSE(is_feasible(*arch, space.minimum(), SparsityTargets(0.999, 0.999)));
    EXPECT_THROW(rescale({4, 8}, space, rng), MinimumReached);
  }
}

TEST(RescaleProperty, OutputAlwaysAdmissibleAndFeasibleOnVgg) {
  auto arch = shared_arch(arch_path("vgg16-cifar.arch"));
  const SparsityTargets targets(0.5, 0.5);
  const CompressedSpace space = build_space(arch, eighth_steps(arch->base_structure()), targets);
  Rng rng(17);
  std::uniform_int_distribution<std::int64_t> raw(-100, 700);
  for (int i = 0; i < 300; ++i) {
    std::vector<std::int64_t> v(space.dimension());
    for (auto& x : v) x = raw(rng);
    const StructureVector out = rescale(StructureVector(v), space, rng);
    ASSERT_TRUE(space.contains(out));
    ASSERT_TRUE(is_feasible(*arch, out, targets));
    // Repair only lowers entries relative to the snapped input.
    const StructureVector snapped = snap_and_clamp(StructureVector(v), space);
    for (std::size_t d = 0; d < out.size(); ++d) ASSERT_LE(out[d], snapped[d]);
  }
}

TEST(Rescale, SameSeedSameRepair) {
  auto arch = shared_arch(arch_path("vgg16-cifar.arch"));
  const CompressedSpace space =
      build_space(arch, eighth_steps(arch->base_structure()), SparsityTargets(0.6, 0.4));
  Rng a(8), b(8);
  EXPECT_EQ(rescale(arch->base_structure(), space, a), rescale(arch->base_structure(), space, b));
}

TEST(StepRules, EighthAndMultiple) {
  const StructureVector base{64, 4, 12};
  EXPECT_EQ(eighth_steps(base).steps, (std::vector<std::int64_t>{8, 1, 1}));
  EXPECT_EQ(multiple_steps(base, 8).steps, (std::vector<std::int64_t>{8, 4, 8}));
  EXPECT_THROW(multiple_steps(base, 0), ValidationError);
}

TEST(StepRules, StepFileOverridesSelectedIndices) {
  const auto path = std::filesystem::temp_directory_path() / "chanprune_steps_test.json";
  {
    std::ofstream out(path);
    out << R"({"1": 2})";
  }
  const StepVector steps = load_step_file(path, {64, 4, 12});
  EXPECT_EQ(steps.steps, (std::vector<std::int64_t>{8, 2, 1}));
  {
    std::ofstream out(path);
    out << R"({"7": 2})";
  }
  EXPECT_THROW(load_step_file(path, {64, 4, 12}), ValidationError);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace chanprune
