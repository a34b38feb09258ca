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

#include "chanprune/arch_model.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chanprune/error.h"
#include "chanprune/search_space.h"
#include "cost_oracle.h"
#include "json.hpp"
#include "test_util.h"

namespace chanprune {
namespace {

using testing::arch_path;
using testing::fixture_path;
using testing::read_file;

// Builds a minimal document around a layer list.
std::string doc(const std::string& layers, const std::string& shape = "[3, 8, 8]") {
  return R"({"name": "t", "input_shape": )" + shape + R"(, "layers": [)" + layers + "]}";
}

const char* kInput = R"({"id": "in", "kind": "input"})";

TEST(ParseArchSpec, Vgg16BaseStructure) {
  const ArchitectureSpec spec = load_arch_spec(arch_path("vgg16-cifar.arch"));
  EXPECT_EQ(spec.base_structure(),
            (StructureVector{64, 64, 128, 128, 256, 256, 256, 512, 512, 512, 512, 512, 512}));
}

TEST(ParseArchSpec, T2BaseStructure) {
  const ArchitectureSpec spec = load_arch_spec(arch_path("t2.arch"));
  EXPECT_EQ(spec.base_structure(), (StructureVector{4, 8}));
  EXPECT_EQ(spec.input_shape(), (std::array<std::int64_t, 3>{3, 8, 8}));
}

TEST(ParseArchSpec, ResNet56TiesStagesIntoSharedVariables) {
  const ArchitectureSpec spec = load_arch_spec(arch_path("resnet56-cifar.arch"));
  // 27 per-block first convs plus one tied variable per stage.
  EXPECT_EQ(spec.num_variables(), 30u);
  EXPECT_EQ(spec.base_structure()[0], 16);
  EXPECT_EQ(spec.layers_of_variable(0).size(), 10u);  // stem + 9 second convs
}

TEST(ParseArchSpec, NoConvLayersIsAnError) {
  try {
    parse_arch_spec(doc(kInput));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("no searchable layers"), std::string::npos);
  }
}

TEST(ParseArchSpec, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_arch_spec("{not json"), ValidationError);
  EXPECT_THROW(parse_arch_spec("[]"), ValidationError);
  EXPECT_THROW(parse_arch_spec(R"({"name":"x","input_shape":[3,8,8],"layers":[],"extra":1})"),
               ValidationError);
  EXPECT_THROW(parse_arch_spec(R"({"name":"x","input_shape":[3,8],"layers":[]})"),
               ValidationError);
}

TEST(ParseArchSpec, RejectsUnknownLayerField) {
  const std::string layers = std::string(kInput) +
      R"(, {"id": "c", "kind": "conv", "inputs": ["in"], "kernel_h": 3, "kernel_w": 3,
            "base_out_channels": 4, "searchable": true, "dilation": 2})";
  EXPECT_THROW(parse_arch_spec(doc(layers)), ValidationError);
}

TEST(ParseArchSpec, RejectsDanglingInput) {
  const std::string layers = std::string(kInput) +
      R"(, {"id": "c", "kind": "conv", "inputs": ["nowhere"], "kernel_h": 3, "kernel_w": 3,
            "base_out_channels": 4, "searchable": true})";
  try {
    parse_arch_spec(doc(layers));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("dangling"), std::string::npos);
  }
}

TEST(ParseArchSpec, RejectsAddWithUntiedInputs) {
  const std::string layers = std::string(kInput) +
      R"(, {"id": "a", "kind": "conv", "inputs": ["in"], "kernel_h": 3, "kernel_w": 3,
            "base_out_channels": 4, "searchable": true},
          {"id": "b", "kind": "conv", "inputs": ["a"], "kernel_h": 3, "kernel_w": 3,
            "base_out_channels": 4, "searchable": true},
          {"id": "s", "kind": "add", "inputs": ["a", "b"]})";
  try {
    parse_arch_spec(doc(layers));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("untied"), std::string::npos);
  }
}

TEST(ParseArchSpec, AcceptsAddWithEqualFixedInputs) {
  const std::string layers = std::string(kInput) +
      R"(, {"id": "a", "kind": "conv", "inputs": ["in"], "kernel_h": 3, "kernel_w": 3,
            "base_out_channels": 3},
          {"id": "s", "kind": "add", "inputs": ["a", "in"]},
          {"id": "b", "kind": "conv", "inputs": ["s"], "kernel_h": 1, "kernel_w": 1,
            "base_out_channels": 4, "searchable": true})";
  const ArchitectureSpec spec = parse_arch_spec(doc(layers));
  EXPECT_EQ(spec.base_structure(), (StructureVector{4}));
}

TEST(ParseArchSpec, RejectsGroupsNotDividingChannels) {
  const std::string layers = std::string(kInput) +
      R"(, {"id": "a", "kind": "conv", "inputs": ["in"], "kernel_h": 3, "kernel_w": 3,
            "groups": 2, "base_out_channels": 4, "searchable": true})";
  EXPECT_THROW(parse_arch_spec(doc(layers)), ValidationError);  // 3 input channels
}

TEST(ParseArchSpec, RejectsSearchableClassifier) {
  const std::string layers = std::string(kInput) +
      R"(, {"id": "a", "kind": "conv", "inputs": ["in"], "kernel_h": 3, "kernel_w": 3,
            "base_out_channels": 4, "searchable": true},
          {"id": "fc", "kind": "fc", "inputs": ["a"], "base_out_channels": 10,
           "searchable": true})";
  EXPECT_THROW(parse_arch_spec(doc(layers)), ValidationError);
}

TEST(ParseArchSpec, RejectsForwardReferenceAndDuplicateIds) {
  const std::string forward = std::string(kInput) +
      R"(, {"id": "a", "kind": "conv", "inputs": ["b"], "kernel_h": 1, "kernel_w": 1,
            "base_out_channels": 4, "searchable": true},
          {"id": "b", "kind": "conv", "inputs": ["in"], "kernel_h": 1, "kernel_w": 1,
            "base_out_channels": 4, "searchable": true})";
  EXPECT_THROW(parse_arch_spec(doc(forward)), ValidationError);
  const std::string dup = std::string(kInput) + ", " + kInput;
  EXPECT_THROW(parse_arch_spec(doc(dup)), ValidationError);
}

TEST(ParseArchSpec, RejectsValidKernelLargerThanInput) {
  const std::string layers = std::string(kInput) +
      R"(, {"id": "a", "kind": "conv", "inputs": ["in"], "kernel_h": 9, "kernel_w": 3,
            "padding": "valid", "base_out_channels": 4, "searchable": true})";
  EXPECT_THROW(parse_arch_spec(doc(layers)), ValidationError);
}

TEST(ComputeCost, T2Examples) {
  const ArchitectureSpec spec = load_arch_spec(arch_path("t2.arch"));
  const CostReport full = compute_cost(spec, {4, 8});
  EXPECT_EQ(full.flops, 25344u);
  EXPECT_EQ(full.params, 396u);
  EXPECT_EQ(compute_cost(spec, {2, 8}).flops, 12672u);
  EXPECT_EQ(compute_cost(spec, {2, 8}).params, 198u);
  EXPECT_EQ(compute_cost(spec, {2, 4}).flops, 8064u);
  EXPECT_EQ(compute_cost(spec, {2, 4}).params, 126u);
  EXPECT_EQ(full, spec.base_cost());
}

TEST(ComputeCost, RejectsBadStructures) {
  const ArchitectureSpec spec = load_arch_spec(arch_path("t2.arch"));
  EXPECT_THROW(compute_cost(spec, {4}), ValidationError);
  EXPECT_THROW(compute_cost(spec, {0, 8}), ValidationError);
  EXPECT_THROW(compute_cost(spec, {4, 9}), ValidationError);
}

TEST(ComputeCost, GroupDivisibilityCheckedPerStructure) {
  const ArchitectureSpec spec = load_arch_spec(fixture_path("grouped_residual.arch"));
  EXPECT_NO_THROW(compute_cost(spec, {8, 6}));
  EXPECT_THROW(compute_cost(spec, {7, 6}), ValidationError);
  EXPECT_THROW(compute_cost(spec, {8, 5}), ValidationError);
}

TEST(PruningRates, Examples) {
  const ArchitectureSpec spec = load_arch_spec(arch_path("t2.arch"));
  PruningRates full = pruning_rates(spec, spec.base_structure());
  EXPECT_EQ(full.flops_rate, 0.0);
  EXPECT_EQ(full.params_rate, 0.0);
  EXPECT_EQ(pruning_rates(spec, {2, 8}).flops_rate, 0.5);
  const PruningRates r = pruning_rates(spec, {2, 4});
  EXPECT_NEAR(r.flops_rate, 1.0 - 8064.0 / 25344.0, 1e-15);
  EXPECT_NEAR(r.flops_rate, 0.6818, 1e-4);
  // 54 + 72 weights remain out of 396.
  EXPECT_NEAR(r.params_rate, 1.0 - 126.0 / 396.0, 1e-15);
}

TEST(IsFeasible, Examples) {
  const ArchitectureSpec spec = load_arch_spec(arch_path("t2.arch"));
  EXPECT_TRUE(is_feasible(spec, {4, 8}, SparsityTargets(0, 0)));
  EXPECT_TRUE(is_feasible(spec, {1, 1}, SparsityTargets(0, 0)));
  EXPECT_TRUE(is_feasible(spec, {2, 8}, SparsityTargets(0.5, 0)));
  // Both rates at [2, 8] are exactly one half.
  EXPECT_TRUE(is_feasible(spec, {2, 8}, SparsityTargets(0.5, 0.5)));
  EXPECT_FALSE(is_feasible(spec, {2, 8}, SparsityTargets(0.5, 0.51)));
  EXPECT_FALSE(is_feasible(spec, {3, 8}, SparsityTargets(0.5, 0)));
}

TEST(SparsityTargets, RejectsOutOfRange) {
  EXPECT_THROW(SparsityTargets(-0.1, 0), ValidationError);
  EXPECT_THROW(SparsityTargets(0, 1.5), ValidationError);
  EXPECT_THROW(SparsityTargets(std::nan(""), 0), ValidationError);
}

// Exact agreement with the unit-counting oracle over whole compressed spaces.
void expect_matches_oracle(const std::string& fixture, const StepVector& steps) {
  const std::string text = read_file(fixture);
  const ArchitectureSpec spec = parse_arch_spec(text);
  const nlohmann::json raw = nlohmann::json::parse(text);
  const CompressedSpace space = build_space(spec.base_structure(), steps);
  std::vector<std::int64_t> s(space.dimension());
  std::size_t checked = 0;
  std::function<void(std::size_t)> walk = [&](std::size_t dim) {
    if (dim == s.size()) {
      const CostReport got = compute_cost(spec, StructureVector(s));
      const testing::OracleCost want = testing::oracle_cost(raw, s);
      ASSERT_EQ(got.flops, want.macs) << StructureVector(s).to_string();
      ASSERT_EQ(got.params, want.weights) << StructureVector(s).to_string();
      ++checked;
      return;
    }
    const BoxDimension& d = space.box()[dim];
    for (std::int64_t v = d.lo; v <= d.hi; v += d.step) {
      s[dim] = v;
      walk(dim + 1);
    }
  };
  walk(0);
  EXPECT_EQ(BigInt(checked), space_size(space));
}

TEST(ComputeCost, MatchesUnitCountingOracle) {
  expect_matches_oracle(arch_path("t2.arch"), StepVector{{1, 1}});
  expect_matches_oracle(fixture_path("three_layer.arch"), StepVector{{1, 1}});
  expect_matches_oracle(fixture_path("grouped_residual.arch"), StepVector{{2, 2}});
}

TEST(ComputeCostProperty, MonotoneInEveryCoordinate) {
  const ArchitectureSpec spec = load_arch_spec(arch_path("resnet56-cifar.arch"));
  const StructureVector& base = spec.base_structure();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::int64_t> s(base.size()), t(base.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      std::uniform_int_distribution<std::int64_t> d(1, base[i]);
      std::int64_t a = d(rng), b = d(rng);
      s[i] = std::min(a, b);
      t[i] = std::max(a, b);
    }
    const CostReport cs = compute_cost(spec, StructureVector(s));
    const CostReport ct = compute_cost(spec, StructureVector(t));
    EXPECT_LE(cs.flops, ct.flops);
    EXPECT_LE(cs.params, ct.params);
  }
}

TEST(ComputeCostProperty, TiedLayersShareChannelCounts) {
  const ArchitectureSpec spec = load_arch_spec(arch_path("resnet56-cifar.arch"));
  std::map<std::string, std::set<int>> vars_by_group;
  for (std::size_t li = 0; li < spec.layers().size(); ++li) {
    const LayerSpec& layer = spec.layers()[li];
    if (layer.tie_group) {
      vars_by_group[*layer.tie_group].insert(spec.resolved()[li].out_channels.variable);
    }
  }
  ASSERT_EQ(vars_by_group.size(), 3u);
  for (const auto& [group, vars] : vars_by_group) EXPECT_EQ(vars.size(), 1u) << group;
}

TEST(ComputeCostProperty, ParamsShrinkRoughlyQuadratically) {
  std::string layers = kInput;
  std::string prev = "in";
  for (int i = 0; i < 6; ++i) {
    const std::string id = "c" + std::to_string(i);
    layers += R"(, {"id": ")" + id + R"(", "kind": "conv", "inputs": [")" + prev +
              R"("], "kernel_h": 3, "kernel_w": 3, "has_bn": true, "base_out_channels": 64,
                 "searchable": true})";
    prev = id;
  }
  const ArchitectureSpec spec = parse_arch_spec(doc(layers, "[3, 16, 16]"));
  for (double alpha : {0.25, 0.5, 0.75}) {
    std::vector<std::int64_t> s;
    for (std::int64_t c : spec.base_structure()) {
      s.push_back(static_cast<std::int64_t>(std::lround(alpha * static_cast<double>(c))));
    }
    const PruningRates r = pruning_rates(spec, StructureVector(s));
    EXPECT_NEAR(r.params_rate, 1.0 - alpha * alpha, 0.1) << alpha;
  }
}

}  // namespace
}  // namespace chanprune
