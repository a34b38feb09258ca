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

#ifndef CHANPRUNE_ARCH_MODEL_H_
#define CHANPRUNE_ARCH_MODEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chanprune/structure.h"

namespace chanprune {

enum class LayerKind { kInput, kConv, kFc, kAdd };
enum class Padding { kSame, kValid };

std::string_view to_string(LayerKind kind);

// One node of the layer graph as written in the architecture document.
struct LayerSpec {
  std::string id;
  LayerKind kind = LayerKind::kConv;
  std::int64_t kernel_h = 1;
  std::int64_t kernel_w = 1;
  std::int64_t stride = 1;
  Padding padding = Padding::kSame;
  std::int64_t groups = 1;
  bool has_bias = false;
  bool has_bn = false;
  std::vector<std::string> inputs;
  std::int64_t base_out_channels = 0;
  bool searchable = false;
  std::optional<std::string> tie_group;
};

// Where a layer's channel count comes from: a search variable, or a constant
// for non-searchable layers and the network input.
struct ChannelSource {
  int variable = -1;
  std::int64_t fixed = 0;

  bool is_variable() const { return variable >= 0; }
  std::int64_t resolve(const StructureVector& s) const {
    return is_variable() ? s[static_cast<std::size_t>(variable)] : fixed;
  }
  friend bool operator==(const ChannelSource&, const ChannelSource&) = default;
};

// Per-layer facts that do not depend on the structure vector.
struct ResolvedLayer {
  std::vector<int> producers;  // indices into layers()
  ChannelSource in_channels;   // conv/fc only
  ChannelSource out_channels;
  std::int64_t out_h = 0;
  std::int64_t out_w = 0;
};

// FLOPs in multiply-accumulates; params in scalar weights (incl. bias and
// BN scale/shift).
struct CostReport {
  std::uint64_t flops = 0;
  std::uint64_t params = 0;

  friend bool operator==(const CostReport&, const CostReport&) = default;
};

struct PruningRates {
  double flops_rate = 0.0;
  double params_rate = 0.0;
};

// Targets R_f and R_p. Zero leaves the quantity unconstrained.
struct SparsityTargets {
  double flops_rate = 0.0;
  double params_rate = 0.0;

  SparsityTargets() = default;
  SparsityTargets(double rf, double rp);

  bool unconstrained() const { return flops_rate == 0.0 && params_rate == 0.0; }
};

// A validated layer graph with tie groups resolved into search variables.
// Build with parse_arch_spec.
class ArchitectureSpec {
 public:
  const std::string& name() const { return name_; }
  const std::array<std::int64_t, 3>& input_shape() const {
    return input_shape_;
  }
  const std::vector<LayerSpec>& layers() const { return layers_; }
  const std::vector<ResolvedLayer>& resolved() const { return resolved_; }

  // C: base channel count per search variable, ordered by first appearance.
  const StructureVector& base_structure() const { return base_structure_; }
  std::size_t num_variables() const { return base_structure_.size(); }

  // Layer indices (conv/fc) whose output channels are variable v.
  const std::vector<int>& layers_of_variable(std::size_t v) const {
    return variable_layers_[v];
  }

  // Cost at the base structure, computed once at parse time.
  const CostReport& base_cost() const { return base_cost_; }

 private:
  friend ArchitectureSpec parse_arch_spec(std::string_view text);

  std::string name_;
  std::array<std::int64_t, 3> input_shape_{};
  std::vector<LayerSpec> layers_;
  std::vector<ResolvedLayer> resolved_;
  StructureVector base_structure_;
  std::vector<std::vector<int>> variable_layers_;
  CostReport base_cost_;
};

// Parses and validates a JSON architecture document. Throws ValidationError.
ArchitectureSpec parse_arch_spec(std::string_view text);
ArchitectureSpec load_arch_spec(const std::filesystem::path& path);

// Throws ValidationError when s has the wrong length, an entry outside
// (0, c_i], or a grouped layer whose group count does not divide its
// channel counts under s.
CostReport compute_cost(const ArchitectureSpec& spec, const StructureVector& s);

PruningRates pruning_rates(const ArchitectureSpec& spec,
                           const StructureVector& s);

bool is_feasible(const ArchitectureSpec& spec, const StructureVector& s,
                 const SparsityTargets& targets);

// Same test against rates computed elsewhere.
bool meets_targets(const PruningRates& rates, const SparsityTargets& targets);

}  // namespace chanprune

#endif  // CHANPRUNE_ARCH_MODEL_H_
