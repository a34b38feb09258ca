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

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "chanprune/error.h"
#include "json.hpp"

namespace chanprune {

namespace {

using json = nlohmann::json;

const std::set<std::string, std::less<>> kTopLevelKeys = {"name", "input_shape",
                                                         "layers"};

const std::set<std::string, std::less<>>& allowed_keys(LayerKind kind) {
  static const std::set<std::string, std::less<>> input = {"id", "kind"};
  static const std::set<std::string, std::less<>> conv = {
      "id",       "kind",     "kernel_h", "kernel_w",          "stride",
      "padding",  "groups",   "has_bias", "has_bn",            "inputs",
      "searchable", "tie_group", "base_out_channels"};
  static const std::set<std::string, std::less<>> fc = {
      "id",     "kind",       "has_bias",  "has_bn",
      "inputs", "searchable", "tie_group", "base_out_channels"};
  static const std::set<std::string, std::less<>> add = {"id", "kind",
                                                         "inputs"};
  switch (kind) {
    case LayerKind::kInput: return input;
    case LayerKind::kConv: return conv;
    case LayerKind::kFc: return fc;
    case LayerKind::kAdd: return add;
  }
  return input;
}

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

std::int64_t positive_int(const json& obj, const std::string& key,
                          const std::string& where) {
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    fail(where + ": field '" + key + "' must be a positive integer");
  }
  return v.get<std::int64_t>();
}

std::int64_t positive_int_or(const json& obj, const std::string& key,
                             std::int64_t fallback, const std::string& where) {
  return obj.contains(key) ? positive_int(obj, key, where) : fallback;
}

bool bool_or(const json& obj, const std::string& key, bool fallback,
             const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) {
    fail(where + ": field '" + key + "' must be a boolean");
  }
  return obj.at(key).get<bool>();
}

LayerKind parse_kind(const json& v, const std::string& where) {
  if (!v.is_string()) fail(where + ": 'kind' must be a string");
  const auto s = v.get<std::string>();
  if (s == "conv") return LayerKind::kConv;
  if (s == "fc") return LayerKind::kFc;
  if (s == "add") return LayerKind::kAdd;
  if (s == "input") return LayerKind::kInput;
  fail(where + ": unknown layer kind '" + s + "'");
}

LayerSpec parse_layer(const json& obj, std::size_t index) {
  std::string where = "layer #" + std::to_string(index);
  if (!obj.is_object()) fail(where + ": expected an object");
  if (!obj.contains("id") || !obj.at("id").is_string() ||
      obj.at("id").get<std::string>().empty()) {
    fail(where + ": missing or empty 'id'");
  }
  LayerSpec layer;
  layer.id = obj.at("id").get<std::string>();
  where = "layer '" + layer.id + "'";
  if (!obj.contains("kind")) fail(where + ": missing 'kind'");
  layer.kind = parse_kind(obj.at("kind"), where);

  const auto& allowed = allowed_keys(layer.kind);
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      fail(where + ": unknown field '" + key + "' for " +
           std::string(to_string(layer.kind)) + " layer");
    }
  }

  if (layer.kind != LayerKind::kInput) {
    if (!obj.contains("inputs") || !obj.at("inputs").is_array()) {
      fail(where + ": 'inputs' must be a list of layer ids");
    }
    for (const auto& in : obj.at("inputs")) {
      if (!in.is_string()) fail(where + ": 'inputs' entries must be strings");
      layer.inputs.push_back(in.get<std::string>());
    }
  }

  if (layer.kind == LayerKind::kConv || layer.kind == LayerKind::kFc) {
    if (!obj.contains("base_out_channels")) {
      fail(where + ": missing 'base_out_channels'");
    }
    layer.base_out_channels = positive_int(obj, "base_out_channels", where);
    layer.has_bias = bool_or(obj, "has_bias", false, where);
    layer.has_bn = bool_or(obj, "has_bn", false, where);
    layer.searchable = bool_or(obj, "searchable", false, where);
    if (obj.contains("tie_group")) {
      if (!obj.at("tie_group").is_string() ||
          obj.at("tie_group").get<std::string>().empty()) {
        fail(where + ": 'tie_group' must be a non-empty string");
      }
      layer.tie_group = obj.at("tie_group").get<std::string>();
    }
  }

  if (layer.kind == LayerKind::kConv) {
    for (const char* key : {"kernel_h", "kernel_w"}) {
      if (!obj.contains(key)) fail(where + ": missing '" + key + "'");
    }
    layer.kernel_h = positive_int(obj, "kernel_h", where);
    layer.kernel_w = positive_int(obj, "kernel_w", where);
    layer.stride = positive_int_or(obj, "stride", 1, where);
    layer.groups = positive_int_or(obj, "groups", 1, where);
    if (obj.contains("padding")) {
      const json& p = obj.at("padding");
      if (p == "same") {
        layer.padding = Padding::kSame;
      } else if (p == "valid") {
        layer.padding = Padding::kValid;
      } else {
        fail(where + ": 'padding' must be \"same\" or \"valid\"");
      }
    }
  }
  return layer;
}

std::int64_t output_extent(std::int64_t in, std::int64_t kernel,
                           std::int64_t stride, Padding padding,
                           const std::string& where) {
  if (padding == Padding::kSame) return (in + stride - 1) / stride;
  if (in < kernel) {
    fail(where + ": kernel larger than input under valid padding");
  }
  return (in - kernel) / stride + 1;
}

}  // namespace

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kInput: return "input";
    case LayerKind::kConv: return "conv";
    case LayerKind::kFc: return "fc";
    case LayerKind::kAdd: return "add";
  }
  return "?";
}

SparsityTargets::SparsityTargets(double rf, double rp)
    : flops_rate(rf), params_rate(rp) {
  for (double r : {rf, rp}) {
    if (!std::isfinite(r) || r < 0.0 || r > 1.0) {
      throw ValidationError("sparsity target " + std::to_string(r) +
                            " outside [0, 1]");
    }
  }
}

ArchitectureSpec parse_arch_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed architecture document: ") + e.what());
  }
  if (!doc.is_object()) fail("architecture document must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (!kTopLevelKeys.contains(key)) fail("unknown top-level field '" + key + "'");
  }
  for (const char* key : {"name", "input_shape", "layers"}) {
    if (!doc.contains(key)) fail(std::string("missing top-level field '") + key + "'");
  }

  ArchitectureSpec spec;
  if (!doc.at("name").is_string()) fail("'name' must be a string");
  spec.name_ = doc.at("name").get<std::string>();

  const json& shape = doc.at("input_shape");
  if (!shape.is_array() || shape.size() != 3) {
    fail("'input_shape' must be [channels, height, width]");
  }
  for (std::size_t i = 0; i < 3; ++i) {
    if (!shape[i].is_number_integer() || shape[i].get<std::int64_t>() < 1) {
      fail("'input_shape' entries must be positive integers");
    }
    spec.input_shape_[i] = shape[i].get<std::int64_t>();
  }

  const json& layers = doc.at("layers");
  if (!layers.is_array()) fail("'layers' must be a list");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    spec.layers_.push_back(parse_layer(layers[i], i));
  }

  std::unordered_map<std::string, int> index_of;
  std::set<std::string> all_ids;
  for (const auto& layer : spec.layers_) {
    if (!all_ids.insert(layer.id).second) fail("duplicate layer id '" + layer.id + "'");
  }

  std::map<std::string, int> tie_variable;
  std::vector<std::int64_t> base;
  int input_layer = -1;
  std::vector<int> consumers(spec.layers_.size(), 0);

  for (std::size_t li = 0; li < spec.layers_.size(); ++li) {
    const LayerSpec& layer = spec.layers_[li];
    const std::string where = "layer '" + layer.id + "'";
    ResolvedLayer r;
    for (const auto& in : layer.inputs) {
      auto it = index_of.find(in);
      if (it == index_of.end()) {
        if (all_ids.contains(in)) {
          fail(where + ": input '" + in + "' must be declared before it is used");
        }
        fail(where + ": dangling input reference '" + in + "'");
      }
      r.producers.push_back(it->second);
      ++consumers[static_cast<std::size_t>(it->second)];
    }

    switch (layer.kind) {
      case LayerKind::kInput: {
        if (input_layer >= 0) fail("more than one input layer");
        input_layer = static_cast<int>(li);
        r.out_channels.fixed = spec.input_shape_[0];
        r.out_h = spec.input_shape_[1];
        r.out_w = spec.input_shape_[2];
        break;
      }
      case LayerKind::kConv:
      case LayerKind::kFc: {
        if (r.producers.size() != 1) fail(where + ": expects exactly one input");
        const ResolvedLayer& p = spec.resolved_[static_cast<std::size_t>(r.producers[0])];
        r.in_channels = p.out_channels;
        if (layer.kind == LayerKind::kConv) {
          r.out_h = output_extent(p.out_h, layer.kernel_h, layer.stride, layer.padding, where);
          r.out_w = output_extent(p.out_w, layer.kernel_w, layer.stride, layer.padding, where);
        } else {
          r.out_h = 1;
          r.out_w = 1;
        }
        if (layer.searchable) {
          int var = -1;
          if (layer.tie_group) {
            auto it = tie_variable.find(*layer.tie_group);
            if (it != tie_variable.end()) {
              var = it->second;
              if (base[static_cast<std::size_t>(var)] != layer.base_out_channels) {
                fail(where + ": base_out_channels differs within tie group '" +
                     *layer.tie_group + "'");
              }
            }
          }
          if (var < 0) {
            var = static_cast<int>(base.size());
            base.push_back(layer.base_out_channels);
            spec.variable_layers_.emplace_back();
            if (layer.tie_group) tie_variable[*layer.tie_group] = var;
          }
          spec.variable_layers_[static_cast<std::size_t>(var)].push_back(static_cast<int>(li));
          r.out_channels.variable = var;
        } else {
          if (layer.tie_group) fail(where + ": tie_group requires searchable = true");
          r.out_channels.fixed = layer.base_out_channels;
        }
        break;
      }
      case LayerKind::kAdd: {
        if (r.producers.size() < 2) fail(where + ": add layer needs at least two inputs");
        const ResolvedLayer& first = spec.resolved_[static_cast<std::size_t>(r.producers[0])];
        for (std::size_t k = 1; k < r.producers.size(); ++k) {
          const ResolvedLayer& other = spec.resolved_[static_cast<std::size_t>(r.producers[k])];
          if (!(other.out_channels == first.out_channels)) {
            fail(where + ": add layer with untied inputs '" + layer.inputs[0] + "' and '" +
                 layer.inputs[k] + "'");
          }
          if (other.out_h != first.out_h || other.out_w != first.out_w) {
            fail(where + ": add inputs have different spatial sizes");
          }
        }
        r.out_channels = first.out_channels;
        r.out_h = first.out_h;
        r.out_w = first.out_w;
        break;
      }
    }
    index_of[layer.id] = static_cast<int>(li);
    spec.resolved_.push_back(std::move(r));
  }

  if (input_layer < 0) fail("no input layer");
  for (std::size_t li = 0; li < spec.layers_.size(); ++li) {
    const LayerSpec& layer = spec.layers_[li];
    if (layer.kind == LayerKind::kFc && layer.searchable && consumers[li] == 0) {
      fail("layer '" + layer.id + "': the final classifier cannot be searchable");
    }
  }
  if (base.empty()) fail("no searchable layers");
  spec.base_structure_ = StructureVector(std::move(base));

  // Group divisibility at the base structure; compute_cost re-checks it for
  // every other structure.
  spec.base_cost_ = compute_cost(spec, spec.base_structure_);
  return spec;
}

ArchitectureSpec load_arch_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open architecture file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_arch_spec(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

CostReport compute_cost(const ArchitectureSpec& spec, const StructureVector& s) {
  const StructureVector& base = spec.base_structure();
  if (s.size() != base.size()) {
    throw ValidationError("structure vector has " + std::to_string(s.size()) +
                          " entries, architecture '" + spec.name() + "' has " +
                          std::to_string(base.size()) + " search variables");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 1 || s[i] > base[i]) {
      throw ValidationError("channel " + std::to_string(s[i]) + " at index " +
                            std::to_string(i) + " outside [1, " +
                            std::to_string(base[i]) + "]");
    }
  }

  CostReport cost;
  const auto& layers = spec.layers();
  const auto& resolved = spec.resolved();
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const LayerSpec& layer = layers[li];
    const ResolvedLayer& r = resolved[li];
    if (layer.kind != LayerKind::kConv && layer.kind != LayerKind::kFc) continue;
    const auto in = static_cast<std::uint64_t>(r.in_channels.resolve(s));
    const auto out = static_cast<std::uint64_t>(r.out_channels.resolve(s));
    std::uint64_t weights = 0;
    if (layer.kind == LayerKind::kConv) {
      const auto g = static_cast<std::uint64_t>(layer.groups);
      if (in % g != 0 || out % g != 0) {
        throw ValidationError("layer '" + layer.id + "': groups=" + std::to_string(g) +
                              " does not divide channels " + std::to_string(in) +
                              " -> " + std::to_string(out));
      }
      weights = static_cast<std::uint64_t>(layer.kernel_h * layer.kernel_w) * (in / g) * out;
      cost.flops += weights * static_cast<std::uint64_t>(r.out_h * r.out_w);
    } else {
      weights = in * out;
      cost.flops += weights;
    }
    cost.params += weights;
    if (layer.has_bias) cost.params += out;
    if (layer.has_bn) cost.params += 2 * out;
  }
  return cost;
}

PruningRates pruning_rates(const ArchitectureSpec& spec, const StructureVector& s) {
  const CostReport cost = compute_cost(spec, s);
  const CostReport& full = spec.base_cost();
  return {1.0 - static_cast<double>(cost.flops) / static_cast<double>(full.flops),
          1.0 - static_cast<double>(cost.params) / static_cast<double>(full.params)};
}

bool meets_targets(const PruningRates& rates, const SparsityTargets& targets) {
  return rates.flops_rate >= targets.flops_rate && rates.params_rate >= targets.params_rate;
}

bool is_feasible(const ArchitectureSpec& spec, const StructureVector& s,
                 const SparsityTargets& targets) {
  return meets_targets(pruning_rates(spec, s), targets);
}

}  // namespace chanprune
