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

#ifndef CHANPRUNE_TESTS_COST_ORACLE_H_
#define CHANPRUNE_TESTS_COST_ORACLE_H_

// Unit-counting reference for FLOPs and parameters. Reads the raw JSON
// document itself and walks every output position, channel and kernel tap,
// so it shares no code with compute_cost.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace chanprune::testing {

struct OracleCost {
  std::uint64_t macs = 0;
  std::uint64_t weights = 0;
};

// Output positions along one axis, found by sliding the window.
inline std::int64_t count_positions(std::int64_t extent, std::int64_t kernel,
                                    std::int64_t stride, const std::string& padding) {
  std::int64_t n = 0;
  if (padding == "valid") {
    for (std::int64_t start = 0; start + kernel <= extent; start += stride) ++n;
  } else {
    for (std::int64_t centre = 0; centre < extent; centre += stride) ++n;
  }
  return n;
}

inline OracleCost oracle_cost(const nlohmann::json& doc,
                              const std::vector<std::int64_t>& structure) {
  struct Tensor {
    std::int64_t c, h, w;
  };
  std::map<std::string, Tensor> tensors;
  std::map<std::string, std::size_t> tie_index;
  std::size_t next_var = 0;
  OracleCost cost;

  for (const auto& layer : doc.at("layers")) {
    const std::string id = layer.at("id");
    const std::string kind = layer.at("kind");
    if (kind == "input") {
      const auto& s = doc.at("input_shape");
      tensors[id] = {s[0].get<std::int64_t>(), s[1].get<std::int64_t>(),
                     s[2].get<std::int64_t>()};
      continue;
    }
    const Tensor in = tensors.at(layer.at("inputs")[0].get<std::string>());
    if (kind == "add") {
      tensors[id] = in;
      continue;
    }
    std::int64_t out_c = layer.at("base_out_channels");
    if (layer.value("searchable", false)) {
      std::size_t var;
      if (layer.contains("tie_group")) {
        const std::string g = layer.at("tie_group");
        if (!tie_index.count(g)) tie_index[g] = next_var++;
        var = tie_index[g];
      } else {
        var = next_var++;
      }
      out_c = structure.at(var);
    }
    std::int64_t per_filter = 0;
    Tensor out{out_c, 1, 1};
    if (kind == "conv") {
      const std::int64_t kh = layer.at("kernel_h"), kw = layer.at("kernel_w");
      const std::int64_t stride = layer.value("stride", 1);
      const std::int64_t groups = layer.value("groups", 1);
      const std::string padding = layer.value("padding", "same");
      out.h = count_positions(in.h, kh, stride, padding);
      out.w = count_positions(in.w, kw, stride, padding);
      for (std::int64_t ic = 0; ic < in.c; ++ic) {
        // Input channels visible to the first filter's group.
        if (ic < in.c / groups) {
          for (std::int64_t t = 0; t < kh * kw; ++t) ++per_filter;
        }
      }
    } else {
      for (std::int64_t ic = 0; ic < in.c; ++ic) ++per_filter;
    }
    for (std::int64_t o = 0; o < out.c; ++o) {
      for (std::int64_t y = 0; y < out.h; ++y) {
        for (std::int64_t x = 0; x < out.w; ++x) {
          for (std::int64_t k = 0; k < per_filter; ++k) ++cost.macs;
        }
      }
      for (std::int64_t k = 0; k < per_filter; ++k) ++cost.weights;
      if (layer.value("has_bias", false)) ++cost.weights;
      if (layer.value("has_bn", false)) cost.weights += 2;
    }
    tensors[id] = out;
  }
  return cost;
}

}  // namespace chanprune::testing

#endif  // CHANPRUNE_TESTS_COST_ORACLE_H_
