#!/usr/bin/env python3
# Copyright 2026 The Chanprune Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the bundled CIFAR architecture descriptions in data/arch."""

import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "arch"


def conv(lid, src, out, k=3, stride=1, searchable=True, tie=None):
    layer = {"id": lid, "kind": "conv", "inputs": [src], "kernel_h": k,
             "kernel_w": k, "stride": stride, "padding": "same",
             "has_bias": False, "has_bn": True, "base_out_channels": out,
             "searchable": searchable}
    if tie:
        layer["tie_group"] = tie
    return layer


def vgg16():
    # Max-pooling between stages is folded into stride 2 on the first conv of
    # the next stage: same output size, same MACs and weights.
    cfg = [64, 64, "M", 128, 128, "M", 256, 256, 256, "M", 512, 512, 512, "M",
           512, 512, 512]
    layers = [{"id": "data", "kind": "input"}]
    prev, stride, n = "data", 1, 0
    for item in cfg:
        if item == "M":
            stride = 2
            continue
        n += 1
        layers.append(conv(f"conv{n}", prev, item, stride=stride))
        prev, stride = f"conv{n}", 1
    layers.append({"id": "fc", "kind": "fc", "inputs": [prev], "has_bias": True,
                   "base_out_channels": 10, "searchable": False})
    return {"name": "vgg16-cifar", "input_shape": [3, 32, 32], "layers": layers}


def resnet56():
    layers = [{"id": "data", "kind": "input"},
              conv("stem", "data", 16, tie="stage1")]
    prev = "stem"
    widths = [16, 32, 64]
    for s, width in enumerate(widths, start=1):
        tie = f"stage{s}"
        for b in range(1, 10):
            name = f"s{s}b{b}"
            stride = 2 if (s > 1 and b == 1) else 1
            layers.append(conv(f"{name}_conv1", prev, width, stride=stride))
            layers.append(conv(f"{name}_conv2", f"{name}_conv1", width, tie=tie))
            shortcut = prev
            if stride == 2:
                # Projection shortcut so the add sees the tied stage width.
                layers.append(conv(f"{name}_down", prev, width, k=1, stride=2, tie=tie))
                shortcut = f"{name}_down"
            layers.append({"id": f"{name}_add", "kind": "add",
                           "inputs": [f"{name}_conv2", shortcut]})
            prev = f"{name}_add"
    layers.append({"id": "fc", "kind": "fc", "inputs": [prev], "has_bias": True,
                   "base_out_channels": 10, "searchable": False})
    return {"name": "resnet56-cifar", "input_shape": [3, 32, 32], "layers": layers}


def dump(doc, filename):
    lines = ["{",
             f'  "name": {json.dumps(doc["name"])},',
             f'  "input_shape": {json.dumps(doc["input_shape"])},',
             '  "layers": [']
    body = [f"    {json.dumps(layer)}" for layer in doc["layers"]]
    lines.append(",\n".join(body))
    lines += ["  ]", "}"]
    (OUT / filename).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    dump(vgg16(), "vgg16-cifar.arch")
    dump(resnet56(), "resnet56-cifar.arch")
