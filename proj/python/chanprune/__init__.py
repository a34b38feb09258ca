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

"""Constrained channel-count search by improved differential evolution."""

import os
from pathlib import Path

from ._chanprune import (
    Architecture,
    Error,
    EvaluatorError,
    MinimumReached,
    Random,
    SearchConfig,
    Space,
    ValidationError,
    arch_space,
    box_space,
    cost,
    is_feasible,
    load_architecture,
    parse_architecture,
    pruning_rates,
    search,
    surrogate_fitness,
    toy_benchmark,
    toy_fitness,
    toy_space,
)

__all__ = [
    "Architecture",
    "Error",
    "EvaluatorError",
    "MinimumReached",
    "Random",
    "SearchConfig",
    "Space",
    "ValidationError",
    "arch_space",
    "bundled_architecture",
    "box_space",
    "cost",
    "is_feasible",
    "load_architecture",
    "parse_architecture",
    "pruning_rates",
    "search",
    "surrogate_fitness",
    "toy_benchmark",
    "toy_fitness",
    "toy_space",
]


def _arch_dirs():
    if os.environ.get("CHANPRUNE_DATA_DIR"):
        yield Path(os.environ["CHANPRUNE_DATA_DIR"]) / "arch"
    here = Path(__file__).resolve().parent
    yield here / "data" / "arch"  # installed wheel
    yield here.parent.parent / "data" / "arch"  # source checkout


def bundled_architecture(name: str) -> Architecture:
    """Loads one of the shipped architecture files, e.g. "vgg16-cifar"."""
    for directory in _arch_dirs():
        path = directory / f"{name}.arch"
        if path.exists():
            return load_architecture(path)
    raise ValidationError(f"no bundled architecture named {name!r}")
