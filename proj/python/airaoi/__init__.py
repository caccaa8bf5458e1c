# Copyright 2026 The airaoi Authors
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

"""Age-aware device selection and power control for over-the-air federated learning."""

from ._core import (
    BisectionError,
    ConfigError,
    DegenerateError,
    alpha_for_multiplier,
    alternating_optimize,
    convergence_bound,
    default_config,
    greedy_select,
    instantaneous_mse,
    optimal_alpha_offline,
    optimal_eta,
    run,
    sweep_snr,
)

__all__ = [
    "BisectionError",
    "ConfigError",
    "DegenerateError",
    "alpha_for_multiplier",
    "alternating_optimize",
    "convergence_bound",
    "default_config",
    "greedy_select",
    "instantaneous_mse",
    "optimal_alpha_offline",
    "optimal_eta",
    "run",
    "sweep_snr",
]
