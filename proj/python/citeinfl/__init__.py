# Copyright 2026 The citeinfl Authors
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

"""Citation-network growth simulator and disruption-index toolkit."""

from ._citeinfl import (
    CiteinflError,
    CiteinflIoError,
    Network,
    __version__,
    cd_index,
    cd_nok,
    config_text,
    fit_extreme_value,
    fit_normal,
    generate,
    lambda_of_beta,
    load_network,
    measure,
    ols_fixed_effects,
    rk,
    run_scenario,
    save_network,
    schedule_n,
)

__all__ = [
    "CiteinflError",
    "CiteinflIoError",
    "Network",
    "__version__",
    "cd_index",
    "cd_nok",
    "config_text",
    "fit_extreme_value",
    "fit_normal",
    "generate",
    "lambda_of_beta",
    "load_network",
    "measure",
    "ols_fixed_effects",
    "rk",
    "run_scenario",
    "save_network",
    "schedule_n",
]
