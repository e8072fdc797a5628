# Copyright 2026 The smplab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Simultaneous message passing protocol simulator."""

from smplab._smplab import (
    CapExceeded,
    ConfigError,
    DegenerateProjection,
    InvalidArgument,
    PromiseViolation,
    SmplabError,
    VerificationFailure,
    bad_count_bound,
    default_copies,
    equality_det_complexity,
    equality_public_acceptance,
    experiment_defaults,
    experiment_names,
    hadamard_min_distance,
    learn_state,
    run_experiment,
    truncate_estimate,
)

__version__ = "0.1.0"
