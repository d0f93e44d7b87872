# Copyright 2026 The paulimit Authors
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

"""Pauli-channel noise characterization and mitigation for identity circuits."""

from paulimit._core import (
    CountsRecord,
    CoverageError,
    GroundTruth,
    NoiseModel,
    NumericError,
    build_Q,
    clifford_unitary,
    compose,
    estimate_model,
    evaluate,
    fwht,
    fwht_inverse,
    generate_dataset,
    inverse,
    jsd,
    mem_build,
    mitigate,
    predict,
    preset,
    rb_fit,
    read_dataset,
    run_cli,
    sample_identity_circuit,
    simplex_project,
    write_dataset,
    xor_permute,
)

__version__ = "0.1.0"
