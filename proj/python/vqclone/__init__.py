# Copyright 2026 The vqclone Authors
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

"""Linear-optical cloner simulation: meshes, Fock evolution, cloning costs, training."""

from ._vqclone import (
    OPTIMAL_PHASE_COVARIANT_FIDELITY,
    SEMICLASSICAL_FIDELITY,
    UNIVERSAL_FIDELITY_BOUND,
    Cloner,
    CloningOutcome,
    MeshSpec,
    QubitState,
    StatePair,
    build_mesh,
    cost_pc,
    cost_sd,
    default_state_pairs,
    derive_seed,
    design_identity_check,
    evolve,
    fidelity,
    mzi_unitary,
    nelder_mead,
    permanent,
    phase_covariant_training_set,
    sample_counts,
    train,
    validate_sweep,
)

__version__ = "0.1.0"
