// Copyright 2026 The vqclone Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Slow reference computations that share no code path with the simulator. Used by the test
// suites and by `vqclone oracle`.

#ifndef VQCLONE_ORACLES_H
#define VQCLONE_ORACLES_H

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace vqclone::oracle {

using Complex = std::complex<double>;

/// Σ over all n! permutations of Π_i m(i, σ(i)).
Complex permanent_by_permutations(const Eigen::MatrixXcd &m);

/// Haar-random unitary (QR of a complex Ginibre matrix with the R-diagonal phases removed).
Eigen::MatrixXcd haar_unitary(size_t dim, std::mt19937_64 &rng);

Eigen::MatrixXcd random_complex(size_t rows, size_t cols, std::mt19937_64 &rng);

/// Random 2×2 density matrix (normalized Ginibre G G†).
Eigen::Matrix2cd random_density(std::mt19937_64 &rng);

/// Output amplitudes of an occupation-number input obtained by expanding
/// Π_i (Σ_j U_ji a†_j)^{s_i} / √(s_i!) into normal-ordered monomials. Keyed by output occupations.
std::map<std::vector<int>, Complex> fock_transfer_by_expansion(
    const std::vector<int> &input, const Eigen::MatrixXcd &u);

/// Each named oracle prints computed-vs-expected lines to `out` and returns true on pass.
/// Names: permanent, evolve, design-identity, semiclassical.
bool run_named(const std::string &name, std::ostream &out, uint64_t seed = 2026);
const std::vector<std::string> &names();

}  // namespace vqclone::oracle

#endif
