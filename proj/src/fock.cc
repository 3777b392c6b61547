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

#include "vqclone/fock.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <stdexcept>

namespace vqclone {

FockState::FockState(std::vector<int> occ) : occupations(std::move(occ)) {
    for (int n : occupations) {
        if (n < 0) {
            throw std::invalid_argument("FockState: negative occupation");
        }
    }
}

int FockState::photon_count() const {
    return std::accumulate(occupations.begin(), occupations.end(), 0);
}

std::string to_string(const FockState &s) {
    std::string out = "|";
    for (size_t k = 0; k < s.occupations.size(); k++) {
        if (k) {
            out += ",";
        }
        out += std::to_string(s.occupations[k]);
    }
    return out + ">";
}

namespace {

Complex permanent_ryser(const Eigen::MatrixXcd &m) {
    const auto n = static_cast<int>(m.rows());
    std::vector<Complex> row_sums(n, Complex(0));
    Complex total = 0;
    uint64_t gray = 0;
    const uint64_t subsets = uint64_t{1} << n;
    for (uint64_t k = 1; k < subsets; k++) {
        const int col = std::countr_zero(k);
        gray ^= uint64_t{1} << col;
        const double sign_flip = (gray >> col) & 1 ? 1.0 : -1.0;
        for (int i = 0; i < n; i++) {
            row_sums[i] += sign_flip * m(i, col);
        }
        Complex prod = 1;
        for (int i = 0; i < n; i++) {
            prod *= row_sums[i];
        }
        total += (std::popcount(gray) % 2 == n % 2) ? prod : -prod;
    }
    return total;
}

double factorial(int n) {
    double f = 1;
    for (int k = 2; k <= n; k++) {
        f *= k;
    }
    return f;
}

void enumerate_into(std::vector<FockState> &out, std::vector<int> &occ, size_t mode, int remaining) {
    if (mode + 1 == occ.size()) {
        occ[mode] = remaining;
        out.emplace_back(occ);
        return;
    }
    for (int k = remaining; k >= 0; k--) {
        occ[mode] = k;
        enumerate_into(out, occ, mode + 1, remaining - k);
    }
}

}  // namespace

Complex permanent(const Eigen::MatrixXcd &m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("permanent: matrix is not square");
    }
    if (m.rows() > 30) {
        throw std::invalid_argument("permanent: dimension too large");
    }
    switch (m.rows()) {
        case 0:
            return 1;
        case 1:
            return m(0, 0);
        case 2:
            return m(0, 0) * m(1, 1) + m(0, 1) * m(1, 0);
        case 3:
            return m(0, 0) * (m(1, 1) * m(2, 2) + m(1, 2) * m(2, 1)) +
                   m(0, 1) * (m(1, 0) * m(2, 2) + m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) + m(1, 1) * m(2, 0));
        default:
            return permanent_ryser(m);
    }
}

std::vector<FockState> enumerate_patterns(int photons, size_t modes) {
    if (photons < 0 || modes < 1) {
        throw std::invalid_argument("enumerate_patterns: need photons >= 0 and modes >= 1");
    }
    std::vector<FockState> out;
    std::vector<int> occ(modes, 0);
    enumerate_into(out, occ, 0, photons);
    return out;
}

FockAmplitudes::FockAmplitudes(int photons, size_t modes)
    : photons_(photons), modes_(modes), patterns_(enumerate_patterns(photons, modes)), amps_(patterns_.size()) {
}

size_t FockAmplitudes::index_of(const FockState &pattern) const {
    if (pattern.mode_count() != modes_ || pattern.photon_count() != photons_) {
        throw std::out_of_range("FockAmplitudes: pattern " + to_string(pattern) + " not in this space");
    }
    // Patterns are sorted descending.
    auto it = std::lower_bound(
        patterns_.begin(), patterns_.end(), pattern, [](const FockState &a, const FockState &b) { return a > b; });
    return static_cast<size_t>(it - patterns_.begin());
}

double FockAmplitudes::norm_squared() const {
    double total = 0;
    for (const auto &a : amps_) {
        total += std::norm(a);
    }
    return total;
}

void to_json(nlohmann::json &j, const FockAmplitudes &a) {
    j = nlohmann::json::object();
    j["photons"] = a.photon_count();
    j["modes"] = a.mode_count();
    j["amplitudes"] = nlohmann::json::array();
    for (size_t k = 0; k < a.size(); k++) {
        j["amplitudes"].push_back(
            {{"pattern", a.patterns()[k].occupations}, {"re", a[k].real()}, {"im", a[k].imag()}});
    }
}

FockAmplitudes evolve(const FockState &input, const UnitaryMatrix &u) {
    if (u.rows() != u.cols() || static_cast<size_t>(u.rows()) != input.mode_count()) {
        throw std::invalid_argument(
            "evolve: unitary is " + std::to_string(u.rows()) + "x" + std::to_string(u.cols()) + " but input has " +
            std::to_string(input.mode_count()) + " modes");
    }
    const int n = input.photon_count();
    if (n < 1) {
        throw std::invalid_argument("evolve: input must contain at least one photon");
    }
    std::vector<Eigen::Index> in_modes;
    double in_norm = 1;
    for (size_t i = 0; i < input.mode_count(); i++) {
        in_modes.insert(in_modes.end(), input[i], static_cast<Eigen::Index>(i));
        in_norm *= factorial(input[i]);
    }

    FockAmplitudes out(n, input.mode_count());
    Eigen::MatrixXcd sub(n, n);
    std::vector<Eigen::Index> out_modes;
    out_modes.reserve(n);
    for (size_t k = 0; k < out.size(); k++) {
        const FockState &t = out.patterns()[k];
        out_modes.clear();
        double out_norm = 1;
        for (size_t j = 0; j < t.mode_count(); j++) {
            out_modes.insert(out_modes.end(), t[j], static_cast<Eigen::Index>(j));
            out_norm *= factorial(t[j]);
        }
        for (int r = 0; r < n; r++) {
            for (int c = 0; c < n; c++) {
                sub(r, c) = u(out_modes[r], in_modes[c]);
            }
        }
        out[k] = permanent(sub) / std::sqrt(in_norm * out_norm);
    }
    return out;
}

PostselectionRule PostselectionRule::accept_all() {
    return {[](const FockState &) { return true; }, "accept all"};
}

PostselectionRule PostselectionRule::coincidence(std::vector<size_t> group_a, std::vector<size_t> group_b) {
    auto describe = [](const std::vector<size_t> &g) {
        std::string s = "{";
        for (size_t k = 0; k < g.size(); k++) {
            s += (k ? "," : "") + std::to_string(g[k]);
        }
        return s + "}";
    };
    std::string desc = "one photon in " + describe(group_a) + " and one in " + describe(group_b);
    return {
        [a = std::move(group_a), b = std::move(group_b)](const FockState &s) {
            auto count = [&](const std::vector<size_t> &g) {
                int total = 0;
                for (size_t m : g) {
                    total += m < s.mode_count() ? s[m] : 0;
                }
                return total;
            };
            return count(a) == 1 && count(b) == 1;
        },
        std::move(desc)};
}

PostselectionRule PostselectionRule::negated() const {
    return {[inner = accept](const FockState &s) { return !inner(s); }, "not (" + description + ")"};
}

PostselectionResult postselect(const FockAmplitudes &state, const PostselectionRule &rule) {
    PostselectionResult result;
    FockAmplitudes kept(state.photon_count(), state.mode_count());
    for (size_t k = 0; k < state.size(); k++) {
        if (rule(state.patterns()[k])) {
            kept[k] = state[k];
            result.probability += std::norm(state[k]);
        }
    }
    result.probability = std::clamp(result.probability, 0.0, 1.0);
    if (result.probability < kZeroSupport) {
        return result;
    }
    const double scale = 1.0 / std::sqrt(result.probability);
    for (size_t k = 0; k < kept.size(); k++) {
        kept[k] *= scale;
    }
    result.state = std::move(kept);
    return result;
}

}  // namespace vqclone
