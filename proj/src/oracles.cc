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

#include "vqclone/oracles.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "vqclone/cloner.h"
#include "vqclone/fock.h"

namespace vqclone::oracle {

namespace {

double factorial(int n) {
    double f = 1;
    for (int k = 2; k <= n; k++) {
        f *= k;
    }
    return f;
}

void report(std::ostream &out, const std::string &what, double computed, double expected, double tol, bool pass) {
    out << std::setprecision(12) << "  " << what << ": computed " << computed << ", expected " << expected
        << " (tol " << tol << ") " << (pass ? "PASS" : "FAIL") << "\n";
}

bool oracle_permanent(std::ostream &out, uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (int trial = 0; trial < 1000; trial++) {
        const size_t n = 1 + static_cast<size_t>(trial % 6);
        const Eigen::MatrixXcd m = random_complex(n, n, rng);
        const Complex fast = permanent(m);
        const Complex slow = permanent_by_permutations(m);
        worst = std::max(worst, std::abs(fast - slow) / std::max(1.0, std::abs(slow)));
    }
    const bool pass = worst < 1e-10;
    report(out, "max |Ryser - permutation sum| over 1000 matrices up to 6x6", worst, 0, 1e-10, pass);
    return pass;
}

bool oracle_evolve(std::ostream &out, uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (int trial = 0; trial < 50; trial++) {
        const Eigen::MatrixXcd u = haar_unitary(4, rng);
        for (const auto &input : enumerate_patterns(2, 4)) {
            const FockAmplitudes fast = evolve(input, u);
            const auto slow = fock_transfer_by_expansion(input.occupations, u);
            for (size_t k = 0; k < fast.size(); k++) {
                auto it = slow.find(fast.patterns()[k].occupations);
                const Complex ref = it == slow.end() ? Complex(0) : it->second;
                worst = std::max(worst, std::abs(fast[k] - ref));
            }
        }
    }
    const bool pass = worst < 1e-10;
    report(out, "max |evolve - creation-operator expansion| (n=2, m=4)", worst, 0, 1e-10, pass);
    return pass;
}

bool oracle_design(std::ostream &out, uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst = 0;
    for (int trial = 0; trial < 100; trial++) {
        const DesignCheck c = design_identity_check(random_density(rng), 10000);
        worst = std::max(worst, std::abs(c.quadrature - c.four_point));
    }
    const bool pass = worst < 1e-6;
    report(out, "max |quadrature - 4-point average| over 100 random clones", worst, 0, 1e-6, pass);
    return pass;
}

bool oracle_semiclassical(std::ostream &out, uint64_t seed) {
    const double mc = semiclassical_monte_carlo(1'000'000, seed);
    const bool pass = std::abs(mc - semiclassical_baseline()) < 0.002;
    report(out, "measure-and-prepare Monte Carlo fidelity (1e6 trials)", mc, semiclassical_baseline(), 0.002, pass);
    return pass;
}

}  // namespace

Complex permanent_by_permutations(const Eigen::MatrixXcd &m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("permanent_by_permutations: matrix is not square");
    }
    std::vector<int> sigma(static_cast<size_t>(m.rows()));
    std::iota(sigma.begin(), sigma.end(), 0);
    Complex total = 0;
    do {
        Complex prod = 1;
        for (size_t i = 0; i < sigma.size(); i++) {
            prod *= m(static_cast<Eigen::Index>(i), sigma[i]);
        }
        total += prod;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

Eigen::MatrixXcd random_complex(size_t rows, size_t cols, std::mt19937_64 &rng) {
    std::normal_distribution<double> g(0, 1);
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); i++) {
        for (Eigen::Index j = 0; j < m.cols(); j++) {
            m(i, j) = Complex(g(rng), g(rng));
        }
    }
    return m;
}

Eigen::MatrixXcd haar_unitary(size_t dim, std::mt19937_64 &rng) {
    const Eigen::MatrixXcd z = random_complex(dim, dim, rng) / std::sqrt(2.0);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < q.cols(); k++) {
        const Complex d = r(k, k);
        q.col(k) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1);
    }
    return q;
}

Eigen::Matrix2cd random_density(std::mt19937_64 &rng) {
    const Eigen::MatrixXcd g = random_complex(2, 2, rng);
    Eigen::Matrix2cd rho = g * g.adjoint();
    rho /= rho.trace().real();
    // Exact Hermiticity.
    return (rho + rho.adjoint()) / 2.0;
}

std::map<std::vector<int>, Complex> fock_transfer_by_expansion(
    const std::vector<int> &input, const Eigen::MatrixXcd &u) {
    const size_t m = input.size();
    if (static_cast<size_t>(u.rows()) != m || u.rows() != u.cols()) {
        throw std::invalid_argument("fock_transfer_by_expansion: dimension mismatch");
    }
    std::map<std::vector<int>, Complex> poly{{std::vector<int>(m, 0), Complex(1)}};
    double input_norm = 1;
    for (size_t i = 0; i < m; i++) {
        input_norm *= factorial(input[i]);
        for (int copy = 0; copy < input[i]; copy++) {
            std::map<std::vector<int>, Complex> next;
            for (const auto &[exps, coeff] : poly) {
                for (size_t j = 0; j < m; j++) {
                    std::vector<int> e = exps;
                    e[j]++;
                    next[e] += coeff * u(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
                }
            }
            poly = std::move(next);
        }
    }
    for (auto &[exps, coeff] : poly) {
        double out_norm = 1;
        for (int t : exps) {
            out_norm *= factorial(t);
        }
        coeff *= std::sqrt(out_norm / input_norm);
    }
    return poly;
}

const std::vector<std::string> &names() {
    static const std::vector<std::string> all{"permanent", "evolve", "design-identity", "semiclassical"};
    return all;
}

bool run_named(const std::string &name, std::ostream &out, uint64_t seed) {
    out << "oracle " << name << "\n";
    if (name == "permanent") return oracle_permanent(out, seed);
    if (name == "evolve") return oracle_evolve(out, seed);
    if (name == "design-identity") return oracle_design(out, seed);
    if (name == "semiclassical") return oracle_semiclassical(out, seed);
    throw std::invalid_argument("unknown oracle '" + name + "'");
}

}  // namespace vqclone::oracle
