// Copyright 2026 The Causametrics Authors
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

#ifndef CAUSAMETRICS_RANDOM_HPP
#define CAUSAMETRICS_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "causametrics/tensor.hpp"

namespace causametrics {

/// Deterministic 64-bit generator (splitmix64). Used instead of the standard
/// distributions so that sampled bytes are identical across platforms and
/// standard libraries for a given seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        while (u == 0.0) {
            u = next_double();
        }
        double v = next_double();
        double r = std::sqrt(-2.0 * std::log(u));
        double theta = 2.0 * std::numbers::pi * v;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Complex next_complex_gaussian() {
        return Complex(next_gaussian(), next_gaussian());
    }

    /// Independent substream for worker `index`; reproducible regardless of
    /// how samples are distributed over threads.
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        Rng mixer(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        mixer.next_u64();
        return Rng(mixer.next_u64());
    }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline ComplexMatrix random_gaussian_matrix(Rng &rng, Index rows, Index cols) {
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = rng.next_complex_gaussian();
        }
    }
    return m;
}

/// Haar-random isometry (rows >= cols) by modified Gram-Schmidt on a complex
/// Gaussian matrix; deterministic for a given generator state.
inline ComplexMatrix random_isometry(Rng &rng, Index rows, Index cols) {
    if (rows < cols) {
        throw std::invalid_argument("random_isometry: need rows >= cols");
    }
    ComplexMatrix g = random_gaussian_matrix(rng, rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index k = 0; k < j; ++k) {
            g.col(j) -= g.col(k).dot(g.col(j)) * g.col(k);
        }
        double n = g.col(j).norm();
        while (n < 1e-8) {
            // Degenerate draw; resample the column.
            for (Index i = 0; i < rows; ++i) {
                g(i, j) = rng.next_complex_gaussian();
            }
            for (Index k = 0; k < j; ++k) {
                g.col(j) -= g.col(k).dot(g.col(j)) * g.col(k);
            }
            n = g.col(j).norm();
        }
        g.col(j) /= n;
    }
    return g;
}

inline ComplexMatrix random_unitary(Rng &rng, Index d) {
    return random_isometry(rng, d, d);
}

inline ComplexVector random_pure_state(Rng &rng, Index d) {
    ComplexVector v(d);
    for (Index i = 0; i < d; ++i) {
        v(i) = rng.next_complex_gaussian();
    }
    return v / v.norm();
}

/// Random full-rank density matrix via the Gram construction G G^dag / Tr.
inline ComplexMatrix random_density_matrix(Rng &rng, Index d) {
    ComplexMatrix g = random_gaussian_matrix(rng, d, d);
    ComplexMatrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

/// Kraus operators of a Haar-random CPTP map d_in -> d_out, from a random
/// Stinespring isometry with environment dimension `env_dim`.
inline std::vector<ComplexMatrix> random_kraus(Rng &rng, Index d_in, Index d_out,
                                               Index env_dim = 0) {
    if (env_dim <= 0) {
        env_dim = (d_in + d_out - 1) / d_out;  // smallest env admitting an isometry
        env_dim = std::max<Index>(env_dim, 2);
    }
    ComplexMatrix v = random_isometry(rng, d_out * env_dim, d_in);
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(static_cast<std::size_t>(env_dim));
    for (Index e = 0; e < env_dim; ++e) {
        ComplexMatrix k(d_out, d_in);
        for (Index o = 0; o < d_out; ++o) {
            k.row(o) = v.row(o * env_dim + e);
        }
        kraus.push_back(std::move(k));
    }
    return kraus;
}

/// Choi operator of a Haar-random CPTP map.
inline ComplexMatrix random_cptp_choi(Rng &rng, Index d_in, Index d_out, Index env_dim = 0) {
    auto kraus = random_kraus(rng, d_in, d_out, env_dim);
    return choi(std::span<const ComplexMatrix>(kraus), d_in, d_out);
}

/// A random CPTP instrument: Choi operators of CP maps summing to a channel.
/// Built by resolving the environment of a random isometry in its basis.
inline std::vector<ComplexMatrix> random_instrument(Rng &rng, Index d_in, Index d_out,
                                                    Index n_elements) {
    if (n_elements < 1) {
        throw std::invalid_argument("random_instrument: need at least one element");
    }
    ComplexMatrix v = random_isometry(rng, d_out * n_elements, d_in);
    std::vector<ComplexMatrix> elements;
    elements.reserve(static_cast<std::size_t>(n_elements));
    for (Index e = 0; e < n_elements; ++e) {
        ComplexMatrix k(d_out, d_in);
        for (Index o = 0; o < d_out; ++o) {
            k.row(o) = v.row(o * n_elements + e);
        }
        elements.push_back(choi({k}, d_in, d_out));
    }
    return elements;
}

/// Random separable state sum_i q_i rho_i (x) sigma_i on two factors.
inline ComplexMatrix random_separable_state(Rng &rng, Index d_left, Index d_right,
                                            int n_terms = 4) {
    ComplexMatrix state = ComplexMatrix::Zero(d_left * d_right, d_left * d_right);
    std::vector<double> weights(static_cast<std::size_t>(n_terms));
    double total = 0.0;
    for (auto &w : weights) {
        w = rng.next_double() + 1e-6;
        total += w;
    }
    for (auto &w : weights) {
        state += (w / total) * kron(random_density_matrix(rng, d_left),
                                    random_density_matrix(rng, d_right));
    }
    return state;
}

}  // namespace causametrics

#endif  // CAUSAMETRICS_RANDOM_HPP
