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

#ifndef CAUSAMETRICS_CAPACITY_HPP
#define CAUSAMETRICS_CAPACITY_HPP

#include <cmath>
#include <stdexcept>

#include "causametrics/harmonic.hpp"
#include "causametrics/process_matrix.hpp"

namespace causametrics {

enum class Task { Ent, Sub };

/// Raised when a closed form is requested outside its hypothesis, e.g. the
/// subspace formula with rho^{b1} != pi, where no formula exists.
class HypothesisError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Absolute slack applied before truncating the code-dimension bound, so that
/// analytically exact integer boundaries land on the inclusive side.
inline constexpr double kBoundarySlack = 1e-12;

/// Entanglement transmission fidelity of the optimal protocol on a harmonic
/// clean model: p1 + (1 - p1) / m^2, for every m up to the subsystem
/// dimension.
inline double f_ent(double p1, Index m) {
    if (p1 < 0.0 || p1 > 1.0 || m < 1) {
        throw std::invalid_argument("f_ent: need 0 <= p1 <= 1 and m >= 1");
    }
    return p1 + (1.0 - p1) / static_cast<double>(m * m);
}

/// Minimum output fidelity of the optimal protocol, p1 + (1 - p1) / m.
/// Only meaningful under the subspace hypothesis rho^{b1} = pi; callers
/// evaluating a model must gate on that flag (see q_sub).
inline double f_min(double p1, Index m) {
    if (p1 < 0.0 || p1 > 1.0 || m < 1) {
        throw std::invalid_argument("f_min: need 0 <= p1 <= 1 and m >= 1");
    }
    return p1 + (1.0 - p1) / static_cast<double>(m);
}

/// The closed-form inputs of a capacity evaluation: the branch weights, the
/// subsystem dimension, and the subspace-hypothesis flags of the model.
struct CapacityQuery {
    Task task = Task::Ent;
    Direction direction = Direction::AtoB;
    double epsilon = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    Index dim = 2;
    bool rho_b1_maximally_mixed = false;
    bool rho_a1_maximally_mixed = false;

    static CapacityQuery from_model(const HarmonicModel &m, Task task, Direction dir,
                                    double epsilon) {
        CapacityQuery q;
        q.task = task;
        q.direction = dir;
        q.epsilon = epsilon;
        q.p1 = m.p1();
        q.p2 = m.p2();
        q.dim = m.dim;
        q.rho_b1_maximally_mixed = rho_b1_is_maximally_mixed(m);
        q.rho_a1_maximally_mixed = rho_a1_is_maximally_mixed(m);
        return q;
    }
};

namespace detail {

inline void check_capacity_args(double p, double epsilon, Index d) {
    if (p < 0.0 || p > 1.0 || epsilon < 0.0 || epsilon > 1.0 || d < 1) {
        throw std::invalid_argument("capacity: need p, epsilon in [0,1] and d >= 1");
    }
}

/// Largest integer m with m <= bound (with boundary slack) and m <= cap.
inline Index floor_code_dim(double bound, Index cap) {
    Index m = static_cast<Index>(std::floor(bound + kBoundarySlack));
    return std::clamp<Index>(m, 1, cap);
}

}  // namespace detail

/// Largest achievable code dimension for entanglement transmission at error
/// tolerance epsilon, with p the weight of the transmitting branch.
inline Index ent_code_dim(double p, Index d, double epsilon) {
    detail::check_capacity_args(p, epsilon, d);
    if (p >= 1.0 - epsilon) {
        return d;
    }
    double x = epsilon / (1.0 - p);
    if (x >= 1.0) {  // rounding fuzz at the p = 1 - epsilon boundary
        return d;
    }
    double bound = std::sqrt(1.0 / (1.0 - x));
    return detail::floor_code_dim(bound, d);
}

/// Subspace-transmission analogue; the square root is replaced by the plain
/// reciprocal.
inline Index sub_code_dim(double p, Index d, double epsilon) {
    detail::check_capacity_args(p, epsilon, d);
    if (p >= 1.0 - epsilon) {
        return d;
    }
    double x = epsilon / (1.0 - p);
    if (x >= 1.0) {
        return d;
    }
    double bound = 1.0 / (1.0 - x);
    return detail::floor_code_dim(bound, d);
}

/// One-shot entanglement transmission capacity in qubits (log base 2).
/// Forward uses p1, backward uses p2; everything else about the model is
/// irrelevant.
inline double q_ent(const CapacityQuery &q) {
    double p = q.direction == Direction::AtoB ? q.p1 : q.p2;
    return std::log2(static_cast<double>(ent_code_dim(p, q.dim, q.epsilon)));
}

/// One-shot subspace transmission capacity. Requires the receiving party's
/// seed marginal to be maximally mixed; no closed form exists otherwise.
inline double q_sub(const CapacityQuery &q) {
    bool hypothesis =
        q.direction == Direction::AtoB ? q.rho_b1_maximally_mixed : q.rho_a1_maximally_mixed;
    if (!hypothesis) {
        throw HypothesisError(
            "q_sub: no closed form when the receiving marginal is not maximally mixed");
    }
    double p = q.direction == Direction::AtoB ? q.p1 : q.p2;
    return std::log2(static_cast<double>(sub_code_dim(p, q.dim, q.epsilon)));
}

/// The capacity vanishes exactly when p1 < 1 - (4/3) epsilon (strict). The
/// boundary slack keeps analytically exact boundary points on the positive
/// side under floating-point evaluation, mirroring the code-dimension floor.
inline bool zero_capacity_iff(double p1, double epsilon) {
    return p1 < 1.0 - (4.0 / 3.0) * epsilon - kBoundarySlack;
}

/// The capacity is maximal (log d) exactly when epsilon / (1 - p1) >= 1 - 1/d^2,
/// reading the ratio as +infinity at p1 = 1. Slack as in zero_capacity_iff.
inline bool max_capacity_iff(double p1, Index d, double epsilon) {
    double threshold = 1.0 - 1.0 / static_cast<double>(d * d);
    if (p1 >= 1.0) {
        return true;
    }
    return epsilon / (1.0 - p1) >= threshold - kBoundarySlack;
}

/// Best non-signalling performance: every non-signalling resource has
/// entanglement fidelity exactly 1/m^2, so rate log m needs 1/m^2 >= 1 - eps.
inline Index nonsignalling_code_dim(Index d, double epsilon) {
    detail::check_capacity_args(0.0, epsilon, d);
    if (epsilon >= 1.0) {
        return d;
    }
    double bound = std::sqrt(1.0 / (1.0 - epsilon));
    return detail::floor_code_dim(bound, d);
}

inline double q_ent_nonsignalling_baseline(Index d, double epsilon) {
    return std::log2(static_cast<double>(nonsignalling_code_dim(d, epsilon)));
}

/// Normalization by the supremum over correlations on the same systems; the
/// noiseless model attains log d for either task.
inline double normalize_capacity(double value, Index d, Task /*task*/ = Task::Ent) {
    if (value < 0.0) {
        throw std::invalid_argument("normalize_capacity: value must be non-negative");
    }
    if (d <= 1) {
        return 0.0;
    }
    return value / std::log2(static_cast<double>(d));
}

}  // namespace causametrics

#endif  // CAUSAMETRICS_CAPACITY_HPP
