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

#ifndef CAUSAMETRICS_RECONSTRUCT_HPP
#define CAUSAMETRICS_RECONSTRUCT_HPP

#include <functional>
#include <optional>

#include "causametrics/capacity.hpp"

namespace causametrics {

/// A one-directional map epsilon -> Q_ent, either closed-form (from a model)
/// or a step function through sampled points. epsilon is restricted to the
/// open interval (0, 1): at epsilon = 1 every rate is vacuously achievable,
/// which would defeat the disconnected-model clause of the reconstruction.
class CapacityProfile {
  public:
    CapacityProfile(Direction dir, std::function<double(double)> query)
        : direction_(dir), query_(std::move(query)) {}

    static CapacityProfile from_model(const HarmonicModel &m, Direction dir) {
        double p = dir == Direction::AtoB ? m.p1() : m.p2();
        Index d = m.dim;
        return CapacityProfile(dir, [p, d](double eps) {
            CapacityQuery q;
            q.direction = Direction::AtoB;
            q.p1 = p;
            q.dim = d;
            q.epsilon = eps;
            return q_ent(q);
        });
    }

    /// Step-function profile through (epsilon, q) samples sorted by epsilon;
    /// queries below the first sample return the first value. q must be
    /// non-decreasing.
    static CapacityProfile from_samples(Direction dir,
                                        std::vector<std::pair<double, double>> samples) {
        if (samples.empty()) {
            throw std::invalid_argument("CapacityProfile: need at least one sample");
        }
        std::sort(samples.begin(), samples.end());
        for (std::size_t i = 1; i < samples.size(); ++i) {
            if (samples[i].second < samples[i - 1].second - 1e-12) {
                throw std::invalid_argument("CapacityProfile: q must be non-decreasing");
            }
        }
        return CapacityProfile(dir, [samples = std::move(samples)](double eps) {
            auto it = std::upper_bound(samples.begin(), samples.end(),
                                       std::make_pair(eps, std::numeric_limits<double>::max()));
            if (it == samples.begin()) {
                return samples.front().second;
            }
            return std::prev(it)->second;
        });
    }

    Direction direction() const {
        return direction_;
    }

    double operator()(double eps) const {
        if (eps <= 0.0 || eps >= 1.0) {
            throw std::invalid_argument("CapacityProfile: epsilon must lie in (0, 1)");
        }
        return query_(eps);
    }

  private:
    Direction direction_;
    std::function<double(double)> query_;
};

/// Locates the threshold eps* = (3/4)(1 - p) where the profile turns
/// positive; the threshold point itself is on the positive side. Returns the
/// sentinel 1 when the profile is zero throughout (0, 3/4), meaning p = 0,
/// and the sentinel 0 when it is positive down to the smallest probe,
/// meaning p = 1.
inline double find_zero_threshold(const CapacityProfile &profile, double tol_eps) {
    if (tol_eps <= 0.0 || tol_eps >= 1.0) {
        throw std::invalid_argument("find_zero_threshold: tol_eps must lie in (0, 1)");
    }
    // Coarse monotonicity guard before trusting bisection.
    double prev = -1.0;
    for (int i = 1; i <= 32; ++i) {
        double q = profile(i / 33.0);
        if (q < prev - 1e-12) {
            throw std::invalid_argument("find_zero_threshold: profile is not non-decreasing");
        }
        prev = std::max(prev, q);
    }

    const double domain = 0.75;
    double lo = domain * tol_eps / 2.0;
    double hi = domain * (1.0 - tol_eps / 2.0);
    if (profile(lo) > 0.0) {
        return 0.0;
    }
    if (profile(hi) == 0.0) {
        return 1.0;
    }
    // Invariant: q(lo) = 0 < q(hi). The profile is exact, so push the
    // bracket well below tol_eps; each probe is one closed-form evaluation.
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-13; ++iter) {
        double mid = (lo + hi) / 2.0;
        if (profile(mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return (lo + hi) / 2.0;
}

struct ReconstructionDiagnostics {
    double threshold_fwd = 0.0;  // sentinel 0 -> p1 = 1, sentinel 1 -> p1 = 0
    double threshold_bwd = 0.0;
    double norm_residual = 0.0;  // |p1 + p2 + p3 - 1| before clamping
    double dim_residual = 0.0;   // distance of 2^q to the reported integer
};

struct ReconstructionResult {
    std::array<double, 3> alpha_abs{};
    std::optional<Index> dim;  // empty when |alpha_3| = 1 (indeterminate)
    ReconstructionDiagnostics diagnostics;
};

/// Reconstruction from capacity profiles: reads p1 and p2 off the zero-capacity
/// thresholds 1 - (4/3) eps*, then the dimension from the capacity value at
/// an epsilon strictly above max(1 - p1, 1 - p2). When both thresholds
/// report p = 0 the model is causally disconnected and the dimension is
/// indeterminate.
inline ReconstructionResult recover(const CapacityProfile &forward,
                                    const CapacityProfile &backward, double tol_eps) {
    if (forward.direction() != Direction::AtoB || backward.direction() != Direction::BtoA) {
        throw std::invalid_argument("recover: need one forward and one backward profile");
    }
    ReconstructionResult result;
    result.diagnostics.threshold_fwd = find_zero_threshold(forward, tol_eps);
    result.diagnostics.threshold_bwd = find_zero_threshold(backward, tol_eps);

    auto p_from_threshold = [](double eps_star) {
        return std::clamp(1.0 - (4.0 / 3.0) * eps_star, 0.0, 1.0);
    };
    double p1 = p_from_threshold(result.diagnostics.threshold_fwd);
    double p2 = p_from_threshold(result.diagnostics.threshold_bwd);

    double slack = std::max(4.0 * tol_eps, 1e-9);
    if (p1 + p2 > 1.0 + slack) {
        throw std::domain_error("recover: profiles are inconsistent (p1 + p2 > 1)");
    }
    double p3 = std::clamp(1.0 - p1 - p2, 0.0, 1.0);
    result.diagnostics.norm_residual = std::abs(p1 + p2 + p3 - 1.0);
    result.alpha_abs = {std::sqrt(p1), std::sqrt(p2), std::sqrt(p3)};

    double positive_gate = std::max(2.0 * tol_eps, 1e-9);
    const CapacityProfile *read_from = nullptr;
    double p_read = 0.0;
    if (p1 >= p2 && p1 > positive_gate) {
        read_from = &forward;
        p_read = p1;
    } else if (p2 > positive_gate) {
        read_from = &backward;
        p_read = p2;
    }
    if (read_from != nullptr) {
        double eps_read = 1.0 - p_read / 2.0;
        double q = (*read_from)(eps_read);
        double dim_value = std::exp2(q);
        Index dim = static_cast<Index>(std::llround(dim_value));
        result.diagnostics.dim_residual = std::abs(dim_value - static_cast<double>(dim));
        result.dim = dim;
    }
    return result;
}

inline ReconstructionResult recover(const HarmonicModel &m, double tol_eps) {
    return recover(CapacityProfile::from_model(m, Direction::AtoB),
                   CapacityProfile::from_model(m, Direction::BtoA), tol_eps);
}

}  // namespace causametrics

#endif  // CAUSAMETRICS_RECONSTRUCT_HPP
