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

#ifndef CAUSAMETRICS_HARMONIC_HPP
#define CAUSAMETRICS_HARMONIC_HPP

#include <array>
#include <string>
#include <vector>

#include "causametrics/process_matrix.hpp"
#include "causametrics/tensor.hpp"

namespace causametrics {

/// A harmonic clean model: the three bipartite causal relations (A before B,
/// B before A, causally disconnected) in coherent superposition with
/// amplitudes alpha, noiseless identity channels between the parties, and a
/// shared tripartite seed state psi on x (x) y (x) e3 with dim x = dim y = d.
struct HarmonicModel {
    std::array<Complex, 3> alpha{};
    Index dim = 0;       // common dimension of a1, a2, b1, b2
    ComplexVector psi;   // seed state on x (x) y (x) e3
    Index e3_dim = 1;

    double p(int i) const {
        return std::norm(alpha.at(static_cast<std::size_t>(i - 1)));
    }
    double p1() const {
        return std::norm(alpha[0]);
    }
    double p2() const {
        return std::norm(alpha[1]);
    }
    double p3() const {
        return std::norm(alpha[2]);
    }

    Factorization psi_systems() const {
        return Factorization{{"x", dim}, {"y", dim}, {"e3", e3_dim}};
    }
};

enum class PsiPreset {
    Product,  // |0>|0>, trivial e3
    MixedB1,  // |0>_x (x) maximally entangled (y, e3); rho^y = pi
};

/// Seed states for the model family. `Product` gives rho^{b1} = |0><0|;
/// `MixedB1` gives rho^{b1} = pi, the hypothesis of the subspace formulas.
inline std::pair<ComplexVector, Index> preset_psi(PsiPreset kind, Index d) {
    if (d < 2) {
        throw std::invalid_argument("preset_psi: need d >= 2");
    }
    switch (kind) {
        case PsiPreset::Product: {
            ComplexVector v = ComplexVector::Zero(d * d);
            v(0) = 1.0;
            return {v, 1};
        }
        case PsiPreset::MixedB1: {
            ComplexVector ent = identity_choi_vector(d) / std::sqrt(static_cast<double>(d));
            ComplexVector v = kron(basis_ket(0, d), ent);
            return {v, d};
        }
    }
    throw std::invalid_argument("preset_psi: unknown preset");
}

inline HarmonicModel make_harmonic_model(std::array<Complex, 3> alpha, Index d,
                                         ComplexVector psi, Index e3_dim) {
    double total = std::norm(alpha[0]) + std::norm(alpha[1]) + std::norm(alpha[2]);
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("HarmonicModel: |alpha|^2 must sum to 1");
    }
    if (d < 2) {
        throw std::invalid_argument("HarmonicModel: need d >= 2");
    }
    if (e3_dim < 1 || psi.size() != d * d * e3_dim) {
        throw std::invalid_argument("HarmonicModel: psi must live on x (x) y (x) e3");
    }
    double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-9) {
        throw std::invalid_argument("HarmonicModel: psi must be normalized");
    }
    psi /= norm;
    return HarmonicModel{alpha, d, std::move(psi), e3_dim};
}

inline HarmonicModel make_harmonic_model(std::array<Complex, 3> alpha, Index d,
                                         PsiPreset kind = PsiPreset::MixedB1) {
    auto [psi, e3] = preset_psi(kind, d);
    return make_harmonic_model(alpha, d, std::move(psi), e3);
}

/// Marginals of the seed state per the model's (x, y, e3) ordering:
/// rho^{a1} = rho^x, rho^{b1} = rho^y, rho^{a1 b1} = rho^{xy}.
inline ComplexMatrix seed_marginal(const HarmonicModel &m, std::string_view keep) {
    ComplexMatrix rho = m.psi * m.psi.adjoint();
    Factorization f = m.psi_systems();
    if (keep == "x") {
        return partial_trace(rho, f, {"y", "e3"});
    }
    if (keep == "y") {
        return partial_trace(rho, f, {"x", "e3"});
    }
    if (keep == "xy") {
        return partial_trace(rho, f, {"e3"});
    }
    throw std::invalid_argument("seed_marginal: keep must be x, y or xy");
}

inline bool is_maximally_mixed(const ComplexMatrix &rho, double tol = kDefaultTol) {
    Index d = rho.rows();
    return (rho - identity(d) / static_cast<double>(d)).cwiseAbs().maxCoeff() <= tol;
}

/// The pure global vector |w> on g, a1, a2, b1, b2, e1, e2, e3, assembled as
/// the three-branch superposition with orthogonal flag states on g and
/// unnormalized identity-channel vectors |I> = sum_i |ii>. <w|w> = d^2.
struct GlobalModel {
    ComplexVector w;
    Factorization systems;
};

namespace detail {

/// Tensor product of labeled vector pieces, permuted into `target` order.
inline ComplexVector assemble_vector(
    const Factorization &target,
    std::span<const std::pair<ComplexVector, std::vector<std::string>>> pieces) {
    ComplexVector acc(1);
    acc(0) = 1.0;
    std::vector<std::string> order;
    for (const auto &[vec, labels] : pieces) {
        acc = kron(acc, vec);
        order.insert(order.end(), labels.begin(), labels.end());
    }
    if (order.size() != target.size()) {
        throw std::invalid_argument("assemble_vector: pieces must cover every factor");
    }
    std::vector<Index> dims;
    dims.reserve(order.size());
    for (const auto &l : order) {
        dims.push_back(target.dim_of(l));
    }
    std::vector<std::size_t> perm(order.size());
    for (std::size_t k = 0; k < target.size(); ++k) {
        auto it = std::find(order.begin(), order.end(), target[k].label);
        if (it == order.end()) {
            throw std::invalid_argument("assemble_vector: missing factor '" + target[k].label +
                                        "'");
        }
        perm[k] = static_cast<std::size_t>(it - order.begin());
    }
    return permute_vector(acc, dims, perm);
}

}  // namespace detail

inline GlobalModel build_global(const HarmonicModel &m) {
    const Index d = m.dim;
    Factorization systems{{"g", 3},  {"a1", d}, {"a2", d}, {"b1", d},
                          {"b2", d}, {"e1", d}, {"e2", d}, {"e3", m.e3_dim}};
    ComplexVector ident = identity_choi_vector(d);

    // Branch i couples psi and the identity channels per the three causal
    // relations; flag |i> on g keeps the branches orthogonal.
    auto branch_vector = [&](int i) {
        std::vector<std::pair<ComplexVector, std::vector<std::string>>> pieces;
        pieces.push_back({basis_ket(i - 1, 3), {"g"}});
        switch (i) {
            case 1:
                pieces.push_back({m.psi, {"a1", "e2", "e3"}});
                pieces.push_back({ident, {"a2", "b1"}});
                pieces.push_back({ident, {"b2", "e1"}});
                break;
            case 2:
                pieces.push_back({m.psi, {"e1", "b1", "e3"}});
                pieces.push_back({ident, {"b2", "a1"}});
                pieces.push_back({ident, {"a2", "e2"}});
                break;
            case 3:
                pieces.push_back({m.psi, {"a1", "b1", "e3"}});
                pieces.push_back({ident, {"a2", "e1"}});
                pieces.push_back({ident, {"b2", "e2"}});
                break;
            default:
                throw std::invalid_argument("build_global: branch index out of range");
        }
        return detail::assemble_vector(systems, pieces);
    };

    ComplexVector w = ComplexVector::Zero(systems.total_dim());
    for (int i = 1; i <= 3; ++i) {
        if (std::norm(m.alpha[static_cast<std::size_t>(i - 1)]) > 0.0) {
            w += m.alpha[static_cast<std::size_t>(i - 1)] * branch_vector(i);
        }
    }
    return GlobalModel{std::move(w), std::move(systems)};
}

/// W^{GABE} = |w><w|. Only available at desk scale; reduce() does not need it.
inline ComplexMatrix global_projector(const GlobalModel &gm) {
    if (gm.systems.total_dim() > kMaxTotalDim) {
        throw std::invalid_argument("global_projector: global dimension exceeds desk scale");
    }
    return gm.w * gm.w.adjoint();
}

/// The bipartite process matrix Tr_{GE} |w><w|, rescaled so its trace is
/// exactly d^2. Equals the mixture sum_i p_i W_i of the branch matrices.
inline ProcessMatrix reduce(const HarmonicModel &m) {
    GlobalModel gm = build_global(m);
    const Index d = m.dim;

    // Reshape |w> with the kept factors in front, then Tr_GE |w><w| = V V^dag.
    std::vector<std::string> order{"a1", "a2", "b1", "b2", "g", "e1", "e2", "e3"};
    std::vector<Index> dims;
    std::vector<std::size_t> perm;
    for (const auto &l : order) {
        dims.push_back(gm.systems.dim_of(l));
        perm.push_back(gm.systems.index_of(l));
    }
    std::vector<Index> src_dims;
    for (const auto &s : gm.systems) {
        src_dims.push_back(s.dim);
    }
    ComplexVector wp = permute_vector(gm.w, src_dims, perm);

    const Index kept = d * d * d * d;
    const Index traced = gm.systems.total_dim() / kept;
    Eigen::Map<const ComplexMatrix> v(wp.data(), traced, kept);
    // Column-major map of a row-major reshape: v(t, k) = wp(k * traced + t).
    ComplexMatrix reduced = v.transpose() * v.conjugate();

    double trace = reduced.trace().real();
    reduced *= static_cast<double>(d * d) / trace;
    return ProcessMatrix(std::move(reduced), d, d, d, d);
}

/// One term of the mixture, built directly from the seed-state marginals:
///   W_1 = rho^x (x) Phi^{a2 b1} (x) 1^{b2}
///   W_2 = rho^y on b1, Phi on (a1, b2), 1 on a2
///   W_3 = rho^{xy} on (a1, b1), 1 on a2 and b2
struct BranchMatrix {
    int index = 0;
    ProcessMatrix matrix;
};

inline BranchMatrix branch(const HarmonicModel &m, int i) {
    const Index d = m.dim;
    Factorization f{{"a1", d}, {"a2", d}, {"b1", d}, {"b2", d}};
    ComplexVector iv = identity_choi_vector(d);
    ComplexMatrix phi = iv * iv.adjoint();
    std::vector<std::pair<ComplexMatrix, std::vector<std::string>>> pieces;
    switch (i) {
        case 1:
            pieces.push_back({seed_marginal(m, "x"), {"a1"}});
            pieces.push_back({phi, {"a2", "b1"}});
            pieces.push_back({identity(d), {"b2"}});
            break;
        case 2:
            pieces.push_back({seed_marginal(m, "y"), {"b1"}});
            pieces.push_back({phi, {"a1", "b2"}});
            pieces.push_back({identity(d), {"a2"}});
            break;
        case 3:
            pieces.push_back({seed_marginal(m, "xy"), {"a1", "b1"}});
            pieces.push_back({identity(d), {"a2"}});
            pieces.push_back({identity(d), {"b2"}});
            break;
        default:
            throw std::invalid_argument("branch: index must be 1, 2 or 3");
    }
    return BranchMatrix{i, ProcessMatrix(assemble(f, pieces), d, d, d, d)};
}

/// True iff the forward (resp. backward) subspace-transmission hypothesis
/// holds: the receiving party's seed marginal is maximally mixed.
inline bool rho_b1_is_maximally_mixed(const HarmonicModel &m, double tol = kDefaultTol) {
    return is_maximally_mixed(seed_marginal(m, "y"), tol);
}

inline bool rho_a1_is_maximally_mixed(const HarmonicModel &m, double tol = kDefaultTol) {
    return is_maximally_mixed(seed_marginal(m, "x"), tol);
}

}  // namespace causametrics

#endif  // CAUSAMETRICS_HARMONIC_HPP
