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

#ifndef CAUSAMETRICS_PROCESS_MATRIX_HPP
#define CAUSAMETRICS_PROCESS_MATRIX_HPP

#include <optional>
#include <string>
#include <vector>

#include "causametrics/tensor.hpp"

namespace causametrics {

enum class Party { A, B };

enum class Direction { AtoB, BtoA };

inline const char *to_string(Direction d) {
    return d == Direction::AtoB ? "fwd" : "bwd";
}

/// A bipartite process matrix: a PSD operator on a1 (x) a2 (x) b1 (x) b2
/// with trace |a2||b2|, assigning joint outcome probabilities to local
/// instruments through the generalized Born rule. Party A's instrument maps
/// a1 to a2, party B's maps b1 to b2.
struct ProcessMatrix {
    ComplexMatrix matrix;
    Factorization systems;  // fixed label order a1, a2, b1, b2

    ProcessMatrix() = default;

    ProcessMatrix(ComplexMatrix m, Index dim_a1, Index dim_a2, Index dim_b1, Index dim_b2)
        : matrix(std::move(m)),
          systems{{"a1", dim_a1}, {"a2", dim_a2}, {"b1", dim_b1}, {"b2", dim_b2}} {
        if (matrix.rows() != matrix.cols() || matrix.rows() != systems.total_dim()) {
            throw std::invalid_argument("ProcessMatrix: matrix does not match system dimensions");
        }
    }

    Index dim(std::string_view label) const {
        return systems.dim_of(label);
    }

    Index dim_a1() const {
        return systems[0].dim;
    }
    Index dim_a2() const {
        return systems[1].dim;
    }
    Index dim_b1() const {
        return systems[2].dim;
    }
    Index dim_b2() const {
        return systems[3].dim;
    }

    /// Required trace |a2||b2| of a valid process matrix.
    double required_trace() const {
        return static_cast<double>(dim_a2() * dim_b2());
    }

    LabeledOp as_labeled() const {
        return LabeledOp(matrix, systems);
    }
};

/// One outcome of a local instrument, as the Choi operator of a CP map from
/// the party's input system to its output system.
struct InstrumentElement {
    ComplexMatrix choi;
    Party party = Party::A;
};

/// A complete instrument: CP elements whose sum is trace preserving.
struct Instrument {
    std::vector<InstrumentElement> elements;

    ComplexMatrix total() const {
        if (elements.empty()) {
            throw std::invalid_argument("Instrument: no elements");
        }
        ComplexMatrix sum = elements[0].choi;
        for (std::size_t i = 1; i < elements.size(); ++i) {
            sum += elements[i].choi;
        }
        return sum;
    }

    bool is_valid(Index d_in, Index d_out, double tol = kDefaultTol) const {
        if (elements.empty()) {
            return false;
        }
        for (const auto &e : elements) {
            if (e.choi.rows() != d_in * d_out || !is_psd(e.choi, tol)) {
                return false;
            }
        }
        return is_cptp(total(), d_in, d_out, tol);
    }
};

/// Choi operator of the completely depolarizing channel d_in -> d_out.
inline ComplexMatrix depolarizing_choi(Index d_in, Index d_out) {
    return kron(identity(d_in), identity(d_out)) / static_cast<double>(d_out);
}

namespace detail {

/// Hermitian basis of L(C^{d1} (x) C^{d2}) projected onto the direction
/// space of CPTP Chois, i.e. onto {D : Tr_out D = 0}, each element scaled to
/// unit Hilbert-Schmidt norm. Enumeration order is fixed by basis index.
inline std::vector<ComplexMatrix> cptp_direction_basis(Index d_in, Index d_out) {
    const Index n = d_in * d_out;
    Factorization f{{"in", d_in}, {"out", d_out}};
    std::vector<ComplexMatrix> basis;
    auto push_projected = [&](ComplexMatrix h) {
        ComplexMatrix marginal = partial_trace(h, f, {"out"});
        h -= kron(marginal, identity(d_out)) / static_cast<double>(d_out);
        double norm = hs_norm(h);
        if (norm > 1e-12) {
            basis.push_back(h / norm);
        }
    };
    for (Index k = 0; k < n; ++k) {
        for (Index l = k; l < n; ++l) {
            ComplexMatrix h = ComplexMatrix::Zero(n, n);
            if (k == l) {
                h(k, k) = 1.0;
                push_projected(std::move(h));
            } else {
                h(k, l) = 1.0 / std::numbers::sqrt2;
                h(l, k) = 1.0 / std::numbers::sqrt2;
                push_projected(h);
                h(k, l) = Complex(0.0, 1.0 / std::numbers::sqrt2);
                h(l, k) = Complex(0.0, -1.0 / std::numbers::sqrt2);
                push_projected(std::move(h));
            }
        }
    }
    return basis;
}

/// R(D) = Tr_party[(D^T (x) I_other) W]: the other party's effective operator
/// response to the direction D on `party`'s systems. The link contraction
/// supplies the transpose.
inline ComplexMatrix signal_response(const ProcessMatrix &w, Party party,
                                     const ComplexMatrix &direction) {
    std::vector<std::string> party_labels =
        party == Party::A ? std::vector<std::string>{"a1", "a2"}
                          : std::vector<std::string>{"b1", "b2"};
    Factorization pf{{party_labels[0], w.dim(party_labels[0])},
                     {party_labels[1], w.dim(party_labels[1])}};
    LabeledOp probe(direction, pf);
    return link(probe, w.as_labeled()).mat;
}

}  // namespace detail

struct SignalTestResult {
    bool signals = false;
    double residual = 0.0;
};

/// Linear signalling test. For A -> B it sweeps a basis of Hermitian
/// directions D on a1 (x) a2 with Tr_a2 D = 0 (the direction space of the
/// affine hull of CPTP Chois) and reports the largest operator norm of
/// Tr_a1a2[(D^T (x) I) W]. The threshold is tol times the operator norm of W.
inline SignalTestResult can_signal(const ProcessMatrix &w, Direction direction,
                                   double tol = kDefaultTol) {
    Party sender = direction == Direction::AtoB ? Party::A : Party::B;
    Index d_in = sender == Party::A ? w.dim_a1() : w.dim_b1();
    Index d_out = sender == Party::A ? w.dim_a2() : w.dim_b2();
    auto basis = detail::cptp_direction_basis(d_in, d_out);
    double residual = 0.0;
    for (const auto &dir : basis) {
        residual = std::max(residual, op_norm(detail::signal_response(w, sender, dir)));
    }
    return {residual > tol * std::max(1.0, op_norm(w.matrix)), residual};
}

/// Singular values of the full direction-space -> response linear map in the
/// Hilbert-Schmidt norms. Invariant under local unitaries on either party.
inline std::vector<double> signalling_spectrum(const ProcessMatrix &w, Direction direction) {
    Party sender = direction == Direction::AtoB ? Party::A : Party::B;
    Index d_in = sender == Party::A ? w.dim_a1() : w.dim_b1();
    Index d_out = sender == Party::A ? w.dim_a2() : w.dim_b2();
    auto basis = detail::cptp_direction_basis(d_in, d_out);

    // Orthonormalize the (redundant) spanning set, mapping each orthonormal
    // direction through the response; singular values of the stacked map.
    std::vector<ComplexMatrix> ortho;
    std::vector<ComplexMatrix> responses;
    for (const auto &dir : basis) {
        ComplexMatrix d = dir;
        for (const auto &o : ortho) {
            d -= (o.conjugate().cwiseProduct(d)).sum() * o;
        }
        if (hs_norm(d) < 1e-10) {
            continue;
        }
        d /= hs_norm(d);
        ortho.push_back(d);
        responses.push_back(detail::signal_response(w, sender, d));
    }
    if (responses.empty()) {
        return {};
    }
    const Index resp_dim = responses[0].size();
    ComplexMatrix stacked(static_cast<Index>(responses.size()), resp_dim);
    for (std::size_t i = 0; i < responses.size(); ++i) {
        stacked.row(static_cast<Index>(i)) =
            Eigen::Map<const ComplexVector>(responses[i].data(), resp_dim).transpose();
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(stacked);
    std::vector<double> out(svd.singularValues().data(),
                            svd.singularValues().data() + svd.singularValues().size());
    return out;
}

struct ValidityReport {
    bool psd = false;
    bool trace_ok = false;
    bool normalized = false;
    double hermiticity_residual = 0.0;
    double min_eigenvalue = 0.0;
    double trace_residual = 0.0;
    double base_probability_residual = 0.0;
    double affine_residual = 0.0;

    bool all_ok() const {
        return psd && trace_ok && normalized;
    }
};

/// Checks the three process-matrix conditions: positive semi-definiteness,
/// trace |a2||b2|, and probability normalization over all CPTP instrument
/// pairs. The last is verified finitely: the Born probability is affine in
/// each local Choi, so it equals one everywhere iff it equals one at the
/// completely depolarizing pair and every first- and mixed second-order
/// directional correction along the CPTP direction spaces vanishes.
inline ValidityReport validate(const ProcessMatrix &w, double tol = kDefaultTol) {
    ValidityReport report;
    const ComplexMatrix &m = w.matrix;
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    report.hermiticity_residual = (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
    if (report.hermiticity_residual <= tol) {
        ComplexMatrix herm = (m + m.adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
        report.min_eigenvalue = solver.eigenvalues()(0);
        report.psd = report.min_eigenvalue >= -tol * std::max(1.0, solver.eigenvalues().maxCoeff());
    }
    report.trace_residual = std::abs(m.trace() - Complex(w.required_trace()));
    report.trace_ok = report.trace_residual <= tol * w.required_trace();

    ComplexMatrix base_a = depolarizing_choi(w.dim_a1(), w.dim_a2());
    ComplexMatrix base_b = depolarizing_choi(w.dim_b1(), w.dim_b2());
    auto dirs_a = detail::cptp_direction_basis(w.dim_a1(), w.dim_a2());
    auto dirs_b = detail::cptp_direction_basis(w.dim_b1(), w.dim_b2());

    // Responses R_B(D_A) cover the base pair, both first-order terms, and all
    // mixed second-order terms:
    //   p(base_a + D_A, base_b + D_B) = p0 + sum_{ij} (D_B)_{ij} R_B(D_A)_{ij} + ...
    auto pair_with = [](const ComplexMatrix &probe, const ComplexMatrix &response) {
        return (probe.cwiseProduct(response)).sum();
    };
    ComplexMatrix r_base = detail::signal_response(w, Party::A, base_a);
    report.base_probability_residual = std::abs(pair_with(base_b, r_base) - Complex(1.0));

    double affine = 0.0;
    for (const auto &da : dirs_a) {
        ComplexMatrix r = detail::signal_response(w, Party::A, da);
        affine = std::max(affine, std::abs(pair_with(base_b, r)));
        for (const auto &db : dirs_b) {
            affine = std::max(affine, std::abs(pair_with(db, r)));
        }
    }
    for (const auto &db : dirs_b) {
        ComplexMatrix r = detail::signal_response(w, Party::B, db);
        affine = std::max(affine, std::abs(pair_with(base_a, r)));
    }
    report.affine_residual = affine;
    report.normalized =
        report.base_probability_residual <= tol * scale && affine <= tol * scale;
    return report;
}

/// Generalized Born rule: Tr[(mA (x) mB)^T W]. The result is clamped to
/// [0, 1]; a value outside [-tol, 1 + tol] indicates an invalid process
/// matrix or instrument element and raises an error.
inline double joint_probability(const ProcessMatrix &w, const InstrumentElement &m_a,
                                const InstrumentElement &m_b, double tol = kDefaultTol) {
    if (m_a.choi.rows() != w.dim_a1() * w.dim_a2() ||
        m_b.choi.rows() != w.dim_b1() * w.dim_b2()) {
        throw std::invalid_argument("joint_probability: element systems do not match W");
    }
    LabeledOp probe(kron(m_a.choi, m_b.choi), w.systems);
    Complex p = link(probe, w.as_labeled()).mat(0, 0);
    double scale = std::max(1.0, op_norm(w.matrix));
    if (std::abs(p.imag()) > tol * scale || p.real() < -tol * scale ||
        p.real() > 1.0 + tol * scale) {
        throw std::domain_error("joint_probability: probability outside [0,1]; "
                                "invalid process matrix or instrument element");
    }
    return std::clamp(p.real(), 0.0, 1.0);
}

/// Dimensions of the side systems threaded through contract().
struct ContractDims {
    Index held_m = 1;       // system M kept untouched by A
    Index held_mprime = 1;  // system M' fed into A's operation
    Index keep_a = 1;       // K_A, extra output kept by A
    Index keep_b = 1;       // K_B, extra output kept by B
};

struct ContractResult {
    ComplexMatrix state;  // density operator on M (x) K_A (x) K_B, trace 1
    double raw_trace = 0.0;
};

/// Inserts local operations into the process matrix and returns the joint
/// output state on M (x) K_A (x) K_B.
///
///   op_a: Choi of a CPTP map M' (x) a1 -> a2 (x) K_A  (factors M',a1,a2,K_A)
///   op_b: Choi of a CPTP map b1 -> b2 (x) K_B         (factors b1,b2,K_B)
///   held: input state on M (x) M'
///
/// Realized as an iterated link product; linear (affine) in W.
inline ContractResult contract(const ProcessMatrix &w, const ComplexMatrix &op_a,
                               const ComplexMatrix &op_b, const ComplexMatrix &held,
                               const ContractDims &dims, double tol = kDefaultTol) {
    const Index da1 = w.dim_a1(), da2 = w.dim_a2(), db1 = w.dim_b1(), db2 = w.dim_b2();
    if (held.rows() != dims.held_m * dims.held_mprime || held.rows() != held.cols()) {
        throw std::invalid_argument("contract: held state does not match declared dimensions");
    }
    if (op_a.rows() != dims.held_mprime * da1 * da2 * dims.keep_a) {
        throw std::invalid_argument("contract: op_a does not match declared dimensions");
    }
    if (op_b.rows() != db1 * db2 * dims.keep_b) {
        throw std::invalid_argument("contract: op_b does not match declared dimensions");
    }
    if (!is_cptp(op_a, dims.held_mprime * da1, da2 * dims.keep_a, tol) ||
        !is_cptp(op_b, db1, db2 * dims.keep_b, tol)) {
        throw std::invalid_argument("contract: local operations must be CPTP");
    }

    LabeledOp held_op(held, Factorization{{"M", dims.held_m}, {"Mp", dims.held_mprime}});
    LabeledOp enc(op_a, Factorization{{"Mp", dims.held_mprime},
                                      {"a1", da1},
                                      {"a2", da2},
                                      {"KA", dims.keep_a}});
    LabeledOp dec(op_b, Factorization{{"b1", db1}, {"b2", db2}, {"KB", dims.keep_b}});

    LabeledOp stage = link(held_op, enc);        // on M, a1, a2, KA
    stage = link(stage, w.as_labeled());         // on M, KA, b1, b2
    stage = link(stage, dec);                    // on M, KA, KB
    std::vector<std::string> order{"M", "KA", "KB"};
    ComplexMatrix out = permute_factors(stage.mat, stage.systems, order);

    ContractResult result;
    result.raw_trace = out.trace().real();
    if (result.raw_trace <= 0.0) {
        throw std::domain_error("contract: output has non-positive trace");
    }
    result.state = out / result.raw_trace;
    return result;
}

/// Where a local pre- or post-processing channel attaches to a process
/// matrix: before the party's input or after the party's output.
enum class LocalLeg { PreA1, PostA2, PreB1, PostB2 };

/// The process matrix obtained when one party inserts a fixed channel before
/// its input or after its output. Realized by linking the channel's Choi
/// onto the corresponding leg; preserves validity.
inline ProcessMatrix degrade(const ProcessMatrix &w, const ComplexMatrix &channel_choi,
                             LocalLeg leg, double tol = kDefaultTol) {
    std::string contracted;
    bool w_feeds_channel = false;
    switch (leg) {
        case LocalLeg::PreA1:
            contracted = "a1";
            w_feeds_channel = true;
            break;
        case LocalLeg::PostA2:
            contracted = "a2";
            break;
        case LocalLeg::PreB1:
            contracted = "b1";
            w_feeds_channel = true;
            break;
        case LocalLeg::PostB2:
            contracted = "b2";
            break;
    }
    Index d = w.dim(contracted);
    if (channel_choi.rows() != d * d) {
        throw std::invalid_argument("degrade: channel must map the leg's system to itself");
    }
    if (!is_cptp(channel_choi, d, d, tol)) {
        throw std::invalid_argument("degrade: channel must be CPTP");
    }
    // Pre-legs: the state W emits at the party's input port flows into the
    // channel, so the channel's Choi input carries W's label. Post-legs: the
    // instrument's output passes through the channel into W's port, so the
    // channel's Choi output carries W's label.
    std::string fresh = contracted + "'";
    Factorization cf = w_feeds_channel
                           ? Factorization{{contracted, d}, {fresh, d}}
                           : Factorization{{fresh, d}, {contracted, d}};
    LabeledOp chan(channel_choi, cf);
    LabeledOp out = link(w.as_labeled(), chan);

    std::vector<std::string> order;
    for (const auto &s : w.systems) {
        order.push_back(s.label == contracted ? fresh : s.label);
    }
    ComplexMatrix m = permute_factors(out.mat, out.systems, order);
    return ProcessMatrix(std::move(m), w.dim_a1(), w.dim_a2(), w.dim_b1(), w.dim_b2());
}

/// W with the roles of the parties exchanged: a backward transmission
/// through W is a forward transmission through the swapped matrix.
inline ProcessMatrix swap_parties(const ProcessMatrix &w) {
    std::vector<std::string> order{"b1", "b2", "a1", "a2"};
    ComplexMatrix m = permute_factors(w.matrix, w.systems, order);
    return ProcessMatrix(std::move(m), w.dim_b1(), w.dim_b2(), w.dim_a1(), w.dim_a2());
}

/// Conjugates one system of W by a unitary (a reversible local operation).
inline ProcessMatrix conjugate_local_unitary(const ProcessMatrix &w, const ComplexMatrix &u,
                                             const std::string &label) {
    Index d = w.dim(label);
    if (u.rows() != d || u.cols() != d) {
        throw std::invalid_argument("conjugate_local_unitary: dimension mismatch");
    }
    std::vector<std::string> labels{label};
    ComplexMatrix big = embed(u, labels, w.systems);
    return ProcessMatrix(big * w.matrix * big.adjoint(), w.dim_a1(), w.dim_a2(), w.dim_b1(),
                         w.dim_b2());
}

}  // namespace causametrics

#endif  // CAUSAMETRICS_PROCESS_MATRIX_HPP
