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

#ifndef CAUSAMETRICS_TENSOR_HPP
#define CAUSAMETRICS_TENSOR_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace causametrics {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Default numerical tolerance for hermiticity / positivity / CPTP checks.
inline constexpr double kDefaultTol = 1e-9;

/// Largest total Hilbert-space dimension the dense routines accept.
inline constexpr Index kMaxTotalDim = 4096;

/// One labeled tensor factor.
struct SystemDim {
    std::string label;
    Index dim = 0;
};

/// An ordered list of labeled tensor factors. The leftmost factor is the
/// most significant in the row-major computational-basis ordering, i.e. a
/// composite basis index is i1*d2*...*dk + i2*d3*...*dk + ... + ik.
class Factorization {
  public:
    Factorization() = default;

    Factorization(std::initializer_list<SystemDim> systems)
        : Factorization(std::vector<SystemDim>(systems)) {}

    explicit Factorization(std::vector<SystemDim> systems) : systems_(std::move(systems)) {
        for (std::size_t i = 0; i < systems_.size(); ++i) {
            if (systems_[i].dim <= 0) {
                throw std::invalid_argument("Factorization: dimension of '" + systems_[i].label +
                                            "' must be positive");
            }
            for (std::size_t j = i + 1; j < systems_.size(); ++j) {
                if (systems_[i].label == systems_[j].label) {
                    throw std::invalid_argument("Factorization: duplicate label '" +
                                                systems_[i].label + "'");
                }
            }
        }
    }

    std::size_t size() const {
        return systems_.size();
    }

    const SystemDim &operator[](std::size_t i) const {
        return systems_[i];
    }

    auto begin() const {
        return systems_.begin();
    }
    auto end() const {
        return systems_.end();
    }

    Index total_dim() const {
        Index n = 1;
        for (const auto &s : systems_) {
            n *= s.dim;
        }
        return n;
    }

    bool contains(std::string_view label) const {
        return std::any_of(systems_.begin(), systems_.end(), [&](const SystemDim &s) {
            return s.label == label;
        });
    }

    std::size_t index_of(std::string_view label) const {
        for (std::size_t i = 0; i < systems_.size(); ++i) {
            if (systems_[i].label == label) {
                return i;
            }
        }
        throw std::invalid_argument("Factorization: unknown label '" + std::string(label) + "'");
    }

    Index dim_of(std::string_view label) const {
        return systems_[index_of(label)].dim;
    }

    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        out.reserve(systems_.size());
        for (const auto &s : systems_) {
            out.push_back(s.label);
        }
        return out;
    }

    /// The factorization with the given labels removed.
    Factorization without(std::span<const std::string> labels) const {
        std::vector<SystemDim> kept;
        for (const auto &s : systems_) {
            if (std::find(labels.begin(), labels.end(), s.label) == labels.end()) {
                kept.push_back(s);
            }
        }
        if (kept.size() + labels.size() != systems_.size()) {
            for (const auto &l : labels) {
                index_of(l);  // throws on the unknown one
            }
        }
        return Factorization(std::move(kept));
    }

  private:
    std::vector<SystemDim> systems_;
};

namespace detail {

/// Strides for row-major composite indexing; stride[k] = product of dims right of k.
inline std::vector<Index> strides(std::span<const Index> dims) {
    std::vector<Index> s(dims.size(), 1);
    for (std::size_t k = dims.size(); k-- > 1;) {
        s[k - 1] = s[k] * dims[k];
    }
    return s;
}

inline std::vector<Index> dims_of(const Factorization &f) {
    std::vector<Index> d;
    d.reserve(f.size());
    for (const auto &s : f) {
        d.push_back(s.dim);
    }
    return d;
}

inline void require_square(const ComplexMatrix &m, const char *what) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square");
    }
}

inline void require_factors_match(const ComplexMatrix &m, const Factorization &f,
                                  const char *what) {
    if (f.total_dim() != m.rows()) {
        throw std::invalid_argument(std::string(what) +
                                    ": factorization does not match matrix dimension");
    }
}

}  // namespace detail

/// Kronecker product; the left operand is the more significant factor.
inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline ComplexVector kron(const ComplexVector &a, const ComplexVector &b) {
    ComplexVector out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

inline ComplexMatrix identity(Index n) {
    return ComplexMatrix::Identity(n, n);
}

inline ComplexVector basis_ket(Index i, Index d) {
    ComplexVector v = ComplexVector::Zero(d);
    v(i) = 1.0;
    return v;
}

/// Reorders the tensor legs of a vector. perm[k] is the position in the old
/// ordering of the factor that ends up at position k.
inline ComplexVector permute_vector(const ComplexVector &v, std::span<const Index> dims,
                                    std::span<const std::size_t> perm) {
    Index total = 1;
    for (Index d : dims) {
        total *= d;
    }
    if (total != v.size() || perm.size() != dims.size()) {
        throw std::invalid_argument("permute_vector: inconsistent dims/permutation");
    }
    auto old_strides = detail::strides(dims);
    std::vector<Index> new_dims(dims.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
        new_dims[k] = dims[perm[k]];
    }
    auto new_strides = detail::strides(new_dims);

    ComplexVector out(v.size());
    std::vector<Index> idx(dims.size(), 0);
    for (Index i = 0; i < v.size(); ++i) {
        Index rem = i;
        Index target = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            idx[k] = rem / old_strides[k];
            rem %= old_strides[k];
        }
        for (std::size_t k = 0; k < perm.size(); ++k) {
            target += idx[perm[k]] * new_strides[k];
        }
        out(target) = v(i);
    }
    return out;
}

/// Reorders the tensor factors of a square matrix to `new_order` (labels).
inline ComplexMatrix permute_factors(const ComplexMatrix &m, const Factorization &f,
                                     std::span<const std::string> new_order) {
    detail::require_square(m, "permute_factors");
    detail::require_factors_match(m, f, "permute_factors");
    if (new_order.size() != f.size()) {
        throw std::invalid_argument("permute_factors: order must list every label");
    }
    std::vector<std::size_t> perm(new_order.size());
    for (std::size_t k = 0; k < new_order.size(); ++k) {
        perm[k] = f.index_of(new_order[k]);
    }
    auto dims = detail::dims_of(f);
    auto old_strides = detail::strides(dims);
    std::vector<Index> new_dims(dims.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
        new_dims[k] = dims[perm[k]];
    }
    auto new_strides = detail::strides(new_dims);

    const Index n = m.rows();
    std::vector<Index> map(n);
    std::vector<Index> idx(dims.size(), 0);
    for (Index i = 0; i < n; ++i) {
        Index rem = i;
        Index target = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            idx[k] = rem / old_strides[k];
            rem %= old_strides[k];
        }
        for (std::size_t k = 0; k < perm.size(); ++k) {
            target += idx[perm[k]] * new_strides[k];
        }
        map[i] = target;
    }
    ComplexMatrix out(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            out(map[i], map[j]) = m(i, j);
        }
    }
    return out;
}

/// Trace over the factors named in `discard`. The remaining factors keep
/// their relative order; Tr of the result equals Tr of the input.
inline ComplexMatrix partial_trace(const ComplexMatrix &m, const Factorization &f,
                                   std::span<const std::string> discard) {
    detail::require_square(m, "partial_trace");
    detail::require_factors_match(m, f, "partial_trace");
    for (const auto &l : discard) {
        f.index_of(l);
    }

    auto dims = detail::dims_of(f);
    auto str = detail::strides(dims);
    std::vector<std::size_t> kept, traced;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (std::find(discard.begin(), discard.end(), f[k].label) == discard.end()) {
            kept.push_back(k);
        } else {
            traced.push_back(k);
        }
    }
    Index kept_dim = 1, traced_dim = 1;
    for (auto k : kept) {
        kept_dim *= dims[k];
    }
    for (auto k : traced) {
        traced_dim *= dims[k];
    }

    // Composite source index for (kept multi-index a, traced multi-index t).
    auto source = [&](Index a, Index t) {
        Index i = 0;
        for (std::size_t k = kept.size(); k-- > 0;) {
            i += (a % dims[kept[k]]) * str[kept[k]];
            a /= dims[kept[k]];
        }
        for (std::size_t k = traced.size(); k-- > 0;) {
            i += (t % dims[traced[k]]) * str[traced[k]];
            t /= dims[traced[k]];
        }
        return i;
    };

    ComplexMatrix out = ComplexMatrix::Zero(kept_dim, kept_dim);
    for (Index a = 0; a < kept_dim; ++a) {
        for (Index b = 0; b < kept_dim; ++b) {
            Complex acc = 0.0;
            for (Index t = 0; t < traced_dim; ++t) {
                acc += m(source(a, t), source(b, t));
            }
            out(a, b) = acc;
        }
    }
    return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix &m, const Factorization &f,
                                   std::initializer_list<std::string> discard) {
    std::vector<std::string> d(discard);
    return partial_trace(m, f, d);
}

/// Embeds `op` (acting on the listed labels, in that order) into the full
/// space described by `f`, acting as the identity elsewhere.
inline ComplexMatrix embed(const ComplexMatrix &op, std::span<const std::string> op_labels,
                           const Factorization &f) {
    detail::require_square(op, "embed");
    Index op_dim = 1;
    std::vector<std::string> order(op_labels.begin(), op_labels.end());
    for (const auto &l : op_labels) {
        op_dim *= f.dim_of(l);
    }
    if (op_dim != op.rows()) {
        throw std::invalid_argument("embed: operator dimension does not match its labels");
    }
    Index rest_dim = 1;
    for (const auto &s : f) {
        if (std::find(op_labels.begin(), op_labels.end(), s.label) == op_labels.end()) {
            order.push_back(s.label);
            rest_dim *= s.dim;
        }
    }
    ComplexMatrix big = kron(op, identity(rest_dim));
    std::vector<SystemDim> shuffled;
    for (const auto &l : order) {
        shuffled.push_back({l, f.dim_of(l)});
    }
    return permute_factors(big, Factorization(shuffled), f.labels());
}

/// Builds an operator on `f` as a tensor product of pieces, each placed on
/// its own labels. The pieces must cover every factor exactly once.
inline ComplexMatrix assemble(const Factorization &f,
                              std::span<const std::pair<ComplexMatrix, std::vector<std::string>>>
                                  pieces) {
    ComplexMatrix acc(1, 1);
    acc(0, 0) = 1.0;
    std::vector<std::string> order;
    for (const auto &[op, labels] : pieces) {
        acc = kron(acc, op);
        order.insert(order.end(), labels.begin(), labels.end());
    }
    if (order.size() != f.size()) {
        throw std::invalid_argument("assemble: pieces must cover every factor exactly once");
    }
    std::vector<SystemDim> shuffled;
    for (const auto &l : order) {
        shuffled.push_back({l, f.dim_of(l)});
    }
    return permute_factors(acc, Factorization(shuffled), f.labels());
}

/// The unnormalized maximally entangled vector |I> = sum_i |ii> on two
/// d-dimensional factors; the Choi state of the identity channel.
inline ComplexVector identity_choi_vector(Index d) {
    ComplexVector v = ComplexVector::Zero(d * d);
    for (Index i = 0; i < d; ++i) {
        v(i * d + i) = 1.0;
    }
    return v;
}

/// Unnormalized Choi operator sum_ij |i><j| (x) N(|i><j|) of the CP map with
/// the given Kraus operators (each d_out x d_in). For CPTP inputs the partial
/// trace over the output factor is the identity on the input factor.
inline ComplexMatrix choi(std::span<const ComplexMatrix> kraus, Index d_in, Index d_out) {
    if (kraus.empty()) {
        throw std::invalid_argument("choi: need at least one Kraus operator");
    }
    ComplexMatrix c = ComplexMatrix::Zero(d_in * d_out, d_in * d_out);
    for (const auto &k : kraus) {
        if (k.rows() != d_out || k.cols() != d_in) {
            throw std::invalid_argument("choi: Kraus operator must be d_out x d_in");
        }
        // |v> = (I (x) K) sum_i |ii>
        ComplexVector v = ComplexVector::Zero(d_in * d_out);
        for (Index i = 0; i < d_in; ++i) {
            v.segment(i * d_out, d_out) = k.col(i);
        }
        c += v * v.adjoint();
    }
    return c;
}

inline ComplexMatrix choi(std::initializer_list<ComplexMatrix> kraus, Index d_in, Index d_out) {
    std::vector<ComplexMatrix> k(kraus);
    return choi(std::span<const ComplexMatrix>(k), d_in, d_out);
}

/// Applies the channel with the given (in x out)-factored Choi operator:
/// N(rho)_{kl} = sum_ij rho_ij C[(i,k),(j,l)].
inline ComplexMatrix apply_choi(const ComplexMatrix &choi_op, Index d_in, Index d_out,
                                const ComplexMatrix &rho) {
    if (choi_op.rows() != d_in * d_out || rho.rows() != d_in || rho.cols() != d_in) {
        throw std::invalid_argument("apply_choi: dimension mismatch");
    }
    ComplexMatrix out = ComplexMatrix::Zero(d_out, d_out);
    for (Index i = 0; i < d_in; ++i) {
        for (Index j = 0; j < d_in; ++j) {
            if (rho(i, j) == Complex(0.0)) {
                continue;
            }
            out += rho(i, j) * choi_op.block(i * d_out, j * d_out, d_out, d_out);
        }
    }
    return out;
}

/// Normalized rank-one projector onto (1/sqrt(m)) sum_i |ii>.
inline ComplexMatrix max_entangled(Index m) {
    if (m < 1) {
        throw std::invalid_argument("max_entangled: m must be >= 1");
    }
    ComplexVector v = identity_choi_vector(m) / std::sqrt(static_cast<double>(m));
    return v * v.adjoint();
}

inline bool is_hermitian(const ComplexMatrix &m, double tol = kDefaultTol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

/// Smallest eigenvalue of a Hermitian matrix.
inline double min_eigenvalue(const ComplexMatrix &m, double tol = kDefaultTol) {
    detail::require_square(m, "min_eigenvalue");
    if (!is_hermitian(m, tol)) {
        throw std::invalid_argument("min_eigenvalue: matrix is not Hermitian within tolerance");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

inline bool is_psd(const ComplexMatrix &m, double tol = kDefaultTol) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("is_psd: matrix must be square");
    }
    if (!is_hermitian(m, tol)) {
        return false;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0) >= -tol;
}

/// Operator norm (largest singular value).
inline double op_norm(const ComplexMatrix &m) {
    if (m.rows() == 0 || m.cols() == 0) {
        return 0.0;
    }
    return m.jacobiSvd().singularValues()(0);
}

inline double hs_norm(const ComplexMatrix &m) {
    return m.norm();
}

/// <phi|state|phi> for a rank-one target projector phi. Linear in `state`.
inline double fidelity_pure(const ComplexMatrix &target, const ComplexMatrix &state,
                            double tol = kDefaultTol) {
    detail::require_square(target, "fidelity_pure");
    if (target.rows() != state.rows() || state.rows() != state.cols()) {
        throw std::invalid_argument("fidelity_pure: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(target);
    const auto &ev = solver.eigenvalues();
    double trace = ev.sum();
    double tol_eff = std::max(tol, 1e-12);
    if (std::abs(trace - 1.0) > tol_eff || ev(ev.size() - 1) < 1.0 - tol_eff ||
        (ev.size() > 1 && std::abs(ev(0)) > tol_eff)) {
        throw std::invalid_argument("fidelity_pure: target is not a rank-one density operator");
    }
    ComplexVector phi = solver.eigenvectors().col(ev.size() - 1);
    return std::real(phi.dot(state * phi));
}

/// A matrix together with the labeled factorization of the space it acts on.
struct LabeledOp {
    ComplexMatrix mat;
    Factorization systems;

    LabeledOp() = default;
    LabeledOp(ComplexMatrix m, Factorization f) : mat(std::move(m)), systems(std::move(f)) {
        detail::require_square(mat, "LabeledOp");
        detail::require_factors_match(mat, systems, "LabeledOp");
    }
};

/// Link product: contracts A and B over their shared labels,
///   C = Tr_shared[(A^{T_shared} (x) I)(I (x) B)],
/// returning an operator on A's exclusive labels followed by B's. Composing
/// Choi operators this way yields the Choi of the composite map, and
/// contracting everything yields the generalized Born probability.
inline LabeledOp link(const LabeledOp &a, const LabeledOp &b) {
    std::vector<std::string> shared;
    for (const auto &s : a.systems) {
        if (b.systems.contains(s.label)) {
            if (b.systems.dim_of(s.label) != s.dim) {
                throw std::invalid_argument("link: shared label '" + s.label +
                                            "' has mismatched dimensions");
            }
            shared.push_back(s.label);
        }
    }
    std::vector<std::string> a_only, b_only;
    for (const auto &s : a.systems) {
        if (std::find(shared.begin(), shared.end(), s.label) == shared.end()) {
            a_only.push_back(s.label);
        }
    }
    for (const auto &s : b.systems) {
        if (std::find(shared.begin(), shared.end(), s.label) == shared.end()) {
            b_only.push_back(s.label);
        }
    }

    // Bring A to (exclusive, shared) order and B to (shared, exclusive) order.
    std::vector<std::string> a_order = a_only;
    a_order.insert(a_order.end(), shared.begin(), shared.end());
    std::vector<std::string> b_order = shared;
    b_order.insert(b_order.end(), b_only.begin(), b_only.end());
    ComplexMatrix ap = permute_factors(a.mat, a.systems, a_order);
    ComplexMatrix bp = permute_factors(b.mat, b.systems, b_order);

    Index dx = 1, dy = 1, dz = 1;
    for (const auto &l : a_only) {
        dx *= a.systems.dim_of(l);
    }
    for (const auto &l : shared) {
        dy *= a.systems.dim_of(l);
    }
    for (const auto &l : b_only) {
        dz *= b.systems.dim_of(l);
    }

    // C[(x,z),(x',z')] = sum_{u,v} A[(x,u),(x',v)] B[(u,z),(v,z')]
    ComplexMatrix at(dx * dx, dy * dy);
    for (Index x = 0; x < dx; ++x) {
        for (Index xp = 0; xp < dx; ++xp) {
            for (Index u = 0; u < dy; ++u) {
                for (Index v = 0; v < dy; ++v) {
                    at(x * dx + xp, u * dy + v) = ap(x * dy + u, xp * dy + v);
                }
            }
        }
    }
    ComplexMatrix bt(dy * dy, dz * dz);
    for (Index u = 0; u < dy; ++u) {
        for (Index v = 0; v < dy; ++v) {
            for (Index z = 0; z < dz; ++z) {
                for (Index zp = 0; zp < dz; ++zp) {
                    bt(u * dy + v, z * dz + zp) = bp(u * dz + z, v * dz + zp);
                }
            }
        }
    }
    ComplexMatrix ct = at * bt;
    ComplexMatrix c(dx * dz, dx * dz);
    for (Index x = 0; x < dx; ++x) {
        for (Index xp = 0; xp < dx; ++xp) {
            for (Index z = 0; z < dz; ++z) {
                for (Index zp = 0; zp < dz; ++zp) {
                    c(x * dz + z, xp * dz + zp) = ct(x * dx + xp, z * dz + zp);
                }
            }
        }
    }

    std::vector<SystemDim> out_systems;
    for (const auto &l : a_only) {
        out_systems.push_back({l, a.systems.dim_of(l)});
    }
    for (const auto &l : b_only) {
        out_systems.push_back({l, b.systems.dim_of(l)});
    }
    return LabeledOp(std::move(c), Factorization(std::move(out_systems)));
}

/// Residual of the trace-preservation condition Tr_out(choi) = I_in.
inline double cptp_trace_residual(const ComplexMatrix &choi_op, Index d_in, Index d_out) {
    Factorization f{{"in", d_in}, {"out", d_out}};
    ComplexMatrix marginal = partial_trace(choi_op, f, {"out"});
    return (marginal - identity(d_in)).cwiseAbs().maxCoeff();
}

/// True iff `choi_op` is the Choi operator of a CPTP map within `tol`.
inline bool is_cptp(const ComplexMatrix &choi_op, Index d_in, Index d_out,
                    double tol = kDefaultTol) {
    if (choi_op.rows() != d_in * d_out || choi_op.cols() != d_in * d_out) {
        return false;
    }
    double scale = std::max(1.0, static_cast<double>(d_in));
    return is_psd(choi_op, tol * scale) && cptp_trace_residual(choi_op, d_in, d_out) <= tol * scale;
}

}  // namespace causametrics

#endif  // CAUSAMETRICS_TENSOR_HPP
