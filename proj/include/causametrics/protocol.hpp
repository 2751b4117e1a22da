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

#ifndef CAUSAMETRICS_PROTOCOL_HPP
#define CAUSAMETRICS_PROTOCOL_HPP

#include <atomic>
#include <cstdlib>
#include <optional>
#include <thread>

#include "causametrics/capacity.hpp"
#include "causametrics/harmonic.hpp"
#include "causametrics/process_matrix.hpp"
#include "causametrics/random.hpp"

namespace causametrics {

/// An encoder/decoder pair for one-shot transmission through a bipartite
/// process matrix. The encoder is the Choi of a CPTP map M' (x) a1 -> a2
/// (factors M', a1, a2); the decoder of a CPTP map b1 -> b2 (x) M'
/// (factors b1, b2, M'). An optional post-processing channel on the held
/// system M realizes the active task variant.
struct Protocol {
    Index m = 0;
    ComplexMatrix encoder;
    ComplexMatrix decoder;
    std::optional<ComplexMatrix> post_op;
};

inline void check_protocol(const Protocol &proto, Index d, double tol = kDefaultTol) {
    if (proto.m < 1 || proto.m > d) {
        throw std::invalid_argument("Protocol: need 1 <= m <= d");
    }
    if (!is_cptp(proto.encoder, proto.m * d, d, tol)) {
        throw std::invalid_argument("Protocol: encoder is not CPTP");
    }
    if (!is_cptp(proto.decoder, d, d * proto.m, tol)) {
        throw std::invalid_argument("Protocol: decoder is not CPTP");
    }
    if (proto.post_op && !is_cptp(*proto.post_op, proto.m, proto.m, tol)) {
        throw std::invalid_argument("Protocol: post_op is not CPTP");
    }
}

/// The routing protocol from the achievability proof: the encoder embeds M'
/// isometrically into a2 and discards a1; the decoder projects b1 onto the
/// code subspace into M' and emits |0><0| into b2. For the entanglement task
/// the complement of the code subspace is routed to a fixed pure state; for
/// the subspace task it is routed to the maximally mixed state, which the
/// optimal protocol must emit when nothing arrives.
inline Protocol canonical_protocol(Index d, Index m, Task task = Task::Ent) {
    if (m < 1 || m > d) {
        throw std::invalid_argument("canonical_protocol: need 1 <= m <= d");
    }
    ComplexMatrix v = ComplexMatrix::Zero(d, m);  // code-subspace embedding
    for (Index i = 0; i < m; ++i) {
        v(i, i) = 1.0;
    }

    std::vector<ComplexMatrix> enc_kraus;
    for (Index u = 0; u < d; ++u) {
        ComplexMatrix bra_u = basis_ket(u, d).transpose();
        enc_kraus.push_back(kron(v, bra_u));
    }
    ComplexMatrix encoder = choi(std::span<const ComplexMatrix>(enc_kraus), m * d, d);

    ComplexMatrix ket0_b2 = basis_ket(0, d);
    std::vector<ComplexMatrix> dec_kraus;
    dec_kraus.push_back(kron(ket0_b2, ComplexMatrix(v.adjoint())));
    for (Index j = m; j < d; ++j) {
        ComplexMatrix bra_cj = basis_ket(j, d).transpose();
        if (task == Task::Ent) {
            dec_kraus.push_back(kron(ket0_b2, ComplexMatrix(basis_ket(0, m) * bra_cj)));
        } else {
            for (Index k = 0; k < m; ++k) {
                ComplexMatrix piece = basis_ket(k, m) * bra_cj / std::sqrt(double(m));
                dec_kraus.push_back(kron(ket0_b2, piece));
            }
        }
    }
    ComplexMatrix decoder = choi(std::span<const ComplexMatrix>(dec_kraus), d, d * m);
    return Protocol{m, std::move(encoder), std::move(decoder), std::nullopt};
}

inline Protocol canonical_protocol(const HarmonicModel &model, Index m, Task task = Task::Ent) {
    return canonical_protocol(model.dim, m, task);
}

/// Encoder and decoder sampled from Haar-random isometries composed with
/// partial traces; byte-reproducible for a given seed.
inline Protocol random_protocol(std::uint64_t seed, Index d, Index m) {
    if (m < 1 || m > d) {
        throw std::invalid_argument("random_protocol: need 1 <= m <= d");
    }
    Rng rng(seed);
    ComplexMatrix encoder = random_cptp_choi(rng, m * d, d);
    ComplexMatrix decoder = random_cptp_choi(rng, d, d * m);
    return Protocol{m, std::move(encoder), std::move(decoder), std::nullopt};
}

inline Protocol random_protocol(std::uint64_t seed, const HarmonicModel &model, Index m) {
    return random_protocol(seed, model.dim, m);
}

/// The protocol with an extra channel appended to the decoder's M' output.
inline Protocol compose_decoder_output(const Protocol &proto, const ComplexMatrix &channel_choi,
                                       Index d) {
    LabeledOp dec(proto.decoder, Factorization{{"b1", d}, {"b2", d}, {"Mp", proto.m}});
    LabeledOp chan(channel_choi, Factorization{{"Mp", proto.m}, {"Mn", proto.m}});
    LabeledOp out = link(dec, chan);
    std::vector<std::string> order{"b1", "b2", "Mn"};
    Protocol result = proto;
    result.decoder = permute_factors(out.mat, out.systems, order);
    return result;
}

/// Entanglement transmission fidelity of a concrete protocol: the overlap of
/// contract(W, E, D, Ups) with the rank-m maximally entangled state, with the
/// post-processing channel applied to the held half first when present.
inline double ent_fidelity(const ProcessMatrix &w, const Protocol &proto,
                           double tol = kDefaultTol) {
    const Index d = w.dim_a2();
    check_protocol(proto, d, tol);
    ComplexMatrix ups = max_entangled(proto.m);
    ContractDims dims{proto.m, proto.m, 1, proto.m};
    ComplexMatrix state = contract(w, proto.encoder, proto.decoder, ups, dims, tol).state;
    if (proto.post_op) {
        LabeledOp st(state, Factorization{{"M", proto.m}, {"Mp", proto.m}});
        LabeledOp post(*proto.post_op, Factorization{{"M", proto.m}, {"Mn", proto.m}});
        LabeledOp out = link(st, post);
        std::vector<std::string> order{"Mn", "Mp"};
        state = permute_factors(out.mat, out.systems, order);
    }
    return fidelity_pure(ups, state);
}

inline double ent_fidelity(const HarmonicModel &model, const Protocol &proto,
                           double tol = kDefaultTol) {
    return ent_fidelity(reduce(model), proto, tol);
}

/// Output fidelity of one pure input sent through the subspace-transmission
/// circuit: the input enters the encoder at M', the decoder's M' output is
/// compared with it.
inline double subspace_fidelity(const ProcessMatrix &w, const Protocol &proto,
                                const ComplexVector &psi, double tol = kDefaultTol) {
    const Index d = w.dim_a2();
    check_protocol(proto, d, tol);
    if (psi.size() != proto.m) {
        throw std::invalid_argument("subspace_fidelity: input must live on the code space");
    }
    ComplexMatrix input = psi * psi.adjoint();
    ContractDims dims{1, proto.m, 1, proto.m};
    ComplexMatrix state = contract(w, proto.encoder, proto.decoder, input, dims, tol).state;
    return fidelity_pure(input, state);
}

/// Estimated minimum output fidelity: the minimum over the uniform
/// superposition input and `n_states` sampled pure inputs. An upper bound on
/// the true minimum.
inline double min_output_fidelity(const ProcessMatrix &w, const Protocol &proto, int n_states,
                                  std::uint64_t seed, double tol = kDefaultTol) {
    ComplexVector uniform =
        ComplexVector::Constant(proto.m, Complex(1.0 / std::sqrt(double(proto.m)), 0.0));
    double worst = subspace_fidelity(w, proto, uniform, tol);
    for (int i = 0; i < n_states; ++i) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
        worst = std::min(worst, subspace_fidelity(w, proto, random_pure_state(rng, proto.m), tol));
    }
    return worst;
}

inline double min_output_fidelity(const HarmonicModel &model, const Protocol &proto,
                                  int n_states, std::uint64_t seed, double tol = kDefaultTol) {
    return min_output_fidelity(reduce(model), proto, n_states, seed, tol);
}

/// Worker count for sampling sweeps: an explicit request wins, otherwise the
/// hardware concurrency, in both cases capped by CAUSAMETRICS_THREADS when
/// that is set to a positive value.
inline int resolve_worker_count(int requested = 0) {
    int count = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    count = std::max(count, 1);
    if (const char *env = std::getenv("CAUSAMETRICS_THREADS")) {
        char *end = nullptr;
        long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) {
            count = std::min<long>(count, cap);
        }
    }
    return count;
}

namespace detail {

/// Deterministic parallel max of fn(0..n-1): every index is evaluated from
/// its own substream, so the reduction is independent of the thread layout.
template <typename Fn>
double parallel_max(int n, int workers, Fn &&fn) {
    if (n <= 0) {
        return -std::numeric_limits<double>::infinity();
    }
    workers = std::min(std::max(workers, 1), n);
    if (workers == 1) {
        double best = fn(0);
        for (int i = 1; i < n; ++i) {
            best = std::max(best, fn(i));
        }
        return best;
    }
    std::vector<double> partial(static_cast<std::size_t>(workers),
                                -std::numeric_limits<double>::infinity());
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                partial[static_cast<std::size_t>(t)] =
                    std::max(partial[static_cast<std::size_t>(t)], fn(i));
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    double best = partial[0];
    for (double v : partial) {
        best = std::max(best, v);
    }
    return best;
}

}  // namespace detail

struct OracleReport {
    double formula = 0.0;
    double canonical = 0.0;
    double sampled_max = 0.0;
    int n_samples = 0;
    std::uint64_t seed = 0;
    bool agrees = false;
};

/// Verifies the closed-form entanglement fidelity against simulation: the
/// canonical protocol must reproduce p1 + (1-p1)/m^2 and no sampled random
/// protocol may exceed it beyond tolerance.
inline OracleReport run_ent_oracle(const HarmonicModel &model, Index m, int n_samples,
                                   std::uint64_t seed, int workers = 0,
                                   double tol = kDefaultTol) {
    ProcessMatrix w = reduce(model);
    OracleReport report;
    report.formula = f_ent(model.p1(), m);
    report.canonical = ent_fidelity(w, canonical_protocol(model.dim, m, Task::Ent));
    report.n_samples = n_samples;
    report.seed = seed;
    report.sampled_max = detail::parallel_max(
        n_samples, resolve_worker_count(workers), [&](int i) {
            Rng sub = Rng::substream(seed, static_cast<std::uint64_t>(i));
            return ent_fidelity(w, random_protocol(sub.next_u64(), model.dim, m));
        });
    if (n_samples == 0) {
        report.sampled_max = report.canonical;
    }
    report.agrees = std::abs(report.canonical - report.formula) <= tol &&
                    report.sampled_max <= report.formula + tol;
    return report;
}

/// Subspace analogue under the maximally-mixed-marginal hypothesis: the canonical protocol's
/// minimum output fidelity estimate must reproduce p1 + (1-p1)/m, and random
/// protocols' estimates must not exceed it.
inline OracleReport run_sub_oracle(const HarmonicModel &model, Index m, int n_samples,
                                   std::uint64_t seed, int workers = 0, int states_per_protocol = 20,
                                   double tol = kDefaultTol) {
    if (!rho_b1_is_maximally_mixed(model)) {
        throw HypothesisError("run_sub_oracle: rho^{b1} must be maximally mixed");
    }
    ProcessMatrix w = reduce(model);
    OracleReport report;
    report.formula = f_min(model.p1(), m);
    report.canonical = min_output_fidelity(
        w, canonical_protocol(model.dim, m, Task::Sub), states_per_protocol, seed ^ 0x5151, tol);
    report.n_samples = n_samples;
    report.seed = seed;
    report.sampled_max = detail::parallel_max(
        n_samples, resolve_worker_count(workers), [&](int i) {
            Rng sub = Rng::substream(seed, static_cast<std::uint64_t>(i));
            std::uint64_t proto_seed = sub.next_u64();
            return min_output_fidelity(w, random_protocol(proto_seed, model.dim, m),
                                       states_per_protocol, proto_seed ^ 0xa5a5, tol);
        });
    if (n_samples == 0) {
        report.sampled_max = report.canonical;
    }
    report.agrees = std::abs(report.canonical - report.formula) <= tol &&
                    report.sampled_max <= report.formula + tol;
    return report;
}

/// Best sampled entanglement fidelity achievable with a non-signalling
/// resource; the closed forms say this can never exceed 1/m^2.
inline double nonsignalling_fidelity_check(const ProcessMatrix &resource, Index m, int n_samples,
                                           std::uint64_t seed, int workers = 0,
                                           double tol = kDefaultTol) {
    auto forward = can_signal(resource, Direction::AtoB, tol);
    if (forward.signals) {
        throw std::invalid_argument(
            "nonsignalling_fidelity_check: resource signals in the tested direction");
    }
    const Index d = resource.dim_a2();
    double best = detail::parallel_max(
        n_samples, resolve_worker_count(workers), [&](int i) {
            Rng sub = Rng::substream(seed, static_cast<std::uint64_t>(i));
            return ent_fidelity(resource, random_protocol(sub.next_u64(), d, m), tol);
        });
    // The canonical decoder that emits the maximally mixed state attains the
    // bound exactly.
    Protocol canon = canonical_protocol(d, m, Task::Sub);
    best = std::max(best, ent_fidelity(resource, canon, tol));
    return best;
}

}  // namespace causametrics

#endif  // CAUSAMETRICS_PROTOCOL_HPP
