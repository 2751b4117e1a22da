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

#include "causametrics/harmonic.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "causametrics/random.hpp"

using namespace causametrics;

namespace {

std::array<Complex, 3> random_alpha(Rng &rng, bool with_phases = true) {
    double u = rng.next_double();
    double v = rng.next_double();
    double lo = std::min(u, v), hi = std::max(u, v);
    std::array<double, 3> p{lo, hi - lo, 1.0 - hi};
    std::array<Complex, 3> alpha;
    for (int i = 0; i < 3; ++i) {
        double phase = with_phases ? 2.0 * std::numbers::pi * rng.next_double() : 0.0;
        alpha[static_cast<std::size_t>(i)] =
            std::sqrt(p[static_cast<std::size_t>(i)]) * Complex(std::cos(phase), std::sin(phase));
    }
    return alpha;
}

HarmonicModel random_model(Rng &rng, Index d) {
    ComplexVector psi = random_pure_state(rng, d * d * d);
    return make_harmonic_model(random_alpha(rng), d, psi, d);
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("single-branch models reduce to the expected structures") {
    Index d = 2;
    auto [psi, e3] = preset_psi(PsiPreset::Product, d);
    ComplexVector iv = identity_choi_vector(d);
    ComplexMatrix phi = iv * iv.adjoint();
    ComplexMatrix ket0 = ComplexMatrix::Zero(d, d);
    ket0(0, 0) = 1.0;
    Factorization f{{"a1", d}, {"a2", d}, {"b1", d}, {"b2", d}};

    // A in the causal past of B: |0><0|^{a1} (x) Phi^{a2 b1} (x) 1^{b2}.
    HarmonicModel m1 = make_harmonic_model({1.0, 0.0, 0.0}, d, psi, e3);
    std::vector<std::pair<ComplexMatrix, std::vector<std::string>>> p1;
    p1.push_back({ket0, {"a1"}});
    p1.push_back({phi, {"a2", "b1"}});
    p1.push_back({identity(d), {"b2"}});
    CHECK(max_abs_diff(reduce(m1).matrix, assemble(f, p1)) < 1e-12);

    // Mirror image: channel from B's output to A's input.
    HarmonicModel m2 = make_harmonic_model({0.0, 1.0, 0.0}, d, psi, e3);
    std::vector<std::pair<ComplexMatrix, std::vector<std::string>>> p2;
    p2.push_back({ket0, {"b1"}});
    p2.push_back({phi, {"a1", "b2"}});
    p2.push_back({identity(d), {"a2"}});
    CHECK(max_abs_diff(reduce(m2).matrix, assemble(f, p2)) < 1e-12);

    // Causally disconnected: shared state, both outputs discarded.
    HarmonicModel m3 = make_harmonic_model({0.0, 0.0, 1.0}, d, psi, e3);
    std::vector<std::pair<ComplexMatrix, std::vector<std::string>>> p3;
    p3.push_back({kron(ket0, ket0), {"a1", "b1"}});
    p3.push_back({identity(d), {"a2"}});
    p3.push_back({identity(d), {"b2"}});
    CHECK(max_abs_diff(reduce(m3).matrix, assemble(f, p3)) < 1e-12);
    CHECK(!can_signal(reduce(m3), Direction::AtoB).signals);
    CHECK(!can_signal(reduce(m3), Direction::BtoA).signals);
}

TEST_CASE("global vector has squared norm d^2") {
    Rng rng(211);
    for (Index d : {2, 3}) {
        HarmonicModel m = random_model(rng, d);
        GlobalModel gm = build_global(m);
        CHECK_THAT(gm.w.squaredNorm() - static_cast<double>(d * d),
                   Catch::Matchers::WithinAbs(0.0, 1e-10));
    }
}

TEST_CASE("tracing the global projector matches the direct branch mixture") {
    Index d = 2;
    Rng rng(223);
    ComplexVector psi = random_pure_state(rng, d * d * d);
    HarmonicModel m =
        make_harmonic_model({1.0 / std::numbers::sqrt2, 0.5, 0.5}, d, psi, d);

    GlobalModel gm = build_global(m);
    ComplexMatrix w_gabe = global_projector(gm);
    ComplexMatrix traced =
        partial_trace(w_gabe, gm.systems, {"g", "e1", "e2", "e3"});

    ComplexMatrix mixture = ComplexMatrix::Zero(16, 16);
    for (int i = 1; i <= 3; ++i) {
        mixture += m.p(i) * branch(m, i).matrix.matrix;
    }
    CHECK(max_abs_diff(traced, mixture) < 1e-12);
    CHECK(max_abs_diff(reduce(m).matrix, mixture) < 1e-12);
}

TEST_CASE("branch mixture equals reduce for random models") {
    Rng rng(227);
    for (Index d : {2, 3}) {
        HarmonicModel m = random_model(rng, d);
        ComplexMatrix mixture = ComplexMatrix::Zero(d * d * d * d, d * d * d * d);
        for (int i = 1; i <= 3; ++i) {
            mixture += m.p(i) * branch(m, i).matrix.matrix;
        }
        CHECK(max_abs_diff(reduce(m).matrix, mixture) < 1e-12);
    }
    CHECK_THROWS_AS(branch(random_model(rng, 2), 4), std::invalid_argument);
}

TEST_CASE("seed marginals drive the branch structures") {
    Index d = 2;
    Rng rng(229);

    // Entangled (y, e3) marginal: rho^{b1} = pi even though psi is pure.
    auto [psi_mixed, e3_mixed] = preset_psi(PsiPreset::MixedB1, d);
    HarmonicModel m = make_harmonic_model({0.0, 0.0, 1.0}, d, psi_mixed, e3_mixed);
    CHECK(is_maximally_mixed(seed_marginal(m, "y"), 1e-12));
    CHECK(rho_b1_is_maximally_mixed(m));
    CHECK(!rho_a1_is_maximally_mixed(m));

    auto [psi_prod, e3_prod] = preset_psi(PsiPreset::Product, d);
    HarmonicModel mp = make_harmonic_model({0.0, 0.0, 1.0}, d, psi_prod, e3_prod);
    ComplexMatrix ket0 = ComplexMatrix::Zero(d, d);
    ket0(0, 0) = 1.0;
    CHECK(max_abs_diff(seed_marginal(mp, "y"), ket0) < 1e-14);
    CHECK(!rho_b1_is_maximally_mixed(mp));

    // rho^{a1} of branch 1 is the x marginal of the seed state.
    HarmonicModel mr = random_model(rng, d);
    ComplexMatrix w1 = branch(mr, 1).matrix.matrix;
    Factorization f{{"a1", d}, {"a2", d}, {"b1", d}, {"b2", d}};
    ComplexMatrix a1_marginal =
        partial_trace(w1, f, {"a2", "b1", "b2"}) / static_cast<double>(d * d);
    CHECK(max_abs_diff(a1_marginal, seed_marginal(mr, "x")) < 1e-12);

    // Both presets are unit vectors.
    CHECK_THAT(psi_mixed.norm(), Catch::Matchers::WithinAbs(1.0, 1e-14));
    CHECK_THAT(psi_prod.norm(), Catch::Matchers::WithinAbs(1.0, 1e-14));
}

TEST_CASE("reduced models are valid process matrices") {
    Rng rng(233);
    for (Index d : {2, 3}) {
        for (int trial = 0; trial < 4; ++trial) {
            HarmonicModel m = random_model(rng, d);
            ValidityReport r = validate(reduce(m));
            CHECK(r.all_ok());
        }
    }
}

TEST_CASE("signalling of a reduced model is governed by p1 and p2") {
    Rng rng(239);
    Index d = 2;
    for (int trial = 0; trial < 6; ++trial) {
        HarmonicModel m = random_model(rng, d);
        ProcessMatrix w = reduce(m);
        CHECK(can_signal(w, Direction::AtoB).signals == (m.p1() > 1e-9));
        CHECK(can_signal(w, Direction::BtoA).signals == (m.p2() > 1e-9));
    }

    HarmonicModel pure3 = make_harmonic_model({0.0, 0.0, 1.0}, d, PsiPreset::MixedB1);
    ProcessMatrix w3 = reduce(pure3);
    CHECK(!can_signal(w3, Direction::AtoB).signals);
    CHECK(!can_signal(w3, Direction::BtoA).signals);
}

TEST_CASE("reduce is blind to the phases of alpha") {
    Rng rng(241);
    Index d = 2;
    ComplexVector psi = random_pure_state(rng, d * d * d);
    std::array<Complex, 3> alpha = random_alpha(rng, false);
    HarmonicModel base = make_harmonic_model(alpha, d, psi, d);

    std::array<Complex, 3> rotated = alpha;
    for (auto &a : rotated) {
        double theta = 2.0 * std::numbers::pi * rng.next_double();
        a *= Complex(std::cos(theta), std::sin(theta));
    }
    HarmonicModel twisted = make_harmonic_model(rotated, d, psi, d);
    CHECK(max_abs_diff(reduce(base).matrix, reduce(twisted).matrix) < 1e-12);
}

TEST_CASE("exchanging the parties equals swapping the model") {
    // Swapping alpha_1 with alpha_2 and the x/y seed factors produces the
    // mirror-image model; its reduction is the party-swapped process matrix.
    Rng rng(251);
    Index d = 2;
    ComplexVector psi = random_pure_state(rng, d * d * d);
    HarmonicModel m = make_harmonic_model(random_alpha(rng), d, psi, d);

    std::array<Complex, 3> mirrored{m.alpha[1], m.alpha[0], m.alpha[2]};
    std::vector<Index> dims{d, d, d};
    std::vector<std::size_t> perm{1, 0, 2};
    HarmonicModel mirror =
        make_harmonic_model(mirrored, d, permute_vector(m.psi, dims, perm), d);

    CHECK(max_abs_diff(reduce(mirror).matrix, swap_parties(reduce(m)).matrix) < 1e-12);
}

TEST_CASE("model construction rejects bad inputs") {
    Index d = 2;
    auto [psi, e3] = preset_psi(PsiPreset::Product, d);
    CHECK_THROWS_AS(make_harmonic_model({1.0, 0.5, 0.0}, d, psi, e3), std::invalid_argument);
    CHECK_THROWS_AS(make_harmonic_model({1.0, 0.0, 0.0}, d, psi, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_harmonic_model({1.0, 0.0, 0.0}, d, 2.0 * psi, e3),
                    std::invalid_argument);
    CHECK_THROWS_AS(preset_psi(PsiPreset::Product, 1), std::invalid_argument);
}
