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

#include "causametrics/tensor.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "causametrics/random.hpp"

using namespace causametrics;

namespace {

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("kron basics") {
    CHECK(max_abs_diff(kron(identity(2), identity(2)), identity(4)) == 0.0);

    ComplexMatrix d10 = diag2(1, 0);
    ComplexMatrix d01 = diag2(0, 1);
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(1, 1) = 1.0;
    CHECK(max_abs_diff(kron(d10, d01), expected) == 0.0);

    // Trace multiplicativity with a normalized second factor.
    ComplexMatrix phi2 = max_entangled(2);
    ComplexMatrix ket0 = diag2(1, 0);
    CHECK_THAT(std::abs(kron(ket0, phi2).trace()), Catch::Matchers::WithinAbs(1.0, 1e-14));
}

TEST_CASE("kron associativity on random inputs") {
    Rng rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        ComplexMatrix a = random_gaussian_matrix(rng, 2, 2);
        ComplexMatrix b = random_gaussian_matrix(rng, 3, 3);
        ComplexMatrix c = random_gaussian_matrix(rng, 2, 2);
        CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-12);
        CHECK_THAT(std::abs(kron(a, b).trace() - a.trace() * b.trace()),
                   Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("partial trace basics") {
    ComplexMatrix phi = max_entangled(2);
    Factorization f{{"M", 2}, {"Mp", 2}};
    ComplexMatrix reduced = partial_trace(phi, f, {"Mp"});
    CHECK(max_abs_diff(reduced, identity(2) / 2.0) < 1e-14);

    Rng rng(5);
    ComplexMatrix a = random_density_matrix(rng, 2);
    ComplexMatrix b = random_density_matrix(rng, 3);
    Factorization fab{{"A", 2}, {"B", 3}};
    CHECK(max_abs_diff(partial_trace(kron(a, b), fab, {"B"}), a * b.trace()) < 1e-13);
    CHECK(max_abs_diff(partial_trace(kron(a, b), fab, {"A"}), b * a.trace()) < 1e-13);

    CHECK_THROWS_AS(partial_trace(phi, f, {"nope"}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(phi, Factorization{{"M", 3}, {"Mp", 2}}, {"Mp"}),
                    std::invalid_argument);
}

TEST_CASE("partial trace composition and trace preservation") {
    Rng rng(7);
    Factorization f{{"x", 2}, {"y", 3}, {"z", 2}};
    ComplexMatrix m = random_gaussian_matrix(rng, 12, 12);

    ComplexMatrix two_step = partial_trace(partial_trace(m, f, {"x"}), f.without(
                                               std::vector<std::string>{"x"}),
                                           {"z"});
    ComplexMatrix one_step = partial_trace(m, f, {"x", "z"});
    CHECK(max_abs_diff(two_step, one_step) < 1e-12);
    CHECK_THAT(std::abs(one_step.trace() - m.trace()), Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("permute factors round trip and known swap") {
    Rng rng(13);
    Factorization f{{"x", 2}, {"y", 3}};
    ComplexMatrix a = random_gaussian_matrix(rng, 2, 2);
    ComplexMatrix b = random_gaussian_matrix(rng, 3, 3);
    std::vector<std::string> swapped{"y", "x"};
    ComplexMatrix m = permute_factors(kron(a, b), f, swapped);
    CHECK(max_abs_diff(m, kron(b, a)) < 1e-13);

    Factorization g{{"y", 3}, {"x", 2}};
    std::vector<std::string> back{"x", "y"};
    CHECK(max_abs_diff(permute_factors(m, g, back), kron(a, b)) < 1e-13);
}

TEST_CASE("embed and assemble agree with direct products") {
    Rng rng(17);
    Factorization f{{"a1", 2}, {"a2", 2}, {"b1", 2}, {"b2", 2}};
    ComplexMatrix op = random_gaussian_matrix(rng, 4, 4);

    // Adjacent placement is a plain sandwiched Kronecker product.
    std::vector<std::string> mid{"a2", "b1"};
    CHECK(max_abs_diff(embed(op, mid, f), kron(kron(identity(2), op), identity(2))) < 1e-13);

    // Non-adjacent placement checked entrywise against index arithmetic.
    std::vector<std::string> outer{"a1", "b2"};
    ComplexMatrix e = embed(op, outer, f);
    for (Index i1 = 0; i1 < 2; ++i1) {
        for (Index i4 = 0; i4 < 2; ++i4) {
            for (Index j1 = 0; j1 < 2; ++j1) {
                for (Index j4 = 0; j4 < 2; ++j4) {
                    Index row = i1 * 8 + 0 * 4 + 1 * 2 + i4;
                    Index col = j1 * 8 + 0 * 4 + 1 * 2 + j4;
                    CHECK(std::abs(e(row, col) - op(i1 * 2 + i4, j1 * 2 + j4)) < 1e-13);
                }
            }
        }
    }

    ComplexMatrix rho = random_density_matrix(rng, 2);
    std::vector<std::pair<ComplexMatrix, std::vector<std::string>>> pieces;
    pieces.push_back({op, {"a1", "b2"}});
    pieces.push_back({rho, {"b1"}});
    pieces.push_back({identity(2), {"a2"}});
    ComplexMatrix assembled = assemble(f, pieces);
    CHECK(max_abs_diff(assembled, embed(op, outer, f) * embed(rho, std::vector<std::string>{"b1"},
                                                              f)) < 1e-12);
}

TEST_CASE("choi of identity and depolarizing channels") {
    ComplexMatrix c_id = choi({identity(2)}, 2, 2);
    ComplexVector v = identity_choi_vector(2);
    CHECK(max_abs_diff(c_id, v * v.adjoint()) == 0.0);
    CHECK_THAT(std::abs(c_id.trace() - Complex(2.0)), Catch::Matchers::WithinAbs(0.0, 1e-14));

    // Completely depolarizing channel: Kraus |i><j| / sqrt(d).
    std::vector<ComplexMatrix> kraus;
    for (Index i = 0; i < 2; ++i) {
        for (Index j = 0; j < 2; ++j) {
            ComplexMatrix k = ComplexMatrix::Zero(2, 2);
            k(i, j) = 1.0 / std::sqrt(2.0);
            kraus.push_back(k);
        }
    }
    ComplexMatrix c_dep = choi(std::span<const ComplexMatrix>(kraus), 2, 2);
    CHECK(max_abs_diff(c_dep, kron(identity(2), identity(2)) / 2.0) < 1e-14);

    CHECK_THROWS_AS(choi({ComplexMatrix::Zero(3, 2)}, 2, 2), std::invalid_argument);
}

TEST_CASE("choi of a random CPTP map has identity marginal") {
    Rng rng(23);
    for (Index d_in : {2, 3}) {
        ComplexMatrix c = random_cptp_choi(rng, d_in, 2);
        CHECK(cptp_trace_residual(c, d_in, 2) < 1e-12);
        CHECK(is_cptp(c, d_in, 2));
    }
}

TEST_CASE("apply_choi matches Kraus action") {
    Rng rng(29);
    auto kraus = random_kraus(rng, 2, 3);
    ComplexMatrix c = choi(std::span<const ComplexMatrix>(kraus), 2, 3);
    ComplexMatrix rho = random_density_matrix(rng, 2);
    ComplexMatrix direct = ComplexMatrix::Zero(3, 3);
    for (const auto &k : kraus) {
        direct += k * rho * k.adjoint();
    }
    CHECK(max_abs_diff(apply_choi(c, 2, 3, rho), direct) < 1e-12);
}

TEST_CASE("max_entangled") {
    ComplexMatrix one = max_entangled(1);
    CHECK(one.rows() == 1);
    CHECK(std::abs(one(0, 0) - Complex(1.0)) < 1e-15);

    ComplexMatrix ups = max_entangled(2);
    ComplexVector expected(4);
    expected << 1, 0, 0, 1;
    expected /= std::sqrt(2.0);
    CHECK(max_abs_diff(ups, expected * expected.adjoint()) < 1e-15);
    CHECK_THAT(std::abs(ups.trace() - Complex(1.0)), Catch::Matchers::WithinAbs(0.0, 1e-14));

    Factorization f{{"M", 3}, {"Mp", 3}};
    CHECK(max_abs_diff(partial_trace(max_entangled(3), f, {"M"}), identity(3) / 3.0) < 1e-14);
    CHECK(max_abs_diff(partial_trace(max_entangled(3), f, {"Mp"}), identity(3) / 3.0) < 1e-14);
}

TEST_CASE("fidelity_pure values") {
    ComplexMatrix ups = max_entangled(2);
    CHECK_THAT(fidelity_pure(ups, ups), Catch::Matchers::WithinAbs(1.0, 1e-12));

    // Product with a maximally mixed first factor gives 1/m^2 for any rho.
    Rng rng(31);
    for (Index m : {2, 3}) {
        ComplexMatrix target = max_entangled(m);
        ComplexMatrix rho = random_density_matrix(rng, m);
        double f = fidelity_pure(target, kron(identity(m) / double(m), rho));
        CHECK_THAT(f, Catch::Matchers::WithinAbs(1.0 / double(m * m), 1e-12));
    }

    // Separable diagonal mixture.
    ComplexMatrix sep = ComplexMatrix::Zero(4, 4);
    sep(0, 0) = 0.5;
    sep(3, 3) = 0.5;
    CHECK_THAT(fidelity_pure(ups, sep), Catch::Matchers::WithinAbs(0.5, 1e-12));

    CHECK_THROWS_AS(fidelity_pure(identity(2) / 2.0, sep), std::invalid_argument);
}

TEST_CASE("fidelity_pure is linear in the state") {
    Rng rng(37);
    ComplexMatrix target = max_entangled(2);
    ComplexMatrix r1 = random_density_matrix(rng, 4);
    ComplexMatrix r2 = random_density_matrix(rng, 4);
    double p = 0.3;
    double mixed = fidelity_pure(target, p * r1 + (1 - p) * r2);
    double split = p * fidelity_pure(target, r1) + (1 - p) * fidelity_pure(target, r2);
    CHECK_THAT(mixed - split, Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("min_eigenvalue and is_psd") {
    CHECK_THAT(min_eigenvalue(identity(3) / 3.0), Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-13));

    ComplexMatrix m(2, 2);
    m << 1, 2, 2, 1;
    CHECK_THAT(min_eigenvalue(m), Catch::Matchers::WithinAbs(-1.0, 1e-12));
    CHECK(!is_psd(m));
    CHECK(is_psd(identity(4)));

    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        ComplexMatrix rho = random_density_matrix(rng, 4);
        CHECK(min_eigenvalue(rho) >= -1e-12);
        CHECK(is_psd(rho, 1e-12));
    }

    ComplexMatrix nh(2, 2);
    nh << 0, 1, 0, 0;
    CHECK_THROWS_AS(min_eigenvalue(nh), std::invalid_argument);
}

TEST_CASE("link reproduces channel application and composition") {
    Rng rng(43);
    ComplexMatrix rho = random_density_matrix(rng, 2);
    ComplexMatrix c1 = random_cptp_choi(rng, 2, 3);
    ComplexMatrix c2 = random_cptp_choi(rng, 3, 2);

    LabeledOp state(rho, Factorization{{"x", 2}});
    LabeledOp chan1(c1, Factorization{{"x", 2}, {"y", 3}});
    LabeledOp chan2(c2, Factorization{{"y", 3}, {"z", 2}});

    // State through one channel.
    LabeledOp out1 = link(state, chan1);
    CHECK(max_abs_diff(out1.mat, apply_choi(c1, 2, 3, rho)) < 1e-12);

    // Choi of the composition, two association orders.
    LabeledOp comp = link(chan1, chan2);
    ComplexMatrix via_both = link(out1, chan2).mat;
    ComplexMatrix via_comp = link(state, comp).mat;
    CHECK(max_abs_diff(via_both, via_comp) < 1e-12);
    CHECK(max_abs_diff(via_both, apply_choi(c2, 3, 2, apply_choi(c1, 2, 3, rho))) < 1e-12);

    // Full contraction equals Tr[A^T B].
    ComplexMatrix w = random_gaussian_matrix(rng, 4, 4);
    ComplexMatrix e = random_gaussian_matrix(rng, 4, 4);
    Factorization fab{{"p", 2}, {"q", 2}};
    LabeledOp lw(w, fab), le(e, fab);
    Complex expect = (e.transpose() * w).trace();
    CHECK(std::abs(link(le, lw).mat(0, 0) - expect) < 1e-12);
}

TEST_CASE("link keeps uncontracted labels in declaration order") {
    Rng rng(47);
    ComplexMatrix rho = random_density_matrix(rng, 4);
    LabeledOp held(rho, Factorization{{"M", 2}, {"Mp", 2}});
    ComplexMatrix c = random_cptp_choi(rng, 2, 2);
    LabeledOp chan(c, Factorization{{"Mp", 2}, {"K", 2}});
    LabeledOp out = link(held, chan);
    REQUIRE(out.systems.size() == 2);
    CHECK(out.systems[0].label == "M");
    CHECK(out.systems[1].label == "K");
    CHECK_THAT(std::abs(out.mat.trace() - Complex(1.0)), Catch::Matchers::WithinAbs(0.0, 1e-12));
}
