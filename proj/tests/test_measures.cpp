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

#include "causametrics/measures.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace causametrics;

namespace {

HarmonicModel model_with_p(double p1, double p2, Index d) {
    double p3 = std::max(0.0, 1.0 - p1 - p2);
    std::array<Complex, 3> alpha{std::sqrt(p1), std::sqrt(p2), std::sqrt(p3)};
    return make_harmonic_model(alpha, d, PsiPreset::MixedB1);
}

MeasureDescriptor descriptor(MeasureKind kind, Direction dir = Direction::AtoB,
                             bool normalized = false, Task task = Task::Ent,
                             double eps = 0.3) {
    MeasureDescriptor m;
    m.kind = kind;
    m.direction = dir;
    m.task = task;
    m.epsilon = eps;
    m.normalized = normalized;
    return m;
}

}  // namespace

TEST_CASE("signalling measure classifies the branch structures") {
    ProcessMatrix w1 = reduce(model_with_p(1.0, 0.0, 2));
    ProcessMatrix w2 = reduce(model_with_p(0.0, 1.0, 2));
    ProcessMatrix w3 = reduce(model_with_p(0.0, 0.0, 2));

    CHECK(signalling_measure(w1, Direction::AtoB) == 1.0);
    CHECK(signalling_measure(w1, Direction::BtoA) == 0.0);
    CHECK(signalling_measure(w2, Direction::AtoB) == 0.0);
    CHECK(signalling_measure(w2, Direction::BtoA) == 1.0);
    CHECK(signalling_measure(w3, Direction::AtoB) == 0.0);
    CHECK(signalling_measure(w3, Direction::BtoA) == 0.0);
}

TEST_CASE("the signalling measure is not convex") {
    // Half a signalling channel plus half a non-signalling state still
    // signals: the mixture value 1 strictly exceeds the mixed values 1/2.
    ProcessMatrix g1 = reduce(model_with_p(1.0, 0.0, 2));
    ProcessMatrix g2 = reduce(model_with_p(0.0, 0.0, 2));
    ProcessMatrix mix(0.5 * g1.matrix + 0.5 * g2.matrix, 2, 2, 2, 2);
    CHECK(validate(mix).all_ok());

    double mixture_value = signalling_measure(mix, Direction::AtoB);
    double value_average = 0.5 * signalling_measure(g1, Direction::AtoB) +
                           0.5 * signalling_measure(g2, Direction::AtoB);
    CHECK(mixture_value == 1.0);
    CHECK(value_average == 0.5);
    CHECK(value_average < mixture_value);
}

TEST_CASE("quantum signalling witnesses sit in the m = 2 window") {
    auto grid = default_epsilon_grid();

    auto r = quantum_signal(model_with_p(0.5, 0.2, 2), Direction::AtoB, grid);
    CHECK(r.signals);
    REQUIRE(r.witness_epsilon.has_value());
    CHECK(*r.witness_epsilon > 0.375);
    CHECK(*r.witness_epsilon < 0.75);
    // The m = 2 window inequality at the witness:
    //   p1 + (1-p1)/4 > 1 - eps > 1/4.
    CHECK(f_ent(0.5, 2) > 1.0 - *r.witness_epsilon);
    CHECK(1.0 - *r.witness_epsilon > 0.25);

    // Purely disconnected model never beats the baseline.
    auto r3 = quantum_signal(model_with_p(0.0, 0.0, 2), Direction::AtoB, grid);
    CHECK(!r3.signals);
    CHECK(!r3.witness_epsilon.has_value());

    // Noiseless channel signals with any witness below 3/4.
    auto r1 = quantum_signal(model_with_p(1.0, 0.0, 3), Direction::AtoB, grid);
    CHECK(r1.signals);
    CHECK(*r1.witness_epsilon < 0.75);
}

TEST_CASE("measure evaluation dispatches by kind") {
    HarmonicModel noiseless = model_with_p(1.0, 0.0, 2);
    HarmonicModel disconnected = model_with_p(0.0, 0.0, 2);

    CHECK(evaluate(descriptor(MeasureKind::Zero), noiseless) == 0.0);
    CHECK(evaluate(descriptor(MeasureKind::Signalling), noiseless) == 1.0);
    CHECK(evaluate(descriptor(MeasureKind::QSignalling), disconnected) == 0.0);

    // Normalized capacity of the noiseless model is one for any dimension.
    for (Index d : {2, 3, 4}) {
        HarmonicModel m = model_with_p(1.0, 0.0, d);
        CHECK_THAT(evaluate(descriptor(MeasureKind::Capacity, Direction::AtoB, true), m),
                   Catch::Matchers::WithinAbs(1.0, 1e-12));
    }

    // Subspace capacity on a model violating the hypothesis is inapplicable.
    HarmonicModel bad =
        make_harmonic_model({std::sqrt(0.5), 0.0, std::sqrt(0.5)}, 2, PsiPreset::Product);
    CHECK_THROWS_AS(
        evaluate(descriptor(MeasureKind::Capacity, Direction::AtoB, false, Task::Sub), bad),
        HypothesisError);

    // Signalling measures evaluate directly on a process matrix too.
    CHECK(evaluate_on_process(descriptor(MeasureKind::Signalling), reduce(noiseless)) == 1.0);
    CHECK_THROWS_AS(evaluate_on_process(descriptor(MeasureKind::Capacity), reduce(noiseless)),
                    std::invalid_argument);
}

TEST_CASE("quantum signalling implies classical signalling on the grid") {
    Rng rng(512);
    auto grid = default_epsilon_grid();
    auto family = sample_measure_family(12, 2, 512);
    for (const auto &model : family) {
        ProcessMatrix w = reduce(model);
        for (Direction dir : {Direction::AtoB, Direction::BtoA}) {
            double qsig = quantum_signal(model, dir, grid).signals ? 1.0 : 0.0;
            double sig = signalling_measure(w, dir);
            CHECK(qsig <= sig);
        }
    }
}

TEST_CASE("sampled quantum-signal oracle certifies the noiseless channel") {
    ProcessMatrix w1 = reduce(model_with_p(1.0, 0.0, 2));
    SampledQuantumSignal s = quantum_signal_oracle(w1, 10, 905, 1);
    CHECK(s.witness_found);
    CHECK(s.best_fidelity > 0.99);

    // Non-signalling resource: no witness, reported as not-found.
    ProcessMatrix w3 = reduce(model_with_p(0.0, 0.0, 2));
    SampledQuantumSignal s3 = quantum_signal_oracle(w3, 10, 906, 1);
    CHECK(!s3.witness_found);
    CHECK(s3.best_fidelity <= 0.25 + 1e-9);
}

TEST_CASE("axiom suite passes for the signalling measure") {
    auto family = sample_measure_family(6, 2, 2024);
    auto ops = sample_channels(8, 2, 2024);
    AxiomReport r = axiom_suite(descriptor(MeasureKind::Signalling), family, ops, 2024);
    CHECK(r.monotone_checks == 6 * 8 * 4);
    CHECK(r.monotone_violations == 0);
    CHECK(r.nonneg_ok);
    CHECK(r.axiom3_ok);
    CHECK(r.unitary_invariance_ok);
    CHECK(r.axiom1_level == "exact");
}

TEST_CASE("axiom suite passes for capacity measures at the fidelity level") {
    auto family = sample_measure_family(5, 2, 77);
    auto ops = sample_channels(6, 2, 77);
    AxiomReport r = axiom_suite(descriptor(MeasureKind::Capacity, Direction::AtoB, true),
                                family, ops, 77);
    CHECK(r.monotone_violations == 0);
    CHECK(r.nonneg_ok);
    CHECK(r.axiom3_ok);
    REQUIRE(r.normalized_range_ok.has_value());
    CHECK(*r.normalized_range_ok);
    CHECK(r.unitary_invariance_ok);
    CHECK(r.axiom1_level == "fidelity");

    // Backward direction exercises the party swap.
    AxiomReport rb = axiom_suite(descriptor(MeasureKind::Capacity, Direction::BtoA), family,
                                 ops, 78);
    CHECK(rb.monotone_violations == 0);
    CHECK(rb.axiom3_ok);
}

TEST_CASE("axiom suite is trivial for the zero measure") {
    auto family = sample_measure_family(4, 2, 99);
    auto ops = sample_channels(3, 2, 99);
    AxiomReport r = axiom_suite(descriptor(MeasureKind::Zero), family, ops, 99);
    CHECK(r.monotone_violations == 0);
    CHECK(r.nonneg_ok);
    CHECK(r.axiom3_ok);
    CHECK(r.unitary_invariance_ok);
}

TEST_CASE("normalized measures stay within the unit interval") {
    auto family = sample_measure_family(10, 3, 311);
    auto grid = default_epsilon_grid(31);
    for (const auto &model : family) {
        for (double eps : {0.1, 0.3, 0.6, 0.9}) {
            double v = evaluate(
                descriptor(MeasureKind::Capacity, Direction::AtoB, true, Task::Ent, eps), model);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
    (void)grid;
}
