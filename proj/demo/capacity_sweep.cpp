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

// Sweeps the branch-1 weight of a qubit harmonic model and prints where the
// one-shot capacities turn on, turn maximal, and beat the best
// non-signalling resource.

#include <cstdio>

#include "causametrics/causametrics.hpp"

using namespace causametrics;

int main() {
    const Index d = 2;
    const double eps = 0.3;

    std::printf("qubit models at epsilon = %.2f\n", eps);
    std::printf("%6s %10s %10s %8s %8s %14s\n", "p1", "Q_ent", "Q_sub", "zero?", "max?",
                "beats baseline");
    for (int i = 0; i <= 20; ++i) {
        double p1 = i / 20.0;
        HarmonicModel model = make_harmonic_model(
            {std::sqrt(p1), 0.0, std::sqrt(1.0 - p1)}, d, PsiPreset::MixedB1);
        CapacityQuery q = CapacityQuery::from_model(model, Task::Ent, Direction::AtoB, eps);
        CapacityQuery s = q;
        s.task = Task::Sub;
        QuantumSignalResult witness = quantum_signal(model, Direction::AtoB);
        std::printf("%6.2f %10.4f %10.4f %8s %8s %14s\n", p1, q_ent(q), q_sub(s),
                    zero_capacity_iff(p1, eps) ? "yes" : "no",
                    max_capacity_iff(p1, d, eps) ? "yes" : "no",
                    witness.signals ? "yes" : "no");
    }

    std::printf("\nzero-capacity threshold for p1 = 0.5: epsilon* = %.6f\n",
                find_zero_threshold(
                    CapacityProfile::from_model(
                        make_harmonic_model({std::sqrt(0.5), 0.0, std::sqrt(0.5)}, d,
                                            PsiPreset::MixedB1),
                        Direction::AtoB),
                    1e-6));
    return 0;
}
