// Copyright 2026 the composim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "composim/metrics.hpp"
#include "composim/pauli.hpp"
#include "composim/qdrift.hpp"

using namespace composim;

namespace {

Hamiltonian xz() {
  return make_hamiltonian(2, {{1.0, pauli_x()}, {1.0, pauli_z()}});
}

}  // namespace

TEST_CASE("single-term sampling channel is the exact rotation") {
  const Hamiltonian h = xz();
  const Superoperator s = qdrift_exact_channel(h, {0}, 0.8, 1);
  // lambda of the subset is 1, so the only gate is e^{iX * 0.8}.
  const Superoperator ref = unitary_channel(expm_i_herm(pauli_x(), 0.8));
  CHECK(max_abs(s.mat - ref.mat) < 1e-13);
}

TEST_CASE("single-sample channel is the weighted mixture of full rotations") {
  const Hamiltonian h = xz();
  const double t = 0.6;
  const Superoperator s = qdrift_exact_channel(h, full_subset(h), t, 1);
  const Superoperator sx = unitary_channel(expm_i_herm(pauli_x(), h.lambda * t));
  const Superoperator sz = unitary_channel(expm_i_herm(pauli_z(), h.lambda * t));
  CHECK(max_abs(s.mat - 0.5 * (sx.mat + sz.mat)) < 1e-13);
}

TEST_CASE("N-sample channel is the N-fold power at t/N") {
  const Hamiltonian h = xz();
  const double t = 0.9;
  const Superoperator s4 = qdrift_exact_channel(h, full_subset(h), t, 4);
  const Superoperator one = qdrift_exact_channel(h, full_subset(h), t / 4.0, 1);
  CHECK(max_abs(s4.mat - superop_power(one, 4).mat) < 1e-12);
}

TEST_CASE("error bound formula") {
  // (2 lambda^2 t^2 / N) e^{2 lambda t / N} at lambda = 1, t = 1, N = 40.
  CHECK(qdrift_error_bound(1.0, 1.0, 40) ==
        doctest::Approx(0.05 * std::exp(0.05)).epsilon(1e-14));
}

TEST_CASE("cost model at lambda=1, t=1, eps=0.1 gives 40 samples") {
  const Hamiltonian h = make_hamiltonian(2, {{1.0, pauli_x()}});
  const QDriftCost c = qdrift_cost(h, full_subset(h), 1.0, 0.1);
  CHECK(c.n == 40);
  CHECK(c.n_relaxed == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(c.gates == doctest::Approx(40.0));
  // The sample count meets the stated bound.
  CHECK(qdrift_error_bound(1.0, 1.0, c.n) <= 0.1);
}

TEST_CASE("epsilon range guard: bound constant needs eps < lambda t ln2 / 2") {
  const Hamiltonian h = make_hamiltonian(2, {{1.0, pauli_x()}});
  const double edge = 0.5 * std::log(2.0);  // lambda t = 1
  CHECK_THROWS_AS(qdrift_cost(h, full_subset(h), 1.0, edge), std::invalid_argument);
  CHECK_NOTHROW(qdrift_cost(h, full_subset(h), 1.0, edge * 0.99));
  CHECK_THROWS_AS(qdrift_cost(h, full_subset(h), 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("sampled sequences are reproducible and replay the fixed rotation") {
  const Hamiltonian h = make_hamiltonian(
      2, {{2.0, pauli_x()}, {0.5, pauli_z()}});  // lambda = 2.5
  const double t = 0.4;
  const long long n = 16;
  const GateSequence a = qdrift_sample(h, full_subset(h), t, n, 7);
  const GateSequence b = qdrift_sample(h, full_subset(h), t, n, 7);
  REQUIRE(a.gates.size() == static_cast<std::size_t>(n));
  REQUIRE(b.gates.size() == a.gates.size());
  for (std::size_t i = 0; i < a.gates.size(); ++i) {
    CHECK(a.gates[i].term_index == b.gates[i].term_index);
    CHECK(a.gates[i].duration == b.gates[i].duration);
  }
  // Stored duration is lambda t / (N h_i): the weighted exponential
  // e^{i h_i Op_i tau} equals the sampler's e^{i Op_i lambda t / N}.
  for (const Gate& g : a.gates) {
    const double want = h.lambda * t / (static_cast<double>(n) * h.terms[g.term_index].weight);
    CHECK(g.duration == doctest::Approx(want).epsilon(1e-13));
  }
  // A different seed changes at least one draw for these parameters.
  const GateSequence c = qdrift_sample(h, full_subset(h), t, n, 8);
  bool same = true;
  for (std::size_t i = 0; i < a.gates.size(); ++i) {
    same = same && a.gates[i].term_index == c.gates[i].term_index;
  }
  CHECK_FALSE(same);
  CHECK(a.order == 0);  // sampled sequences are not product formulas
}

TEST_CASE("subset restriction uses the subset 1-norm") {
  const Hamiltonian h = make_hamiltonian(
      2, {{2.0, pauli_x()}, {0.5, pauli_z()}, {1.5, pauli_y()}});
  // Subset {0, 1}: lambda_sub = 2.5; probabilities 0.8 / 0.2.
  const double t = 0.3;
  const Superoperator s = qdrift_exact_channel(h, {0, 1}, t, 1);
  const Superoperator sx = unitary_channel(expm_i_herm(pauli_x(), 2.5 * t));
  const Superoperator sz = unitary_channel(expm_i_herm(pauli_z(), 2.5 * t));
  CHECK(max_abs(s.mat - (0.8 * sx.mat + 0.2 * sz.mat)) < 1e-13);
}

TEST_CASE("empty subset is rejected") {
  const Hamiltonian h = xz();
  CHECK_THROWS_AS(qdrift_exact_channel(h, {}, 0.5, 1), std::invalid_argument);
}
