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
#include <utility>
#include <vector>

#include "doctest.h"

#include "composim/metrics.hpp"
#include "composim/pauli.hpp"
#include "composim/qdrift.hpp"
#include "composim/trotter.hpp"

using namespace composim;

TEST_CASE("identity and bit-flip channels sit at the maximal distance 2") {
  const Superoperator id = identity_superoperator(2);
  const Superoperator flip = unitary_channel(pauli_x());
  CHECK(diamond_lower_bound(id, flip) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(diamond_lower_bound(id, id) == doctest::Approx(0.0));
}

TEST_CASE("unitary distance dominates the channel lower bound") {
  const Mat i2 = Mat::Identity(2, 2);
  // ||I - X|| = 2, so the surrogate distance is 4.
  CHECK(unitary_spectral_distance(i2, pauli_x()) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(diamond_lower_bound(unitary_channel(i2), unitary_channel(pauli_x())) <=
        unitary_spectral_distance(i2, pauli_x()) + 1e-12);
}

TEST_CASE("channel composition follows time order") {
  const Mat rx = expm_i_herm(pauli_x(), 0.3);
  const Mat rz = expm_i_herm(pauli_z(), 0.7);
  const Superoperator lhs = compose(unitary_channel(rz), unitary_channel(rx));
  const Superoperator rhs = unitary_channel(Mat(rz * rx));
  CHECK(max_abs(lhs.mat - rhs.mat) < 1e-12);
}

TEST_CASE("superop_power matches repeated rotation") {
  const Superoperator s = unitary_channel(expm_i_herm(pauli_z(), 0.2));
  const Superoperator s3 = superop_power(s, 3);
  const Superoperator ref = unitary_channel(expm_i_herm(pauli_z(), 0.6));
  CHECK(max_abs(s3.mat - ref.mat) < 1e-12);
  CHECK(max_abs(superop_power(s, 0).mat - identity_superoperator(2).mat) < 1e-15);
}

TEST_CASE("cptp check accepts unitary channels and Choi has unit trace") {
  const Superoperator s = unitary_channel(expm_i_herm(pauli_x() + pauli_z(), 0.4));
  const CptpCheck c = cptp_check(s);
  CHECK(c.cp);
  CHECK(c.tp);
  CHECK(c.min_choi_eigenvalue > -1e-10);
  CHECK(c.tp_deviation < 1e-10);
  CHECK(std::abs(choi_matrix(s).trace().real() - 1.0) < 1e-12);
}

TEST_CASE("cptp check flags a non-trace-preserving map") {
  Superoperator bad = identity_superoperator(2);
  bad.mat *= 0.5;
  CHECK_FALSE(cptp_check(bad).tp);
}

TEST_CASE("log-log fit recovers a cubic exactly") {
  std::vector<std::pair<double, double>> pts;
  for (double t : {0.1, 0.2, 0.4, 0.8}) pts.emplace_back(t, 5.0 * t * t * t);
  CHECK(fit_scaling_exponent(pts) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("fit input validation") {
  std::vector<std::pair<double, double>> three = {{0.1, 1.0}, {0.2, 2.0}, {0.4, 3.0}};
  CHECK_THROWS_AS(fit_scaling_exponent(three), std::invalid_argument);

  std::vector<std::pair<double, double>> narrow = {
      {0.10, 1.0}, {0.11, 1.1}, {0.12, 1.2}, {0.13, 1.3}};
  CHECK_THROWS_AS(fit_scaling_exponent(narrow), std::invalid_argument);

  std::vector<std::pair<double, double>> nonpos = {
      {0.1, 1.0}, {0.2, 0.0}, {0.4, 3.0}, {0.8, 4.0}};
  CHECK_THROWS_AS(fit_scaling_exponent(nonpos), std::invalid_argument);
}

TEST_CASE("crossover time equalizes the relaxed costs") {
  const Hamiltonian h = make_hamiltonian(2, {{1.0, pauli_x()}, {1.0, pauli_z()}});
  const double eps = 1e-2;
  const double ts = crossover_time(h, eps, 2);
  const double ct = trotter_cost_relaxed(h, 2, ts, eps);
  const double cq = qdrift_cost_relaxed(h.lambda, ts, eps);
  CHECK(std::abs(std::log(cq / ct)) < 1e-8);
}

TEST_CASE("crossover search rejects commuting Hamiltonians") {
  // Z and I commute, so the product-formula cost is identically zero.
  const Hamiltonian h = make_hamiltonian(2, {{1.0, pauli_z()}, {1.0, pauli_i()}});
  CHECK_THROWS_AS(crossover_time(h, 1e-2, 2), std::runtime_error);
}
