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
#include <vector>

#include "doctest.h"

#include "composim/framework.hpp"
#include "composim/pauli.hpp"
#include "composim/qdrift.hpp"

using namespace composim;

namespace {

Hamiltonian xz() {
  return make_hamiltonian(2, {{1.0, pauli_x()}, {1.0, pauli_z()}});
}

}  // namespace

TEST_CASE("preparation unitary is a reflection with the target first column") {
  const std::vector<double> amps = {0.6, 0.8};
  const Mat u = prep_unitary(amps);
  CHECK(u(0, 0).real() == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(u(1, 0).real() == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(max_abs(Mat(u * u.adjoint()) - Mat::Identity(2, 2)) < 1e-12);
  // Householder reflections are self-inverse.
  CHECK(max_abs(Mat(u * u) - Mat::Identity(2, 2)) < 1e-12);
}

TEST_CASE("template form of the sampling channel matches the direct build") {
  const Hamiltonian h = xz();
  const double t = 0.7;
  const SelectInstance inst = qdrift_select_instance(h, full_subset(h), t);
  const Superoperator lhs = template_channel({inst}, h.dim);
  const Superoperator rhs = qdrift_exact_channel(h, full_subset(h), t, 1);
  CHECK(max_abs(lhs.mat - rhs.mat) < 1e-12);

  // Two stacked instances at t/2 give the two-sample channel.
  const SelectInstance half = qdrift_select_instance(h, full_subset(h), t / 2.0);
  const Superoperator two = template_channel({half, half}, h.dim);
  const Superoperator ref2 = qdrift_exact_channel(h, full_subset(h), t, 2);
  CHECK(max_abs(two.mat - ref2.mat) < 1e-12);
}

TEST_CASE("post-selected branch keeps the unnormalized Kraus block") {
  // unprep = I and amplitudes (1, 0): branch 1 collects only zero weight.
  SelectInstance inst;
  inst.prep_amplitudes = {1.0, 0.0};
  inst.controlled_ops = {pauli_x(), pauli_z()};
  inst.unprep = Mat::Identity(2, 2);
  inst.post_select = 1;
  CHECK_THROWS_AS(template_channel({inst}, 2), std::runtime_error);

  inst.post_select = 0;
  const Superoperator s = template_channel({inst}, 2);
  // K_0 = X, so the branch is the full flip channel.
  const Superoperator ref = unitary_channel(pauli_x());
  CHECK(max_abs(s.mat - ref.mat) < 1e-12);
}

TEST_CASE("instance validation") {
  SelectInstance inst;
  inst.prep_amplitudes = {1.0};
  inst.controlled_ops = {pauli_x(), pauli_z()};  // count mismatch
  CHECK_THROWS_AS(template_channel({inst}, 2), std::invalid_argument);

  inst.controlled_ops = {pauli_x()};
  inst.prep_amplitudes = {0.5};  // squares do not sum to 1
  CHECK_THROWS_AS(template_channel({inst}, 2), std::invalid_argument);

  inst.prep_amplitudes = {-1.0};  // negative amplitude
  CHECK_THROWS_AS(template_channel({inst}, 2), std::invalid_argument);

  inst.prep_amplitudes = {1.0};
  inst.controlled_ops = {Mat(2.0 * pauli_x())};  // not unitary
  CHECK_THROWS_AS(template_channel({inst}, 2), std::invalid_argument);
}

TEST_CASE("uniform ordering mixture matches its template form") {
  const Hamiltonian h = make_hamiltonian(
      2, {{1.0, pauli_x()}, {0.5, pauli_y()}, {0.25, pauli_z()}});
  const double t = 0.3;
  const Superoperator direct = randomized_trotter_channel(h, full_subset(h), t);
  const SelectInstance inst =
      randomized_trotter_select_instance(h, full_subset(h), t);
  REQUIRE(inst.prep_amplitudes.size() == 6);  // 3! orderings
  const Superoperator via_template = template_channel({inst}, h.dim);
  CHECK(max_abs(direct.mat - via_template.mat) < 1e-12);
}

TEST_CASE("ordering mixture cap") {
  std::vector<std::pair<double, Mat>> terms;
  for (int i = 0; i < 7; ++i) terms.push_back({1.0, pauli_x()});
  const Hamiltonian h = make_hamiltonian(2, terms);
  CHECK_THROWS_AS(randomized_trotter_channel(h, full_subset(h), 0.1),
                  std::invalid_argument);
}

TEST_CASE("multiproduct coefficients for k=(1,2)") {
  // Step 1: c1 + c2 = 1 and c1 + c2/2 = 0, so c = (-1, 2).
  const std::vector<double> c1 = multiproduct_coeffs({1, 2}, 1);
  REQUIRE(c1.size() == 2);
  CHECK(c1[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(c1[1] == doctest::Approx(2.0).epsilon(1e-12));

  // Step 2: c1 + c2 = 1 and c1 + c2/4 = 0, so c = (-1/3, 4/3).
  const std::vector<double> c2 = multiproduct_coeffs({1, 2}, 2);
  CHECK(c2[0] == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(c2[1] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  // Coefficients always sum to one (the m = 1 equation).
  const std::vector<double> c3 = multiproduct_coeffs({2, 3, 5, 7}, 1);
  double sum = 0.0;
  for (double c : c3) sum += c;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_THROWS_AS(multiproduct_coeffs({2, 2}, 1), std::invalid_argument);
  CHECK_THROWS_AS(multiproduct_coeffs({}, 1), std::invalid_argument);
}

TEST_CASE("multiproduct combination lifts the error order") {
  const Hamiltonian h = xz();
  const std::vector<double> grid = {0.02, 0.04, 0.08, 0.16, 0.32};
  // Base order 1 alone scales as t^2; adding k=2 cancels that term.
  const double base = multiproduct_error_check(h, {1}, grid, 1);
  CHECK(base == doctest::Approx(2.0).epsilon(0.15));
  const double lifted = multiproduct_error_check(h, {1, 2}, grid, 1);
  CHECK(lifted == doctest::Approx(3.0).epsilon(0.15));
  CHECK(lifted - base >= 0.7);
}
