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

#include "composim/partition.hpp"
#include "composim/pauli.hpp"
#include "composim/trotter.hpp"

using namespace composim;

namespace {

Hamiltonian xz() {
  return make_hamiltonian(2, {{1.0, pauli_x()}, {1.0, pauli_z()}});
}

Hamiltonian skewed() {
  return make_hamiltonian(
      2, {{1.0, pauli_x()}, {0.4, pauli_y()}, {0.1, pauli_z()}});
}

}  // namespace

TEST_CASE("fractional cost matches the integer model at a 0/1 assignment") {
  // w = (1, 0) reproduces the A={X}, B={Z} first-order cost: 150.
  const Hamiltonian h = xz();
  CHECK(weighted_cost_relaxed(h, {1.0, 0.0}, 1.0, 0.1, 4) ==
        doctest::Approx(150.0).epsilon(1e-12));
}

TEST_CASE("weight gradient matches a central finite difference") {
  const Hamiltonian h = skewed();
  const std::vector<double> w = {0.8, 0.6, 0.3};
  const double t = 0.9, eps = 0.05;
  const long long n_b = 3;
  const std::vector<double> grad = weight_gradient(h, w, t, eps, n_b);
  REQUIRE(grad.size() == 3);
  const double step = 1e-6;
  for (std::size_t m = 0; m < 3; ++m) {
    std::vector<double> up = w, dn = w;
    up[m] += step;
    dn[m] -= step;
    const double fd = (weighted_cost_relaxed(h, up, t, eps, n_b) -
                       weighted_cost_relaxed(h, dn, t, eps, n_b)) /
                      (2.0 * step);
    CHECK(grad[m] == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("fixed-point weight clamps out-of-range values") {
  // For X with Z at w_Z = 0.3: 1 - (2/8 - 0.7) = 1.45, clamped to 1.
  const Hamiltonian h = xz();
  bool clamped = false;
  const double w = fixed_point_weight(h, {0.5, 0.3}, 0, &clamped);
  CHECK(w == 1.0);
  CHECK(clamped);
}

TEST_CASE("descent never increases the cost and stays in the box") {
  const Hamiltonian h = skewed();
  const std::vector<double> init = {0.5, 0.5, 0.5};
  const DescentResult res = descend_weights(h, 0.9, 0.05, 2, init);
  CHECK(res.final_cost <= res.initial_cost + 1e-12);
  REQUIRE(res.weights.weights.size() == 3);
  for (double w : res.weights.weights) {
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
  }
}

TEST_CASE("sample-count floor closed form at order 2") {
  // nb_lower_bound = sqrt(3 lambda t / (8 eps)); lambda=2, t=1, eps=0.1.
  const Hamiltonian h = xz();
  const double want = std::sqrt(3.0 * 2.0 * 1.0 / (8.0 * 0.1));
  CHECK(nb_lower_bound(h, 1.0, 0.1, 2) == doctest::Approx(want).epsilon(1e-12));
  CHECK(nb_lower_bound_value(2.0, 1.0, 0.1, 2) ==
        doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("parametrized sample count interpolates between 4x and 1x the floor") {
  const Hamiltonian h = xz();
  const double lb = nb_lower_bound(h, 1.0, 0.1, 2);  // 2.7386
  CHECK(nb_parametrized(h, 1.0, 0.1, 2, 0.0) == 11);  // ceil(4 * lb)
  CHECK(nb_parametrized(h, 1.0, 0.1, 2, 1.0) ==
        static_cast<long long>(std::ceil(2.25 * lb)));  // (1 + 1/2)^2
  // Large c approaches the floor but never crosses it.
  const long long nb_inf = nb_parametrized(h, 1.0, 0.1, 2, 50.0);
  CHECK(static_cast<double>(nb_inf) >= lb);
  CHECK(nb_inf == 3);
}

TEST_CASE("threshold partition for X+Z at N_B=4") {
  const Hamiltonian h = xz();
  const double t = 1.0, eps = 0.1;
  const ProbPartition pp = prob_partition(h, t, eps, 2, 4.0);
  // chi = (lambda/L)(sqrt(N_B/LB) - 1) with LB = sqrt(7.5).
  const double lb = std::sqrt(7.5);
  const double chi_want = (2.0 / 2.0) * (std::sqrt(4.0 / lb) - 1.0);
  CHECK(pp.chi == doctest::Approx(chi_want).epsilon(1e-12));
  CHECK(pp.chi == doctest::Approx(0.20855006).epsilon(1e-6));
  REQUIRE(pp.probs.size() == 2);
  for (double p : pp.probs) {
    CHECK(p == doctest::Approx(1.0 - chi_want).epsilon(1e-12));
  }
  CHECK(pp.sampling_set.size() == 2);
}

TEST_CASE("sample count below the floor is rejected") {
  const Hamiltonian h = xz();
  CHECK_THROWS_AS(prob_partition(h, 1.0, 0.1, 2, 2.0), std::invalid_argument);
}

TEST_CASE("terms below the threshold are always sampled") {
  // chi for the skewed weights exceeds h_2 = 0.1 at a generous sample count,
  // so term 2 gets probability 0 and leaves the random set.
  const Hamiltonian h = skewed();
  const double lb = nb_lower_bound(h, 1.0, 0.01, 2);
  const ProbPartition pp = prob_partition(h, 1.0, 0.01, 2, 16.0 * lb);
  const double chi = pp.chi;
  CHECK(chi > 0.1);
  CHECK(pp.probs[2] == 0.0);
  for (std::size_t i : pp.sampling_set) CHECK(i != 2);
}

TEST_CASE("partition sampling is reproducible and respects certainty") {
  const Hamiltonian h = skewed();
  ProbPartition pp;
  pp.probs = {1.0, 0.5, 0.0};
  pp.chi = 0.0;
  pp.sampling_set = {0, 1};
  const Partition a = sample_partition(pp, 11);
  const Partition b = sample_partition(pp, 11);
  CHECK(a.a_indices == b.a_indices);
  CHECK(a.b_indices == b.b_indices);
  check_partition(h, a);
  // probs 1 and 0 are deterministic.
  bool zero_in_a = false;
  for (std::size_t i : a.a_indices) zero_in_a = zero_in_a || i == 0;
  CHECK(zero_in_a);
  bool two_in_b = false;
  for (std::size_t i : a.b_indices) two_in_b = two_in_b || i == 2;
  CHECK(two_in_b);
}

TEST_CASE("expected sampled weight and its guarantee for X+Z at N_B=4") {
  const Hamiltonian h = xz();
  const double t = 1.0, eps = 0.1;
  const ProbPartition pp = prob_partition(h, t, eps, 2, 4.0);
  const MomentReport rep = moment_report(h, pp, t, 2, 4, 400, 5);
  // E[lambda_B] = chi |S| + lambda_{S^C} = 2 chi.
  CHECK(rep.e_lambda_b == doctest::Approx(2.0 * pp.chi).epsilon(1e-12));
  CHECK(rep.e_la == doctest::Approx(2.0 * (1.0 - pp.chi)).epsilon(1e-12));
  const double guard = lambda_b_guarantee_bound(h, t, eps, 2, 4.0);
  CHECK(guard == doctest::Approx(3.41828).epsilon(1e-4));
  CHECK(rep.e_lambda_b <= guard);
  // Monte Carlo agrees with the exact expectation within 5 standard errors.
  CHECK(std::abs(rep.mc_lambda_b - rep.e_lambda_b) <=
        5.0 * rep.mc_lambda_b_se + 1e-12);
  CHECK(rep.n_trials == 400);
}

TEST_CASE("improvement diagnostics count noncommuting pairs at order 1") {
  const Hamiltonian h = xz();
  Partition all_a;
  all_a.a_indices = {0, 1};
  Partition split;
  split.a_indices = {0};
  split.b_indices = {1};
  // Both orderings of the noncommuting pair count: N_nz = sqrt(2).
  const ImprovementDiagnostics d_all = improvement_diagnostics(h, all_a, 1.0, 0.1, 1, 1);
  CHECK(d_all.n_nz == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  const ImprovementDiagnostics d_split = improvement_diagnostics(h, split, 1.0, 0.1, 1, 4);
  CHECK(d_split.n_nz == 0.0);
  CHECK(d_split.ratio_lambda_b == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d_split.c_comp == doctest::Approx(150.0));
}
