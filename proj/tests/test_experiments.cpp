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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"

#include "composim/experiments.hpp"
#include "composim/pauli.hpp"
#include "composim/trotter.hpp"

using namespace composim;

TEST_CASE("exponentially decaying weights") {
  const std::vector<double> w = exp_decay_weights(3);
  REQUIRE(w.size() == 3);
  CHECK(w[0] == 0.5);
  CHECK(w[1] == 0.25);
  CHECK(w[2] == 0.125);
  double lambda = 0.0;
  for (double x : w) lambda += x;
  CHECK(lambda == doctest::Approx(0.875).epsilon(1e-15));
  CHECK_THROWS_AS(exp_decay_weights(0), std::invalid_argument);
}

TEST_CASE("crossover time satisfies its defining equation") {
  const std::vector<double> w = exp_decay_weights(16);
  const double eps = 1e-3;
  const double ts = saturation_crossover_time(w, eps, 2);
  CHECK(ts > 0.0);
  double lambda = 0.0;
  for (double x : w) lambda += x;
  const double c_qd = 4.0 * lambda * lambda * ts * ts / eps;
  const double c_tr = saturation_trotter_cost(lambda, 16, ts, eps, 2);
  CHECK(c_qd == doctest::Approx(c_tr).epsilon(1e-9));
}

TEST_CASE("expected cost bound collapses to the deterministic cost at chi=0") {
  // All probabilities 1: E[L_A] = L, the sampled side vanishes, and only the
  // deterministic error term is left.
  const std::vector<double> w = exp_decay_weights(8);
  const std::vector<double> probs(8, 1.0);
  const std::vector<char> in_s(8, 1);
  const double t = 0.1, eps = 1e-3;
  const ExpectedCostBound b = expected_cost_bound(w, probs, in_s, 0.0, 25.0, t, eps, 2);
  CHECK(b.e_la == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(b.e_lambda_b == doctest::Approx(0.0));
  CHECK(b.e_nb2_bound == doctest::Approx(0.0));
  CHECK(b.e_q2_bound == doctest::Approx(0.0));
  CHECK(b.e_la2_bound == doctest::Approx(64.0).epsilon(1e-12));
  CHECK(b.total == doctest::Approx(8.0 * std::sqrt(b.e_p_bound / eps)).epsilon(1e-12));
}

TEST_CASE("expected cost bound collapses to the sampling cost with everything sampled") {
  const std::vector<double> w = exp_decay_weights(8);
  const std::vector<double> probs(8, 0.0);
  const std::vector<char> in_s(8, 0);
  double lambda = 0.0;
  for (double x : w) lambda += x;
  const double t = 0.1, eps = 1e-3, n_b = 30.0;
  const ExpectedCostBound b =
      expected_cost_bound(w, probs, in_s, 2.0 * lambda, n_b, t, eps, 2);
  CHECK(b.e_la == doctest::Approx(0.0));
  CHECK(b.e_lambda_b == doctest::Approx(lambda).epsilon(1e-12));
  // E[N_B^2] bound saturates at n_b^2 and E[Q^2] at (4 t^2 lambda^2 / n_b)^2,
  // so the product is exactly the plain sampling cost.
  const double c_qd = 4.0 * lambda * lambda * t * t / eps;
  CHECK(b.total == doctest::Approx(c_qd).epsilon(1e-12));
}

TEST_CASE("saturation sweep hits both endpoint ratios at order 2") {
  const std::vector<double> w = exp_decay_weights(16);
  const double eps = 1e-3;
  const double ts = saturation_crossover_time(w, eps, 2);
  double lambda = 0.0, hmax = 0.0;
  for (double x : w) {
    lambda += x;
    hmax = std::max(hmax, x);
  }
  const double c_empty = 16.0 * hmax / lambda;  // past this, S is empty
  const std::vector<SaturationRow> rows =
      saturation_experiment(w, ts, eps, 2, {0.0, c_empty * 1.25});
  REQUIRE(rows.size() == 2);
  // c = 0: the bound meets the deterministic normalization exactly at 2k = 2.
  CHECK(rows[0].s_size == 16);
  CHECK(rows[0].ratio_trott == doctest::Approx(1.0).epsilon(1e-9));
  // Sampling-only endpoint: the bound equals the plain sampling cost.
  CHECK(rows[1].s_size == 0);
  CHECK(rows[1].ratio_qd == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("default c grid spans zero to the sampling-only regime") {
  const std::vector<double> w = exp_decay_weights(16);
  const std::vector<double> grid = saturation_c_grid(w);
  REQUIRE(grid.size() == 12);
  CHECK(grid.front() == 0.0);
  double lambda = 0.0;
  for (double x : w) lambda += x;
  CHECK(grid.back() == doctest::Approx(1.25 * 16.0 * 0.5 / lambda).epsilon(1e-12));
}

TEST_CASE("exp-decay experiment: threshold size identity and anchors at L=64") {
  const std::vector<ExpDecayRow> rows = exp_decay_experiment({64}, 1.0, 1e-3, 2, 200, 3);
  REQUIRE(rows.size() == 1);
  const ExpDecayRow& r = rows[0];
  CHECK(r.l == 64);
  // |S| = floor(c + log2 L - log2 lambda) = floor(7 + tiny) = 7.
  CHECK(r.s_floor == 7);
  CHECK(r.s_size == 7);
  CHECK(r.chi == doctest::Approx(0.5 * 1.0 / 64.0).epsilon(1e-12));
  // E[L_A] = |S| - chi sum_{i in S} 1/h_i; the anchor value is about 5.016.
  CHECK(r.e_la == doctest::Approx(5.0156).epsilon(1e-3));
  CHECK(r.lambda == doctest::Approx(1.0));  // 1 - 2^-64 rounds to 1
  CHECK(r.dev_prob <= r.dev_bound);
}

TEST_CASE("exp-decay cost ratios decrease with L") {
  const std::vector<ExpDecayRow> rows =
      exp_decay_experiment({16, 32, 64}, 1.0, 1e-3, 2, 200, 3);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].cost_ratio > rows[1].cost_ratio);
  CHECK(rows[1].cost_ratio > rows[2].cost_ratio);
  // Larger systems push a smaller fraction of terms into the formula side.
  CHECK(rows[0].la_over_l > rows[1].la_over_l);
  CHECK(rows[1].la_over_l > rows[2].la_over_l);
}

TEST_CASE("csv renderings have fixed headers and row counts") {
  const std::vector<ExpDecayRow> rows = exp_decay_experiment({16}, 1.0, 1e-3, 2, 200, 3);
  const std::string csv = exp_decay_csv(rows);
  CHECK(csv.rfind("l,lambda,alpha_model,t_star,n_b,chi,s_size,s_floor,e_la,mc_la,"
                  "la_over_l,e_lambda_b,mc_lambda_b,lambda_b_over_lambda,e_cost,"
                  "c_base,cost_ratio,dev_prob,dev_bound\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

  const std::vector<double> w = exp_decay_weights(8);
  const double ts = saturation_crossover_time(w, 1e-3, 2);
  const std::string sat = saturation_csv(saturation_experiment(w, ts, 1e-3, 2, {0.0, 1.0}));
  CHECK(sat.rfind("c,n_b,s_size,e_cost,c_trott,c_qd,ratio_trott,ratio_qd\n", 0) == 0);
  CHECK(std::count(sat.begin(), sat.end(), '\n') == 3);
}

TEST_CASE("crossover experiment reports equal costs per epsilon") {
  const Hamiltonian h = make_hamiltonian(2, {{1.0, pauli_x()}, {1.0, pauli_z()}});
  const std::vector<CrossoverRow> rows = crossover_experiment(h, {1e-2, 1e-3}, 2);
  REQUIRE(rows.size() == 2);
  for (const CrossoverRow& r : rows) {
    CHECK(r.t_star > 0.0);
    CHECK(r.c_trott == doctest::Approx(r.c_qd).epsilon(1e-6));
  }
  // Tighter targets move the crossover earlier for this scaling.
  CHECK(rows[1].t_star < rows[0].t_star);
}

TEST_CASE("experiment input validation") {
  CHECK_THROWS_AS(exp_decay_experiment({1}, 1.0, 1e-3, 2, 200, 3), std::invalid_argument);
  CHECK_THROWS_AS(exp_decay_experiment({16}, 1.0, 1e-3, 2, 50, 3), std::invalid_argument);
  CHECK_THROWS_AS(exp_decay_experiment({16}, 1.0, 1e-3, 1, 200, 3), std::invalid_argument);
  CHECK_THROWS_AS(saturation_crossover_time(exp_decay_weights(8), 1e-3, 3),
                  std::invalid_argument);
}
