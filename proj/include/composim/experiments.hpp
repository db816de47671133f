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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "composim/hamiltonian.hpp"

namespace composim {

// The experiments operate on raw weight vectors where possible so that the
// exponentially decaying family h_i = 2^(-i) can be swept to L = 256, far past
// what matrix-backed Hamiltonians (and the loader's zero-weight cutoff) allow.

// Weights 2^(-1) .. 2^(-l). Sum is 1 - 2^(-l), which rounds to 1.0 in double
// precision for l >= 54; the membership tests below compensate.
std::vector<double> exp_decay_weights(long long l);

// Expected-cost upper bound for one probabilistic partition, assembled from
// the moment bounds:
//   (sqrt(E[L_A^2]b) + sqrt(E[N_B^2]b)) *
//   ((E[P]b / eps)^(1/2k) + sqrt(E[Q^2]b) / eps)
// with E[N_B^2]b = P(|B|=1) + (1 - P(|B|=0) - P(|B|=1)) * n_b^2 computed
// exactly from the per-term probabilities. probs[i] is the chance term i goes
// to the product-formula side; in_s flags the terms with nonzero such chance
// under the threshold rule (kept separate so callers can use an exact
// membership test when the weights underflow double rounding).
struct ExpectedCostBound {
  long long s_size = 0;
  double s_lambda = 0.0;    // sum of weights over the threshold set
  double e_la = 0.0;        // exact expectation of |A|
  double e_lambda_b = 0.0;  // exact expectation of the sampled-side 1-norm
  double e_la2_bound = 0.0;
  double e_nb2_bound = 0.0;
  double e_p_bound = 0.0;
  double e_q2_bound = 0.0;
  double total = 0.0;
};
ExpectedCostBound expected_cost_bound(const std::vector<double>& weights,
                                      const std::vector<double>& probs,
                                      const std::vector<char>& in_s, double chi, double n_b,
                                      double t, double epsilon, int order);

// Trotter-side cost normalization used by the saturation sweep: the 1-norm
// bound L (lambda t)^(1+1/2k) eps^(-1/2k) Upsilon^(1+1/2k) 2^(2+1/2k)
// (2k+1)^(-1/2k), under which the c -> 0 limit of the expected-cost ratio is
// exactly Upsilon^(1/2k) / 2^(1-1/2k).
double saturation_trotter_cost(double lambda, long long l, double t, double epsilon, int order);

// The t where saturation_trotter_cost equals 4 lambda^2 t^2 / eps, in closed
// form.
double saturation_crossover_time(const std::vector<double>& weights, double epsilon, int order);

// Sweep of the probabilistic partition over chi = c lambda / L (so sample
// count n_b = (1+c)^2 * the scheme's lower bound, kept real-valued). c = 0 is
// the all-product-formula limit; c >= L h_max / lambda empties the threshold
// set and reproduces the plain sampling cost exactly.
struct SaturationRow {
  double c = 0.0;
  double n_b = 0.0;
  long long s_size = 0;
  double e_cost = 0.0;  // expected-cost bound
  double c_trott = 0.0;
  double c_qd = 0.0;
  double ratio_trott = 0.0;
  double ratio_qd = 0.0;
};
std::vector<SaturationRow> saturation_experiment(const std::vector<double>& weights, double t,
                                                 double epsilon, int order,
                                                 const std::vector<double>& c_grid);

// Default sweep grid: 0 to L h_max / lambda in 10 steps plus one strictly
// sampling-only point beyond the threshold.
std::vector<double> saturation_c_grid(const std::vector<double>& weights);

// Exponentially decaying family swept over L at the cost-crossover time.
// The commutator factor alpha is a model parameter log2(L)/L here (the
// family's terms are abstract weights, not matrices), so the crossover
// solves 4 lambda^2 t^2 / eps = Upsilon L (Upsilon t)^(1+1/2k) eps^(-1/2k)
// (4 alpha/(2k+1))^(1/2k) in closed form. chi is evaluated directly as
// 2^(-c) lambda / L and threshold membership as i - c - log2(L) < delta with
// delta = -log2(1 - 2^(-L)) via log1p, which stays exact for L up to 256.
struct ExpDecayRow {
  long long l = 0;
  double lambda = 0.0;
  double alpha_model = 0.0;
  double t_star = 0.0;
  double n_b = 0.0;
  double chi = 0.0;
  long long s_size = 0;
  long long s_floor = 0;  // floor(c + log2 L - log2 lambda), for the identity check
  double e_la = 0.0;
  double mc_la = 0.0;
  double la_over_l = 0.0;
  double e_lambda_b = 0.0;
  double mc_lambda_b = 0.0;
  double lambda_b_over_lambda = 0.0;
  double e_cost = 0.0;
  double c_base = 0.0;     // common Trotter / sampling cost at the crossover
  double cost_ratio = 0.0;
  double dev_prob = 0.0;   // empirical P(||A| - E| > E)
  double dev_bound = 0.0;  // 2 exp(-E/3) + 3 SE
};
std::vector<ExpDecayRow> exp_decay_experiment(const std::vector<long long>& l_grid, double c,
                                              double epsilon, int order, long long trials,
                                              std::uint64_t seed);

// Cost-crossover time per target error, on a concrete Hamiltonian.
struct CrossoverRow {
  double epsilon = 0.0;
  double t_star = 0.0;
  double c_trott = 0.0;
  double c_qd = 0.0;
};
std::vector<CrossoverRow> crossover_experiment(const Hamiltonian& h,
                                               const std::vector<double>& eps_grid, int order);

// CSV renderings with fixed column sets; numeric fields use round-trip
// formatting so reruns are byte-identical.
std::string exp_decay_csv(const std::vector<ExpDecayRow>& rows);
std::string saturation_csv(const std::vector<SaturationRow>& rows);
std::string crossover_csv(const std::vector<CrossoverRow>& rows);

}  // namespace composim
