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

// Relaxed first-order cost of a fractional assignment: (L_A + N_B) (t^2/eps)
// (sum_{i,j} w_i h_i h_j ||[Op_i,Op_j]|| + 4 (sum_i (1-w_i) h_i)^2 / N_B),
// with L_A = #{w_i > 0}. This is the objective the gradient scheme descends.
double weighted_cost_relaxed(const Hamiltonian& h, const std::vector<double>& weights,
                             double t, double epsilon, long long n_b);

// Gradient of weighted_cost_relaxed with L_A held fixed: entry m is
// (L_A + N_B)(t^2/eps)(h_m sum_j h_j ||[Op_j,Op_m]|| - 8 h_m
// sum_i (1-w_i) h_i / N_B).
std::vector<double> weight_gradient(const Hamiltonian& h, const std::vector<double>& weights,
                                    double t, double epsilon, long long n_b);

// Per-coordinate fixed point of the gradient at unit sample count:
// 1 - sum_{i != m} (h_i/h_m)(||[Op_i,Op_m]||/8 - (1-w_i)), clamped to [0,1].
// *clamped (optional) reports whether the raw value fell outside.
double fixed_point_weight(const Hamiltonian& h, const std::vector<double>& weights,
                          std::size_t m, bool* clamped = nullptr);

struct DescentResult {
  WeightedPartition weights;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  long long iterations = 0;
  bool converged = false;  // projected gradient reached tol
};

// Projected gradient descent on weighted_cost_relaxed with backtracking
// (step halves until the cost does not increase). step <= 0 selects the
// default 0.1 / (L * max |gradient| at init). Never returns a higher cost
// than init.
DescentResult descend_weights(const Hamiltonian& h, double t, double epsilon, long long n_b,
                              const std::vector<double>& init, double step = 0.0,
                              double tol = 1e-8, long long max_iters = 10000);

// Sample-count floor for the random-assignment scheme:
// (lambda t / eps)^(1-1/2k) ((2k+1)/(2k+upsilon))^(1/2k) 2^(1-1/k) /
// upsilon^(1/2k). The _value form takes the 1-norm directly, for weight-only
// families.
double nb_lower_bound_value(double lambda, double t, double epsilon, int order);
double nb_lower_bound(const Hamiltonian& h, double t, double epsilon, int order);

// ceil((1 + 2^-c)^2 * nb_lower_bound), never below the lower bound itself.
long long nb_parametrized(const Hamiltonian& h, double t, double epsilon, int order, double c);

// Threshold-probability partition: chi = (lambda/L)(sqrt(N_B (eps/lambda t)^
// (1-1/2k) ((2k+upsilon)/(2k+1))^(1/2k) upsilon^(1/2k) / 2^(1-1/k)) - 1),
// term i deterministic with probability 1 - min{chi/h_i, 1}. Accepts a
// real-valued n_b; throws if n_b is below nb_lower_bound, and verifies the
// expected sampled-side weight bound at construction.
ProbPartition prob_partition(const Hamiltonian& h, double t, double epsilon, int order,
                             double n_b);

// Independent per-term assignment by probs; reproducible per seed, and term
// i's draw depends only on (seed, i).
Partition sample_partition(const ProbPartition& pp, std::uint64_t seed);

// Upper bound on the expected sampled-side weight E[lambda_B] for a
// partition built by prob_partition at these parameters:
// lambda * (1/2) sqrt(((4k+2 upsilon)/(2k+1))^(1/2k) (2 upsilon)^(1+1/2k))
// * sqrt(N_B (eps/lambda t)^(1-1/2k)).
double lambda_b_guarantee_bound(const Hamiltonian& h, double t, double epsilon, int order,
                                double n_b);

// Moments of the randomized partition: exact expectations where closed forms
// exist, analytic upper bounds otherwise, plus Monte Carlo estimates with
// standard errors over n_trials sampled partitions.
struct MomentReport {
  double chi = 0.0;
  std::size_t s_size = 0;     // |S|, terms with random membership
  double lambda_s = 0.0;      // weight inside S
  double lambda_sc = 0.0;     // weight forced to the sampled side
  double e_la = 0.0;          // exact E[L_A]
  double e_lambda_b = 0.0;    // exact E[lambda_B] = chi |S| + lambda_sc
  double e_la2_bound = 0.0;   // bound on E[L_A^2]
  double e_q_bound = 0.0;     // bound on E[Q]
  double e_q2_bound = 0.0;    // bound on E[Q^2]
  double e_p_bound = 0.0;     // bound on E[P]
  double mc_la2 = 0.0, mc_la2_se = 0.0;
  double mc_lambda_b = 0.0, mc_lambda_b_se = 0.0;
  double mc_q = 0.0, mc_q_se = 0.0;
  double mc_p = 0.0, mc_p_se = 0.0;
  bool p_skipped = false;  // exact commutator sums exceeded the budget
  long long n_trials = 0;
};

MomentReport moment_report(const Hamiltonian& h, const ProbPartition& pp, double t,
                           int order, long long n_b, long long n_trials, std::uint64_t seed);

std::string serialize_moment_report(const MomentReport& rep);

// Finite-size ratios that decide which regime a configuration sits in, plus
// the actual cost comparison. beta uses the integer baseline costs and is
// NaN when c_trott <= 1. The n_nz fields are first-order only (square root
// of the ordered noncommuting A-pair count).
struct ImprovementDiagnostics {
  double ratio_la = 0.0;          // L_A (1-q_B)^(1/2k) / L
  double ratio_lambda_b = 0.0;    // lambda_B / lambda
  double ratio_lambda_beta = 0.0; // lambda_B / (lambda^(1/beta) (sqrt(eps)/t)^(1-1/beta))
  double ratio_nb_la = 0.0;       // N_B / L_A
  double ratio_nb = 0.0;          // N_B (1-q_B)^(1/2k) / L
  double beta = 0.0;
  double q_b = 0.0;
  double comp_vs_best = 0.0;      // c_comp / min(c_trott, c_qd)
  double c_trott = 0.0, c_qd = 0.0, c_comp = 0.0;
  double n_nz = 0.0;              // order 1 only
  double nz_pairs_vs_la = 0.0;    // N_nz^2 / L_A
  double lambda_b2_vs_nz = 0.0;   // lambda_B^2 / (a_max^2 N_nz^4 / L_A^2)
  int order = 1;
};

ImprovementDiagnostics improvement_diagnostics(const Hamiltonian& h, const Partition& p,
                                               double t, double epsilon, int order,
                                               long long n_b);

std::string serialize_improvement_diagnostics(const ImprovementDiagnostics& d);

}  // namespace composim
