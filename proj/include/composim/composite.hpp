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

#include <string>
#include <vector>

#include "composim/commutators.hpp"
#include "composim/hamiltonian.hpp"
#include "composim/metrics.hpp"

namespace composim {

struct CompositeParams {
  Partition partition;
  int order = 1;
  double t = 0.0;
  double epsilon = 0.0;
  long long n_b = 1;  // randomized samples per B block
  long long r = 1;    // time segments
};

enum class BlockKind { kDeterministic, kSampled };

// One outer-loop slot: which half of the partition runs, and for how long.
struct OuterBlock {
  BlockKind kind = BlockKind::kDeterministic;
  double sub_time = 0.0;
};

// Outer-loop schedule over one segment. Order 1 is [A(t), B(t)] with B
// applied second; order 2 the palindrome [A(t/2), B(t/2), B(t/2), A(t/2)];
// order 2k recurses with the u_k coefficients, giving upsilon blocks of each
// kind whose sub-times telescope to t per kind.
std::vector<OuterBlock> outer_loop_sequence(int order, double t);

// Exact superoperator of the composite channel: per segment (time t/r) the
// schedule runs A blocks as the order-matched product formula and B blocks as
// the exact n_b-sample randomized channel; segments compose r times. An empty
// B collapses to the pure product-formula channel at (order, r) so the
// deterministic limit is bit-exact; an empty A simply skips the A blocks.
Superoperator composite_exact_channel(const Hamiltonian& h, const CompositeParams& params);

// Everything the cost model produces for one configuration. c_trott and c_qd
// are the single-method baselines at the same (t, epsilon); relaxed values
// are pre-ceiling and real-valued. beta solves c_qd = c_trott^beta and is
// NaN when c_trott <= 1. The reexpressed fields restate the segment bound
// through the baseline costs; they upper-bound the direct values.
struct CostReport {
  double c_trott = 0.0;
  double c_qd = 0.0;
  double c_comp = 0.0;
  long long r = 1;
  double r_relaxed = 0.0;
  double c_comp_relaxed = 0.0;
  double p_t = 0.0;
  double q_t = 0.0;
  double p_max = 0.0;
  double q_b = 0.0;
  double beta = 0.0;
  bool exact_alpha = true;
  double r_reexpressed = 0.0;
  double c_reexpressed = 0.0;
  int order = 1;
  double t = 0.0;
  double epsilon = 0.0;
  long long n_b = 1;
  std::size_t l_a = 0;
  std::size_t l_b = 0;
  double lambda_a = 0.0;
  double lambda_b = 0.0;
};

// "key value" lines, one per field, fixed order, round-trip doubles.
std::string serialize_cost_report(const CostReport& rep);

// First-order composite cost: r = ceil((t^2/eps) * (sum_AA + sum_AB +
// 4 lambda_B^2 / N_B)) with both A-A orderings counted and A-B pairs counted
// once; total (L_A + N_B) r exponentials.
CostReport first_order_cost(const Hamiltonian& h, const Partition& p, double t,
                            double epsilon, long long n_b);

// Order-2k composite cost: P(t) = t^(2k+1) (4 upsilon^(2k+1)/(2k+1)) *
// (upsilon alpha_A + alpha_cross), Q(t) = 4 upsilon lambda_B^2 t^2 / N_B,
// r = ceil((P/eps)^(1/2k) + Q/eps), total upsilon (upsilon L_A + N_B) r.
CostReport higher_order_cost(const Hamiltonian& h, const Partition& p, int order,
                             double t, double epsilon, long long n_b);

// Relaxed composite cost at real-valued n_b, the objective the sample-count
// optimizers differentiate.
double composite_cost_relaxed(const Hamiltonian& h, const Partition& p, int order,
                              double t, double epsilon, double n_b);

// Stationary point of the relaxed first-order cost over n_b:
// sqrt(4 lambda_B^2 L_A / (sum_AA + sum_AB)). Returns 0 for empty B; throws
// when every commutator sum vanishes (no finite optimum exists).
double optimal_nb_first(const Hamiltonian& h, const Partition& p);

// Stationary point of the relaxed order-2k cost over n_b:
// 2 upsilon lambda_B t sqrt(L_A / (eps^(1-1/2k) P(t)^(1/2k))). Returns 0 for
// empty B; throws when P(t) = 0.
double optimal_nb_higher(const Hamiltonian& h, const Partition& p, int order,
                         double t, double epsilon);

}  // namespace composim
