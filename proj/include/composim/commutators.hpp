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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "composim/hamiltonian.hpp"

namespace composim {

// Nested-commutator norm sums for a partitioned Hamiltonian at a given even
// order. When exact = false the fields hold the 1-norm upper bounds instead
// of enumerated values; alpha_cross = alpha_h - alpha_a - alpha_b in both
// cases, and every field is nonnegative.
struct AlphaReport {
  double alpha_h = 0.0;
  double alpha_a = 0.0;
  double alpha_b = 0.0;
  double alpha_cross = 0.0;
  int order = 2;
  bool exact = true;
};

inline constexpr std::int64_t kAlphaBudget = 10'000'000;

// True when |subset|^(order+1) norm evaluations fit the enumeration budget.
bool alpha_within_budget(std::size_t subset_size, int order,
                         std::int64_t budget = kAlphaBudget);

// Sum over all (order+1)-tuples (g_1..g_{order+1}) of subset indices of
//   (prod_j h_{g_j}) * || [Op_{g_{order+1}}, [ ... [Op_{g_2}, Op_{g_1}] ]] ||
// by dense enumeration with shared prefixes; subtrees whose partial nest is
// exactly zero are pruned. Requires even order >= 2, dim <= 64, and the
// budget precondition; throws otherwise.
double alpha_exact(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                   int order, std::int64_t budget = kAlphaBudget);

// Closed-form upper bounds: alpha_a <= 2^order * lambda_A^(order+1), same
// shape for B, and cross <= 2^order * sum_{l=1..order} lambda_A^l *
// lambda_B^(order+1-l). alpha_h is their sum so additivity holds exactly.
AlphaReport alpha_bound(const Hamiltonian& h, const Partition& p, int order);

// Exact report when the full enumeration fits the budget, else alpha_bound.
AlphaReport alpha_report(const Hamiltonian& h, const Partition& p, int order,
                         std::int64_t budget = kAlphaBudget);

// sum_{i in left, j in right} h_i h_j ||[Op_i, Op_j]|| over ordered pairs;
// with left == right this is twice the unordered sum.
double first_order_comm_sum(const Hamiltonian& h, const std::vector<std::size_t>& left,
                            const std::vector<std::size_t>& right);

}  // namespace composim
