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
#include <vector>

#include "composim/commutators.hpp"
#include "composim/gate_sequence.hpp"
#include "composim/hamiltonian.hpp"

namespace composim {

// Stage count of the order-2k product formula: 1 for order 1, 2 for order 2,
// then 2 * 5^(k-1).
long long upsilon(int order);

// Recursion coefficient u_k = 1 / (4 - 4^(1/(2k-1))); 1 - 4 u_k is negative
// for k >= 2, which is where backward sub-steps come from.
double suzuki_u(int k);

// True for the supported formula orders: 1, 2, 4, 6, ...
bool valid_order(int order);

// Product-formula compiler. Order 1 applies terms in subset order (the first
// listed term acts on the state first); order 2 is the palindrome at t/2;
// order 2k recurses with the u_k coefficients. Exactly upsilon * |subset|
// gates, durations per term summing to t, adjacent equal-term gates kept
// separate. Term order follows the subset vector, so callers control it.
GateSequence trotter_sequence(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                              int order, double t);

// Left-to-right product of gate exponentials, each via Hermitian
// eigendecomposition. Requires dim <= 64.
Mat sequence_unitary(const GateSequence& seq, const Hamiltonian& h);

// Exact evolution e^{i t * sum_subset h_i Op_i}, the reference all error
// measurements compare against.
Mat exact_unitary(const Hamiltonian& h, const std::vector<std::size_t>& subset, double t);

struct TrotterErrorBound {
  double spectral_segment = 0.0;  // per-segment product-formula error bound
  double channel_total = 0.0;     // bound on the full r-segment channel distance
  double alpha = 0.0;             // commutator sum used by the formulas
  bool exact_alpha = true;
};

// Error bounds for the r-segment order-matched formula on the subset. Order
// >= 2 uses (2 alpha / (2k+1)) * (upsilon t / r)^(2k+1) per segment and
// 4 r alpha / (2k+1) * (upsilon t / r)^(2k+1) for the channel; order 1 uses
// (t^2 / 2r^2) * sum h_i h_j ||[Op_i, Op_j]|| per segment, channel 2r times
// that. Falls back to the closed-form alpha bound past the enumeration
// budget and flags it.
TrotterErrorBound trotter_error_bound(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                                      int order, double t, long long r);

struct TrotterCost {
  long long r = 1;         // segment count after ceiling, clamped >= 1
  double r_relaxed = 0.0;  // pre-ceiling value, may be < 1
  double gates = 0.0;      // upsilon * L * r (order 1: L * r)
  double alpha = 0.0;
  bool exact_alpha = true;
};

// Segment count and total exponential count needed to reach target error
// epsilon for the full Hamiltonian. Order >= 2: r = ceil((upsilon t)^(1+1/2k)
// / eps^(1/2k) * (4 alpha / (2k+1))^(1/2k)); order 1: r = ceil(t^2/(2 eps) *
// sum h_i h_j ||[Op_i,Op_j]||).
TrotterCost trotter_cost(const Hamiltonian& h, int order, double t, double epsilon);

// Relaxed (real-valued, unclamped) gate count; continuous in t and epsilon,
// used by crossover searches and optimizers.
double trotter_cost_relaxed(const Hamiltonian& h, int order, double t, double epsilon);

}  // namespace composim
