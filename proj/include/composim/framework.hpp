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

#include <vector>

#include "composim/hamiltonian.hpp"
#include "composim/metrics.hpp"

namespace composim {

// One prepare / controlled-select / unprepare round on a fresh ancilla.
// prep_amplitudes are the ancilla state after preparation (nonnegative,
// squares summing to 1); controlled_ops[j] acts on the system when the
// ancilla is |j>. An empty unprep means identity; post_select < 0 means
// trace the ancilla out, otherwise keep the (unnormalized) branch for that
// ancilla outcome.
struct SelectInstance {
  std::vector<double> prep_amplitudes;
  std::vector<Mat> controlled_ops;
  Mat unprep;
  int post_select = -1;
};

// Composes the instances in list order (first instance acts on the state
// first), each on its own ancilla, and returns the induced system channel.
// Requires dim <= 64 and ancilla * system dimension <= 4096 per instance.
Superoperator template_channel(const std::vector<SelectInstance>& instances, int dim);

// Real unitary whose first column is the given unit vector (a Householder
// reflection, hence self-inverse); the standard preparation circuit.
Mat prep_unitary(const std::vector<double>& amplitudes);

// Single-sample randomized-compilation channel expressed in template form:
// amplitudes sqrt(h_i/lambda), controlled gates e^{i Op_i lambda t}, traced
// out. Equals qdrift_exact_channel(h, subset, t, 1).
SelectInstance qdrift_select_instance(const Hamiltonian& h,
                                      const std::vector<std::size_t>& subset, double t);

// Uniform mixture over all |subset|! first-order orderings in template form.
SelectInstance randomized_trotter_select_instance(const Hamiltonian& h,
                                                  const std::vector<std::size_t>& subset,
                                                  double t);

// (1/|subset|!) sum over orderings of the first-order product channel,
// built directly. Capped at |subset| <= 6.
Superoperator randomized_trotter_channel(const Hamiltonian& h,
                                         const std::vector<std::size_t>& subset, double t);

// Coefficients c with sum_j c_j k_j^(-step*(m-1)) = [m == 1] for m = 1..N:
// the inverse-power Vandermonde system whose solution cancels the low-order
// error terms of powered product formulas. step matches the base formula's
// error series (1 for first order, 2 for the symmetric second order).
// Residual is checked to 1e-10; duplicate k_j are rejected.
std::vector<double> multiproduct_coeffs(const std::vector<long long>& k_vec, int step = 1);

// Builds M(t) = sum_j c_j (S_base(t/k_j))^(k_j) over the full Hamiltonian,
// measures ||M(t) - e^{iHt}|| on the grid, and returns the fitted log-log
// slope. The linear combination is not unitary; it is compared as a plain
// matrix. Requires dim <= 16.
double multiproduct_error_check(const Hamiltonian& h, const std::vector<long long>& k_vec,
                                const std::vector<double>& t_grid, int base_order = 1);

}  // namespace composim
