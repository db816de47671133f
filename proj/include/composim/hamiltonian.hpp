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
#include <string>
#include <vector>

#include "composim/linalg.hpp"

namespace composim {

// One Hamiltonian term h * Op with h >= 0 and ||Op|| = 1. The sign and the
// norm of any supplied matrix are folded into (weight, op) at load time, so
// downstream code can rely on both invariants unconditionally.
struct HamTerm {
  double weight = 0.0;
  Mat op;
  std::string label;
};

// H = sum_i h_i Op_i on a d-dimensional space. Term order is the file order
// and is significant: product formulas depend on it.
struct Hamiltonian {
  int dim = 0;
  std::vector<HamTerm> terms;
  double lambda = 0.0;  // cached sum of weights

  std::size_t size() const { return terms.size(); }
};

// Disjoint split of term indices: A is simulated deterministically, B by
// randomized sampling. Indices are 0-based throughout the library.
struct Partition {
  std::vector<std::size_t> a_indices;
  std::vector<std::size_t> b_indices;
};

// Fractional assignment used by the gradient scheme; w_i = 1 puts term i
// fully on the deterministic side.
struct WeightedPartition {
  std::vector<double> weights;
};

// Random-assignment scheme: term i goes to the deterministic side with
// probability probs[i]. sampling_set lists the indices with probs[i] > 0,
// i.e. those whose membership is actually random or certain-deterministic.
struct ProbPartition {
  std::vector<double> probs;
  double chi = 0.0;
  std::vector<std::size_t> sampling_set;
};

// Parses the JSON Hamiltonian format (see README): top-level {dim, terms},
// each term {pauli_string|matrix, coeff?, label?}. Unknown keys are errors.
// Matrices are checked Hermitian and normalized; throws std::runtime_error
// with a specific diagnostic on any violation.
Hamiltonian load_hamiltonian(const std::string& path);

// Same parser applied to an in-memory JSON string.
Hamiltonian parse_hamiltonian(const std::string& json_text);

// Builds a Hamiltonian directly from (weight, op) pairs; runs the same
// validation and normalization as the file loader.
Hamiltonian make_hamiltonian(int dim, const std::vector<std::pair<double, Mat>>& terms);

// Sum of weights over subset; empty subset gives 0. Throws on out-of-range
// or duplicate indices.
double lambda_of(const Hamiltonian& h, const std::vector<std::size_t>& subset);

// Dense sum_{i in subset} h_i Op_i; empty subset gives the zero matrix.
Mat dense_sum(const Hamiltonian& h, const std::vector<std::size_t>& subset);

// All indices 0..L-1, the "no partition" subset.
std::vector<std::size_t> full_subset(const Hamiltonian& h);

// Validates in-range and duplicate-free; throws std::invalid_argument.
void check_subset(const Hamiltonian& h, const std::vector<std::size_t>& subset);

// Validates A and B are disjoint and cover 0..L-1; throws otherwise.
void check_partition(const Hamiltonian& h, const Partition& p);

// Partition from a 0/1-thresholded weight vector: w_i > 0 joins A.
Partition partition_from_weights(const Hamiltonian& h, const WeightedPartition& w);

}  // namespace composim
