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

#include "composim/gate_sequence.hpp"
#include "composim/hamiltonian.hpp"
#include "composim/metrics.hpp"

namespace composim {

struct QDriftParams {
  long long samples = 1;
  double t = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
};

// Exact mixture channel for N i.i.d. samples over the subset: the
// single-sample channel rho -> sum_i (h_i/lambda) e^{i Op_i lambda t} rho
// e^{-i Op_i lambda t} composed N times at t/N each. Requires dim <= 64 and
// lambda_subset > 0.
Superoperator qdrift_exact_channel(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                                   double t, long long n_samples);

// One Monte Carlo realization: N gates with term index i drawn with
// probability h_i/lambda. Durations are stored as lambda*t/(N*h_i) so that
// replaying e^{i h_i Op_i tau} reproduces the weight-free sampled exponential
// e^{i Op_i lambda t/N}. Reproducible per seed; sample j depends only on
// (seed, j), so parallel generation gives identical sequences.
GateSequence qdrift_sample(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                           double t, long long n_samples, std::uint64_t seed);

struct QDriftCost {
  long long n = 1;         // sample count after ceiling, clamped >= 1
  double n_relaxed = 0.0;  // 4 lambda^2 t^2 / epsilon before ceiling
  double gates = 0.0;      // equals n: one exponential per sample
};

// Sample count meeting target error epsilon. The guard epsilon <
// lambda*t*ln2/2 is what justifies the constant in the bound; out-of-range
// epsilon is a hard error here (but channels for any N stay legal).
QDriftCost qdrift_cost(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                       double t, double epsilon);

// Relaxed (real-valued) gate count 4 lambda^2 t^2 / epsilon, no range guard.
double qdrift_cost_relaxed(double lambda, double t, double epsilon);

// Channel-distance bound (2 lambda^2 t^2 / N) e^{2 lambda t / N}.
double qdrift_error_bound(double lambda, double t, long long n_samples);

}  // namespace composim
