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

#include <utility>
#include <vector>

#include "composim/hamiltonian.hpp"
#include "composim/linalg.hpp"

namespace composim {

// Exact channel representation: a d^2 x d^2 matrix acting on column-stacked
// density matrices. Column stacking is the fixed convention everywhere, so
// a unitary conjugation is conj(U) (x) U.
struct Superoperator {
  int dim = 0;
  Mat mat;
};

Superoperator identity_superoperator(int dim);

// Channel rho -> U rho U^dagger. Rejects inputs that are not unitary to 1e-10.
Superoperator unitary_channel(const Mat& u);

// outer after inner (composition in time order: inner acts first).
Superoperator compose(const Superoperator& outer, const Superoperator& inner);

// n-fold self-composition.
Superoperator superop_power(const Superoperator& s, long long n);

// Normalized Choi matrix: the channel applied to half of the maximally
// entangled state. Trace 1 for trace-preserving channels.
Mat choi_matrix(const Superoperator& s);

struct CptpCheck {
  bool cp = false;
  bool tp = false;
  double min_choi_eigenvalue = 0.0;
  double tp_deviation = 0.0;  // max-abs entry of (partial trace - I/d)
};

// Complete positivity (Choi eigenvalues >= -1e-10) and trace preservation
// (output-side partial trace equals I/d to 1e-10).
CptpCheck cptp_check(const Superoperator& s);

// Trace norm of the Choi difference: distance attained on the maximally
// entangled input, hence a certified lower bound on the diamond distance.
// Always <= 2. Every "bound holds" test puts this on the small side of an
// analytic upper bound, so the one-sidedness is safe.
double diamond_lower_bound(const Superoperator& phi, const Superoperator& psi);

// 2 * ||U - V||, the standard unitary-channel distance surrogate; always at
// least as large as diamond_lower_bound of the induced channels.
double unitary_spectral_distance(const Mat& u, const Mat& v);

// Least-squares slope of log(error) versus log(t). Requires >= 4 points,
// positive errors, and t values spanning at least two octaves.
double fit_scaling_exponent(const std::vector<std::pair<double, double>>& points);

// Time where the relaxed (real-valued) deterministic and randomized gate
// costs coincide at fixed epsilon, found by bisection on the log cost ratio;
// |log ratio| <= 1e-9 at the returned time. Throws when no sign change is
// found in the expanded bracket (e.g. commuting Hamiltonians).
double crossover_time(const Hamiltonian& h, double epsilon, int order);

}  // namespace composim
