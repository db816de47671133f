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
#include "composim/rng.hpp"

namespace composim {

// One named library-wide property, checked over randomized instances. detail
// is empty on success and carries the first counterexample otherwise.
struct CheckResult {
  std::string name;
  bool ok = true;
  std::string detail{};
};

// Random dense Hamiltonian: Hermitian Gaussian terms, weights in [0.2, 1],
// normalized by the standard loader path.
Hamiltonian random_hamiltonian(CounterRng& rng, int dim, int terms);

// Haar-ish random unitary via QR of a complex Gaussian matrix.
Mat random_unitary(CounterRng& rng, int dim);

// Runs every cross-module invariant check on seeded random instances. The
// same seed yields the same instances, results, and rendering.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed);

bool all_ok(const std::vector<CheckResult>& checks);

// One line per check: "ok <name>" or "FAIL <name>: <detail>".
std::string render_checks(const std::vector<CheckResult>& checks);

}  // namespace composim
