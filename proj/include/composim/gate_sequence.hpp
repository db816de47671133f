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

namespace composim {

// One exponential e^{i h_i Op_i * duration}. Durations may be negative:
// higher-order product formulas contain backward sub-steps.
struct Gate {
  std::size_t term_index = 0;
  double duration = 0.0;
};

// Compiler output: gates applied left to right (gates[0] acts first on the
// state). total_time is the simulated time t, not the sum of |durations|.
struct GateSequence {
  int dim = 0;
  int order = 0;  // 0 marks sampled (non-product-formula) sequences
  double total_time = 0.0;
  std::vector<Gate> gates;
};

// Line-oriented text form:
//   gateseq 1
//   dim <d>
//   order <k>
//   time <t>
//   gates <n>
//   <index> <duration>   (n lines, 0-based indices)
// Doubles use a 17-digit round-trip format; serialize/parse is bit-exact.
std::string serialize_gate_sequence(const GateSequence& seq);
GateSequence parse_gate_sequence(const std::string& text);

// Signed duration sum per term index, length n_terms. The product-formula
// telescoping identity makes each entry equal total_time for covered terms.
std::vector<double> durations_by_term(const GateSequence& seq, std::size_t n_terms);

}  // namespace composim
