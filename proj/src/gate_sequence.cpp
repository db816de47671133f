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

#include "composim/gate_sequence.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "composim/linalg.hpp"

namespace composim {
namespace {

std::string take_line(std::istringstream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(std::string("gate sequence truncated before ") + what);
  }
  return line;
}

// Reads "<key> <value>" and returns the value text.
std::string keyed_value(std::istringstream& in, const std::string& key) {
  const std::string line = take_line(in, key.c_str());
  if (line.rfind(key + " ", 0) != 0) {
    throw std::runtime_error("gate sequence: expected '" + key + " ...', got '" + line + "'");
  }
  return line.substr(key.size() + 1);
}

}  // namespace

std::string serialize_gate_sequence(const GateSequence& seq) {
  std::ostringstream out;
  out << "gateseq 1\n";
  out << "dim " << seq.dim << "\n";
  out << "order " << seq.order << "\n";
  out << "time " << format_double(seq.total_time) << "\n";
  out << "gates " << seq.gates.size() << "\n";
  for (const Gate& g : seq.gates) {
    out << g.term_index << " " << format_double(g.duration) << "\n";
  }
  return out.str();
}

GateSequence parse_gate_sequence(const std::string& text) {
  std::istringstream in(text);
  if (take_line(in, "magic") != "gateseq 1") {
    throw std::runtime_error("gate sequence: bad magic line (want 'gateseq 1')");
  }
  GateSequence seq;
  seq.dim = std::stoi(keyed_value(in, "dim"));
  seq.order = std::stoi(keyed_value(in, "order"));
  seq.total_time = std::strtod(keyed_value(in, "time").c_str(), nullptr);
  const long long n = std::stoll(keyed_value(in, "gates"));
  if (n < 0) throw std::runtime_error("gate sequence: negative gate count");
  seq.gates.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const std::string line = take_line(in, "gate line");
    std::istringstream ls(line);
    long long idx = -1;
    std::string dur;
    if (!(ls >> idx >> dur) || idx < 0) {
      throw std::runtime_error("gate sequence: malformed gate line '" + line + "'");
    }
    seq.gates.push_back({static_cast<std::size_t>(idx), std::strtod(dur.c_str(), nullptr)});
  }
  return seq;
}

std::vector<double> durations_by_term(const GateSequence& seq, std::size_t n_terms) {
  std::vector<double> sums(n_terms, 0.0);
  for (const Gate& g : seq.gates) {
    if (g.term_index >= n_terms) {
      throw std::invalid_argument("gate term index out of range");
    }
    sums[g.term_index] += g.duration;
  }
  return sums;
}

}  // namespace composim
