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

#include "composim/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "composim/pauli.hpp"
#include "json.hpp"

namespace composim {
namespace {

using nlohmann::json;

constexpr double kZeroWeightTol = 1e-14;
constexpr double kHermTol = 1e-12;
constexpr double kUnitNormTol = 1e-10;
constexpr int kMaxLoadDim = 4096;

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed) {
      if (it.key() == k) { ok = true; break; }
    }
    if (!ok) throw std::runtime_error("unknown field '" + it.key() + "' in " + where);
  }
}

Mat matrix_from_json(const json& flat, int dim, std::size_t term_idx) {
  const std::size_t n = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
  if (!flat.is_array() || flat.size() != n) {
    throw std::runtime_error("term " + std::to_string(term_idx) + ": matrix must be a flat array of " +
                             std::to_string(n) + " [re,im] pairs (row-major)");
  }
  Mat m(dim, dim);
  for (std::size_t e = 0; e < n; ++e) {
    const json& pair = flat[e];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
      throw std::runtime_error("term " + std::to_string(term_idx) + ": matrix entry " +
                               std::to_string(e) + " is not an [re,im] pair");
    }
    const auto row = static_cast<Eigen::Index>(e / static_cast<std::size_t>(dim));
    const auto col = static_cast<Eigen::Index>(e % static_cast<std::size_t>(dim));
    m(row, col) = cxd(pair[0].get<double>(), pair[1].get<double>());
  }
  return m;
}

// Folds sign and norm of coeff*base into (weight >= 0, unit-norm op). Matrices
// already unit-norm to 1e-10 are kept verbatim so reloading a normalized file
// reproduces identical weights.
HamTerm normalize_term(double coeff, const Mat& base, const std::string& label,
                       std::size_t term_idx) {
  const double scale = std::max(1.0, max_abs(base));
  if (max_abs(base - base.adjoint()) > kHermTol * scale) {
    throw std::runtime_error("term " + std::to_string(term_idx) + " ('" + label +
                             "') is not Hermitian");
  }
  const double s = spectral_norm(base);
  if (s < kZeroWeightTol) {
    throw std::runtime_error("term " + std::to_string(term_idx) + " ('" + label +
                             "') is a zero matrix");
  }
  HamTerm t;
  if (std::abs(s - 1.0) <= kUnitNormTol) {
    t.weight = std::abs(coeff);
    t.op = (coeff < 0.0) ? Mat(-base) : base;
  } else {
    t.weight = std::abs(coeff) * s;
    t.op = ((coeff < 0.0) ? Mat(-base) : base) / s;
  }
  t.label = label;
  if (t.weight < kZeroWeightTol) {
    throw std::runtime_error("term " + std::to_string(term_idx) + " ('" + label +
                             "') has weight below 1e-14");
  }
  return t;
}

Hamiltonian finalize(int dim, std::vector<HamTerm> terms) {
  if (terms.empty()) throw std::runtime_error("hamiltonian has no terms");
  Hamiltonian h;
  h.dim = dim;
  h.terms = std::move(terms);
  double lam = 0.0;
  for (const auto& t : h.terms) {
    if (t.op.rows() != dim || t.op.cols() != dim) {
      throw std::runtime_error("term dimension mismatch: expected " + std::to_string(dim));
    }
    lam += t.weight;
  }
  h.lambda = lam;
  return h;
}

}  // namespace

Hamiltonian parse_hamiltonian(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("hamiltonian parse failure: ") + e.what());
  }
  if (!root.is_object()) throw std::runtime_error("hamiltonian file must be a JSON object");
  reject_unknown_keys(root, {"dim", "terms"}, "top level");
  if (!root.contains("dim") || !root["dim"].is_number_integer()) {
    throw std::runtime_error("missing or non-integer 'dim'");
  }
  const int dim = root["dim"].get<int>();
  if (dim < 1 || dim > kMaxLoadDim) {
    throw std::runtime_error("dim must be in [1, " + std::to_string(kMaxLoadDim) + "]");
  }
  if (!root.contains("terms") || !root["terms"].is_array() || root["terms"].empty()) {
    throw std::runtime_error("missing or empty 'terms' array");
  }

  std::vector<HamTerm> terms;
  std::size_t idx = 0;
  for (const json& jt : root["terms"]) {
    if (!jt.is_object()) throw std::runtime_error("term " + std::to_string(idx) + " is not an object");
    reject_unknown_keys(jt, {"pauli_string", "matrix", "coeff", "label"},
                        "term " + std::to_string(idx));
    const bool has_pauli = jt.contains("pauli_string");
    const bool has_matrix = jt.contains("matrix");
    if (has_pauli == has_matrix) {
      throw std::runtime_error("term " + std::to_string(idx) +
                               " must have exactly one of pauli_string or matrix");
    }
    double coeff = 1.0;
    if (jt.contains("coeff")) {
      if (!jt["coeff"].is_number()) {
        throw std::runtime_error("term " + std::to_string(idx) + ": coeff must be a real number");
      }
      coeff = jt["coeff"].get<double>();
    }
    std::string label;
    if (jt.contains("label")) {
      if (!jt["label"].is_string()) {
        throw std::runtime_error("term " + std::to_string(idx) + ": label must be a string");
      }
      label = jt["label"].get<std::string>();
    }

    Mat base;
    if (has_pauli) {
      if (!jt["pauli_string"].is_string()) {
        throw std::runtime_error("term " + std::to_string(idx) + ": pauli_string must be a string");
      }
      const std::string s = jt["pauli_string"].get<std::string>();
      try {
        base = pauli_string_matrix(s);
      } catch (const std::invalid_argument& e) {
        // Parser contract: malformed input always surfaces as runtime_error.
        throw std::runtime_error("term " + std::to_string(idx) + ": " + e.what());
      }
      if (base.rows() != dim) {
        throw std::runtime_error("term " + std::to_string(idx) + ": pauli_string '" + s +
                                 "' has dimension " + std::to_string(base.rows()) +
                                 ", expected " + std::to_string(dim));
      }
      if (label.empty()) label = s;
    } else {
      base = matrix_from_json(jt["matrix"], dim, idx);
    }
    terms.push_back(normalize_term(coeff, base, label, idx));
    ++idx;
  }
  return finalize(dim, std::move(terms));
}

Hamiltonian load_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open hamiltonian file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_hamiltonian(buf.str());
}

Hamiltonian make_hamiltonian(int dim, const std::vector<std::pair<double, Mat>>& terms) {
  std::vector<HamTerm> out;
  out.reserve(terms.size());
  std::size_t idx = 0;
  for (const auto& [coeff, base] : terms) {
    out.push_back(normalize_term(coeff, base, "t" + std::to_string(idx), idx));
    ++idx;
  }
  return finalize(dim, std::move(out));
}

void check_subset(const Hamiltonian& h, const std::vector<std::size_t>& subset) {
  std::vector<bool> seen(h.size(), false);
  for (std::size_t i : subset) {
    if (i >= h.size()) {
      throw std::invalid_argument("subset index " + std::to_string(i) + " out of range (L=" +
                                  std::to_string(h.size()) + ")");
    }
    if (seen[i]) throw std::invalid_argument("duplicate subset index " + std::to_string(i));
    seen[i] = true;
  }
}

void check_partition(const Hamiltonian& h, const Partition& p) {
  std::vector<int> count(h.size(), 0);
  for (std::size_t i : p.a_indices) {
    if (i >= h.size()) throw std::invalid_argument("partition A index out of range");
    ++count[i];
  }
  for (std::size_t i : p.b_indices) {
    if (i >= h.size()) throw std::invalid_argument("partition B index out of range");
    ++count[i];
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (count[i] != 1) {
      throw std::invalid_argument("partition must assign each term exactly once (term " +
                                  std::to_string(i) + " assigned " + std::to_string(count[i]) +
                                  " times)");
    }
  }
}

double lambda_of(const Hamiltonian& h, const std::vector<std::size_t>& subset) {
  check_subset(h, subset);
  double lam = 0.0;
  for (std::size_t i : subset) lam += h.terms[i].weight;
  return lam;
}

Mat dense_sum(const Hamiltonian& h, const std::vector<std::size_t>& subset) {
  check_subset(h, subset);
  Mat m = Mat::Zero(h.dim, h.dim);
  for (std::size_t i : subset) m += h.terms[i].weight * h.terms[i].op;
  return m;
}

std::vector<std::size_t> full_subset(const Hamiltonian& h) {
  std::vector<std::size_t> s(h.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
  return s;
}

Partition partition_from_weights(const Hamiltonian& h, const WeightedPartition& w) {
  if (w.weights.size() != h.size()) {
    throw std::invalid_argument("weight vector length must equal term count");
  }
  Partition p;
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    const double wi = w.weights[i];
    if (wi < 0.0 || wi > 1.0) throw std::invalid_argument("weights must lie in [0,1]");
    if (wi > 0.0) {
      p.a_indices.push_back(i);
    } else {
      p.b_indices.push_back(i);
    }
  }
  return p;
}

}  // namespace composim
