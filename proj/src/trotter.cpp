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

#include "composim/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace composim {
namespace {

// Pair (value, exact?) for the commutator sum a subset's bound needs.
struct AlphaValue {
  double alpha = 0.0;
  bool exact = true;
};

AlphaValue alpha_subset(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                        int order) {
  if (h.dim <= 64 && alpha_within_budget(subset.size(), order)) {
    return {alpha_exact(h, subset, order), true};
  }
  const double lam = lambda_of(h, subset);
  return {std::pow(2.0, order) * std::pow(lam, order + 1), false};
}

void append_formula(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                    int order, double tau, std::vector<Gate>& out) {
  if (order == 1) {
    for (std::size_t i : subset) out.push_back({i, tau});
    return;
  }
  if (order == 2) {
    for (std::size_t i : subset) out.push_back({i, tau / 2.0});
    for (auto it = subset.rbegin(); it != subset.rend(); ++it) out.push_back({*it, tau / 2.0});
    return;
  }
  const int k = order / 2;
  const double u = suzuki_u(k);
  append_formula(h, subset, order - 2, u * tau, out);
  append_formula(h, subset, order - 2, u * tau, out);
  append_formula(h, subset, order - 2, (1.0 - 4.0 * u) * tau, out);
  append_formula(h, subset, order - 2, u * tau, out);
  append_formula(h, subset, order - 2, u * tau, out);
}

}  // namespace

bool valid_order(int order) { return order == 1 || (order >= 2 && order % 2 == 0); }

long long upsilon(int order) {
  if (order == 1) return 1;
  if (!valid_order(order)) throw std::invalid_argument("formula order must be 1 or even");
  long long u = 2;
  for (int k = 2; k <= order / 2; ++k) u *= 5;
  return u;
}

double suzuki_u(int k) {
  if (k < 2) throw std::invalid_argument("suzuki_u is defined for k >= 2");
  return 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * k - 1.0)));
}

GateSequence trotter_sequence(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                              int order, double t) {
  if (!valid_order(order)) throw std::invalid_argument("formula order must be 1 or even");
  check_subset(h, subset);
  if (subset.empty()) throw std::invalid_argument("trotter_sequence needs a nonempty subset");
  GateSequence seq;
  seq.dim = h.dim;
  seq.order = order;
  seq.total_time = t;
  seq.gates.reserve(static_cast<std::size_t>(upsilon(order)) * subset.size());
  append_formula(h, subset, order, t, seq.gates);
  return seq;
}

Mat sequence_unitary(const GateSequence& seq, const Hamiltonian& h) {
  if (h.dim > 64) throw std::invalid_argument("sequence_unitary requires dim <= 64");
  if (seq.dim != 0 && seq.dim != h.dim) {
    throw std::invalid_argument("gate sequence dimension does not match hamiltonian");
  }
  // One eigendecomposition per distinct term, reused across its gates.
  std::vector<bool> have(h.size(), false);
  std::vector<RVec> evals(h.size());
  std::vector<Mat> evecs(h.size());
  Mat u = Mat::Identity(h.dim, h.dim);
  for (const Gate& g : seq.gates) {
    if (g.term_index >= h.size()) throw std::invalid_argument("gate term index out of range");
    if (!have[g.term_index]) {
      Eigen::SelfAdjointEigenSolver<Mat> es(h.terms[g.term_index].op);
      evals[g.term_index] = es.eigenvalues();
      evecs[g.term_index] = es.eigenvectors();
      have[g.term_index] = true;
    }
    const double theta = h.terms[g.term_index].weight * g.duration;
    const RVec& d = evals[g.term_index];
    Vec phases(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      phases(i) = cxd(std::cos(theta * d(i)), std::sin(theta * d(i)));
    }
    const Mat& v = evecs[g.term_index];
    u = v * phases.asDiagonal() * v.adjoint() * u;
  }
  return u;
}

Mat exact_unitary(const Hamiltonian& h, const std::vector<std::size_t>& subset, double t) {
  return expm_i_herm(dense_sum(h, subset), t);
}

TrotterErrorBound trotter_error_bound(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                                      int order, double t, long long r) {
  if (!valid_order(order)) throw std::invalid_argument("formula order must be 1 or even");
  if (r < 1) throw std::invalid_argument("segment count must be >= 1");
  TrotterErrorBound b;
  const double rd = static_cast<double>(r);
  if (order == 1) {
    const double sum = first_order_comm_sum(h, subset, subset);
    b.alpha = sum;
    b.exact_alpha = true;
    b.spectral_segment = t * t / (2.0 * rd * rd) * sum;
    b.channel_total = 2.0 * rd * b.spectral_segment;
    return b;
  }
  const AlphaValue av = alpha_subset(h, subset, order);
  const double ups = static_cast<double>(upsilon(order));
  b.alpha = av.alpha;
  b.exact_alpha = av.exact;
  b.spectral_segment =
      2.0 * av.alpha / (order + 1.0) * std::pow(ups * t / rd, order + 1);
  b.channel_total = 2.0 * rd * b.spectral_segment;
  return b;
}

TrotterCost trotter_cost(const Hamiltonian& h, int order, double t, double epsilon) {
  if (!valid_order(order)) throw std::invalid_argument("formula order must be 1 or even");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  TrotterCost c;
  const auto all = full_subset(h);
  const double L = static_cast<double>(h.size());
  if (order == 1) {
    const double sum = first_order_comm_sum(h, all, all);
    c.alpha = sum;
    c.exact_alpha = true;
    c.r_relaxed = t * t / (2.0 * epsilon) * sum;
    c.r = std::max<long long>(1, ceil_count(c.r_relaxed));
    c.gates = L * static_cast<double>(c.r);
    return c;
  }
  const AlphaValue av = alpha_subset(h, all, order);
  const double ups = static_cast<double>(upsilon(order));
  const double k2 = static_cast<double>(order);  // 2k
  c.alpha = av.alpha;
  c.exact_alpha = av.exact;
  c.r_relaxed = std::pow(ups * t, 1.0 + 1.0 / k2) / std::pow(epsilon, 1.0 / k2) *
                std::pow(4.0 * av.alpha / (k2 + 1.0), 1.0 / k2);
  c.r = std::max<long long>(1, ceil_count(c.r_relaxed));
  c.gates = ups * L * static_cast<double>(c.r);
  return c;
}

double trotter_cost_relaxed(const Hamiltonian& h, int order, double t, double epsilon) {
  const TrotterCost c = trotter_cost(h, order, t, epsilon);
  const double ups = static_cast<double>(upsilon(order));
  const double L = static_cast<double>(h.size());
  return (order == 1 ? L : ups * L) * c.r_relaxed;
}

}  // namespace composim
