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

#include "composim/commutators.hpp"

#include <cmath>
#include <stdexcept>

#include "composim/parallel.hpp"

namespace composim {
namespace {

void require_even_order(int order) {
  if (order < 2 || order % 2 != 0) {
    throw std::invalid_argument("nested-commutator order must be an even integer >= 2");
  }
}

void require_small_dim(const Hamiltonian& h) {
  if (h.dim > 64) {
    throw std::invalid_argument("dense commutator enumeration requires dim <= 64");
  }
}

// Depth-first accumulation over suffix indices. nest holds the commutator of
// the first `depth` tuple entries; weight the matching product of h values.
// Summation order is the lexicographic tuple order, fixed for reproducibility.
double suffix_sum(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                  int levels, int depth, const Mat& nest, double weight) {
  if (depth == levels) return weight * spectral_norm(nest);
  double sum = 0.0;
  for (std::size_t gi : subset) {
    const HamTerm& term = h.terms[gi];
    Mat next = term.op * nest - nest * term.op;
    if (max_abs(next) == 0.0) continue;  // all deeper nests vanish identically
    sum += suffix_sum(h, subset, levels, depth + 1, next, weight * term.weight);
  }
  return sum;
}

}  // namespace

bool alpha_within_budget(std::size_t subset_size, int order, std::int64_t budget) {
  const int levels = order + 1;
  double count = 1.0;
  for (int i = 0; i < levels; ++i) {
    count *= static_cast<double>(subset_size);
    if (count > static_cast<double>(budget)) return false;
  }
  return true;
}

double alpha_exact(const Hamiltonian& h, const std::vector<std::size_t>& subset,
                   int order, std::int64_t budget) {
  require_even_order(order);
  require_small_dim(h);
  check_subset(h, subset);
  if (subset.size() < 2) return 0.0;  // every nest is a self-commutator
  if (!alpha_within_budget(subset.size(), order, budget)) {
    throw std::invalid_argument(
        "nested-commutator enumeration over budget; use alpha_bound for this size");
  }
  const int levels = order + 1;
  // Partial sums per innermost index, reduced in index order so the total is
  // identical for any worker count.
  std::vector<double> partial(subset.size(), 0.0);
  parallel_for(subset.size(), [&](std::size_t i) {
    const HamTerm& inner = h.terms[subset[i]];
    partial[i] = suffix_sum(h, subset, levels, 1, inner.op, inner.weight);
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

AlphaReport alpha_bound(const Hamiltonian& h, const Partition& p, int order) {
  require_even_order(order);
  check_partition(h, p);
  const double la = lambda_of(h, p.a_indices);
  const double lb = lambda_of(h, p.b_indices);
  const double pow2 = std::pow(2.0, order);
  AlphaReport rep;
  rep.order = order;
  rep.exact = false;
  rep.alpha_a = pow2 * std::pow(la, order + 1);
  rep.alpha_b = pow2 * std::pow(lb, order + 1);
  double cross = 0.0;
  for (int l = 1; l <= order; ++l) {
    cross += std::pow(la, l) * std::pow(lb, order + 1 - l);
  }
  rep.alpha_cross = pow2 * cross;
  rep.alpha_h = rep.alpha_a + rep.alpha_b + rep.alpha_cross;
  return rep;
}

AlphaReport alpha_report(const Hamiltonian& h, const Partition& p, int order,
                         std::int64_t budget) {
  require_even_order(order);
  check_partition(h, p);
  if (!alpha_within_budget(h.size(), order, budget) || h.dim > 64) {
    return alpha_bound(h, p, order);
  }
  AlphaReport rep;
  rep.order = order;
  rep.exact = true;
  rep.alpha_h = alpha_exact(h, full_subset(h), order, budget);
  rep.alpha_a = alpha_exact(h, p.a_indices, order, budget);
  rep.alpha_b = alpha_exact(h, p.b_indices, order, budget);
  rep.alpha_cross = rep.alpha_h - rep.alpha_a - rep.alpha_b;
  if (rep.alpha_cross < 0.0) rep.alpha_cross = 0.0;  // guard fp cancellation
  return rep;
}

double first_order_comm_sum(const Hamiltonian& h, const std::vector<std::size_t>& left,
                            const std::vector<std::size_t>& right) {
  require_small_dim(h);
  check_subset(h, left);
  check_subset(h, right);
  double sum = 0.0;
  for (std::size_t i : left) {
    for (std::size_t j : right) {
      if (i == j) continue;  // self-commutator is exactly zero
      const Mat comm = h.terms[i].op * h.terms[j].op - h.terms[j].op * h.terms[i].op;
      if (max_abs(comm) == 0.0) continue;
      sum += h.terms[i].weight * h.terms[j].weight * spectral_norm(comm);
    }
  }
  return sum;
}

}  // namespace composim
