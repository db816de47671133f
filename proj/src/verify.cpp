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

#include "composim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "composim/commutators.hpp"
#include "composim/composite.hpp"
#include "composim/framework.hpp"
#include "composim/metrics.hpp"
#include "composim/partition.hpp"
#include "composim/qdrift.hpp"
#include "composim/trotter.hpp"

namespace composim {
namespace {

// Each named check gets its own rng stream so editing one check never
// perturbs the instances another check sees.
CounterRng check_rng(std::uint64_t seed, std::uint64_t check_id) {
  return CounterRng(seed, 1000 + check_id);
}

std::string fail_detail(const std::string& what, double got, double limit) {
  return what + ": " + format_double(got) + " vs limit " + format_double(limit);
}

// Records only the first counterexample; later ones add nothing.
void record(CheckResult& res, bool ok, const std::string& detail) {
  if (!ok && res.ok) {
    res.ok = false;
    res.detail = detail;
  }
}

std::vector<std::size_t> random_subset_split(CounterRng& rng, std::size_t l,
                                             std::vector<std::size_t>* rest) {
  std::vector<std::size_t> a;
  rest->clear();
  for (std::size_t i = 0; i < l; ++i) {
    if (rng.next_double() < 0.5) {
      a.push_back(i);
    } else {
      rest->push_back(i);
    }
  }
  return a;
}

// Direct odometer enumeration of the (order+1)-tuple commutator sum, the
// independent oracle for the prefix-sharing implementation. Classes: 0 = all
// tuples, 1 = only tuples mixing both partition sides.
double brute_force_alpha(const Hamiltonian& h, const std::vector<std::size_t>& subset, int order,
                         bool mixed_only, const std::vector<char>& is_a) {
  if (subset.empty()) return 0.0;
  const std::size_t width = static_cast<std::size_t>(order) + 1;
  std::vector<std::size_t> digits(width, 0);
  double total = 0.0;
  while (true) {
    bool any_a = false;
    bool any_b = false;
    for (std::size_t d : digits) {
      if (is_a[subset[d]]) {
        any_a = true;
      } else {
        any_b = true;
      }
    }
    if (!mixed_only || (any_a && any_b)) {
      Mat nest = h.terms[subset[digits[0]]].op;
      double weight = h.terms[subset[digits[0]]].weight;
      for (std::size_t j = 1; j < width; ++j) {
        const Mat& op = h.terms[subset[digits[j]]].op;
        nest = op * nest - nest * op;
        weight *= h.terms[subset[digits[j]]].weight;
      }
      if (max_abs(nest) != 0.0) total += weight * spectral_norm(nest);
    }
    std::size_t pos = 0;
    while (pos < width && ++digits[pos] == subset.size()) {
      digits[pos] = 0;
      ++pos;
    }
    if (pos == width) break;
  }
  return total;
}

double scaled_time(CounterRng& rng, const Hamiltonian& h) {
  return rng.uniform(0.1, 1.0) / h.lambda;
}

// ---------------------------------------------------------------------------
// hamiltonian module

CheckResult check_weights_1norm_additive(std::uint64_t seed) {
  CheckResult res{"weights-1norm-additive"};
  CounterRng rng = check_rng(seed, 1);
  for (int inst = 0; inst < 50 && res.ok; ++inst) {
    const int dim = rng.next_double() < 0.5 ? 2 : 4;
    const int l = 2 + static_cast<int>(rng.below(4));
    const Hamiltonian h = random_hamiltonian(rng, dim, l);
    double manual = 0.0;
    for (const auto& t : h.terms) manual += t.weight;
    record(res, std::abs(h.lambda - manual) <= 1e-12 * manual,
           fail_detail("lambda cache", h.lambda, manual));
    std::vector<std::size_t> b;
    const std::vector<std::size_t> a = random_subset_split(rng, h.size(), &b);
    const double split = lambda_of(h, a) + lambda_of(h, b);
    record(res, std::abs(split - h.lambda) <= 1e-12 * h.lambda,
           fail_detail("lambda_A + lambda_B", split, h.lambda));
  }
  return res;
}

CheckResult check_dense_sum_additive(std::uint64_t seed) {
  CheckResult res{"dense-sum-additive"};
  CounterRng rng = check_rng(seed, 2);
  for (int inst = 0; inst < 50 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 2 + static_cast<int>(rng.below(4)));
    std::vector<std::size_t> b;
    const std::vector<std::size_t> a = random_subset_split(rng, h.size(), &b);
    const double diff =
        max_abs(dense_sum(h, a) + dense_sum(h, b) - dense_sum(h, full_subset(h)));
    record(res, diff <= 1e-12, fail_detail("entrywise split sum", diff, 1e-12));
  }
  return res;
}

CheckResult check_normalization_idempotent(std::uint64_t seed) {
  CheckResult res{"normalization-idempotent"};
  CounterRng rng = check_rng(seed, 3);
  for (int inst = 0; inst < 20 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 3);
    std::vector<std::pair<double, Mat>> again;
    for (const auto& t : h.terms) again.emplace_back(t.weight, t.op);
    const Hamiltonian h2 = make_hamiltonian(h.dim, again);
    for (std::size_t i = 0; i < h.size(); ++i) {
      record(res, h.terms[i].weight == h2.terms[i].weight,
             fail_detail("term weight changed on reload", h2.terms[i].weight,
                         h.terms[i].weight));
      record(res, max_abs(h.terms[i].op - h2.terms[i].op) == 0.0,
             "term op changed on reload at index " + std::to_string(i));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// commutators module

CheckResult check_commutator_sum_additive(std::uint64_t seed) {
  CheckResult res{"nested-commutator-sum-additive"};
  CounterRng rng = check_rng(seed, 4);
  for (int inst = 0; inst < 30 && res.ok; ++inst) {
    const int order = inst % 3 == 0 ? 4 : 2;
    const Hamiltonian h = random_hamiltonian(rng, 4, 2 + static_cast<int>(rng.below(3)));
    Partition p;
    p.a_indices = random_subset_split(rng, h.size(), &p.b_indices);
    std::vector<char> is_a(h.size(), 0);
    for (std::size_t i : p.a_indices) is_a[i] = 1;
    const auto full = full_subset(h);
    const double dfs = alpha_exact(h, full, order);
    const double brute = brute_force_alpha(h, full, order, false, is_a);
    record(res, std::abs(dfs - brute) <= 1e-9 * std::max(1.0, brute),
           fail_detail("enumeration vs oracle", dfs, brute));
    const double parts = alpha_exact(h, p.a_indices, order) +
                         alpha_exact(h, p.b_indices, order) +
                         brute_force_alpha(h, full, order, true, is_a);
    record(res, std::abs(dfs - parts) <= 1e-9 * std::max(1.0, dfs),
           fail_detail("pure-A + pure-B + mixed", parts, dfs));
  }
  return res;
}

CheckResult check_commutator_sum_dominated(std::uint64_t seed) {
  CheckResult res{"nested-commutator-sum-dominated"};
  CounterRng rng = check_rng(seed, 5);
  for (int inst = 0; inst < 100 && res.ok; ++inst) {
    const int order = inst % 2 == 0 ? 2 : 4;
    const Hamiltonian h = random_hamiltonian(rng, 4, 2 + static_cast<int>(rng.below(3)));
    Partition p;
    p.a_indices = random_subset_split(rng, h.size(), &p.b_indices);
    const AlphaReport exact = alpha_report(h, p, order);
    const AlphaReport bound = alpha_bound(h, p, order);
    record(res, exact.exact, "expected the exact enumeration path");
    const double slack = 1e-9;
    record(res, exact.alpha_a <= bound.alpha_a * (1.0 + slack) + slack,
           fail_detail("alpha_A", exact.alpha_a, bound.alpha_a));
    record(res, exact.alpha_b <= bound.alpha_b * (1.0 + slack) + slack,
           fail_detail("alpha_B", exact.alpha_b, bound.alpha_b));
    record(res, exact.alpha_cross <= bound.alpha_cross * (1.0 + slack) + slack,
           fail_detail("alpha_cross", exact.alpha_cross, bound.alpha_cross));
    record(res, exact.alpha_h <= bound.alpha_h * (1.0 + slack) + slack,
           fail_detail("alpha_H", exact.alpha_h, bound.alpha_h));
  }
  return res;
}

CheckResult check_ordered_pair_symmetry(std::uint64_t seed) {
  CheckResult res{"ordered-pair-sum-symmetry"};
  CounterRng rng = check_rng(seed, 6);
  for (int inst = 0; inst < 30 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 2 + static_cast<int>(rng.below(3)));
    const auto full = full_subset(h);
    double unordered = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (std::size_t j = i + 1; j < h.size(); ++j) {
        const Mat comm = h.terms[i].op * h.terms[j].op - h.terms[j].op * h.terms[i].op;
        if (max_abs(comm) == 0.0) continue;
        unordered += h.terms[i].weight * h.terms[j].weight * spectral_norm(comm);
      }
    }
    const double ordered = first_order_comm_sum(h, full, full);
    record(res, std::abs(ordered - 2.0 * unordered) <= 1e-12 * std::max(1.0, ordered),
           fail_detail("ordered vs 2x unordered", ordered, 2.0 * unordered));
  }
  return res;
}

// ---------------------------------------------------------------------------
// trotter module

CheckResult check_trotter_channel_bound(std::uint64_t seed) {
  CheckResult res{"trotter-channel-bound"};
  CounterRng rng = check_rng(seed, 7);
  for (int inst = 0; inst < 200 && res.ok; ++inst) {
    const int order = inst % 2 == 0 ? 2 : 4;
    const int dim = inst % 3 == 0 ? 8 : 4;
    const Hamiltonian h = random_hamiltonian(rng, dim, 2 + static_cast<int>(rng.below(3)));
    const double t = rng.uniform(0.01, 1.0);
    const auto full = full_subset(h);
    const Mat approx = sequence_unitary(trotter_sequence(h, full, order, t), h);
    const double measured = 2.0 * spectral_norm(exact_unitary(h, full, t) - approx);
    const double bound = trotter_error_bound(h, full, order, t, 1).channel_total;
    record(res, measured <= bound * (1.0 + 1e-9) + 1e-12,
           fail_detail("2||exact - formula||", measured, bound));
  }
  return res;
}

CheckResult check_trotter_order_scaling(std::uint64_t seed) {
  CheckResult res{"trotter-order-scaling"};
  CounterRng rng = check_rng(seed, 8);
  for (int order : {2, 4}) {
    Hamiltonian h = random_hamiltonian(rng, 4, 3);
    // Rescale to lambda = 1 so the largest grid time stays in the
    // asymptotic regime.
    std::vector<std::pair<double, Mat>> scaled;
    for (const auto& t : h.terms) scaled.emplace_back(t.weight / h.lambda, t.op);
    h = make_hamiltonian(h.dim, scaled);
    const auto full = full_subset(h);
    std::vector<std::pair<double, double>> points;
    for (int e = 6; e >= 1; --e) {
      const double t = std::ldexp(1.0, -e);
      const double err = spectral_norm(
          exact_unitary(h, full, t) - sequence_unitary(trotter_sequence(h, full, order, t), h));
      if (err > 1e-13) points.emplace_back(t, err);
    }
    if (points.size() < 4) {
      record(res, false, "grid degenerate at order " + std::to_string(order));
      continue;
    }
    const double slope = fit_scaling_exponent(points);
    record(res, slope >= static_cast<double>(order) + 0.7,
           fail_detail("order-" + std::to_string(order) + " slope", slope,
                       static_cast<double>(order) + 0.7));
  }
  return res;
}

CheckResult check_durations_conserved(std::uint64_t seed) {
  CheckResult res{"gate-durations-conserve-time"};
  CounterRng rng = check_rng(seed, 9);
  for (int order : {1, 2, 4, 6}) {
    const Hamiltonian h = random_hamiltonian(rng, 2, 3);
    const double t = rng.uniform(0.2, 1.5);
    const GateSequence seq = trotter_sequence(h, full_subset(h), order, t);
    const std::vector<double> sums = durations_by_term(seq, h.size());
    for (double s : sums) {
      record(res, std::abs(s - t) <= 1e-12 * std::max(1.0, t),
             fail_detail("order-" + std::to_string(order) + " per-term time", s, t));
    }
    record(res, seq.gates.size() ==
                    static_cast<std::size_t>(upsilon(order)) * h.size(),
           "gate count != upsilon * L at order " + std::to_string(order));
  }
  return res;
}

CheckResult check_sequences_palindromic(std::uint64_t seed) {
  CheckResult res{"sequences-palindromic"};
  CounterRng rng = check_rng(seed, 10);
  for (int order : {2, 4, 6}) {
    const Hamiltonian h = random_hamiltonian(rng, 2, 4);
    const GateSequence seq = trotter_sequence(h, full_subset(h), order, 0.7);
    const std::size_t n = seq.gates.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
      const bool same = seq.gates[i].term_index == seq.gates[n - 1 - i].term_index &&
                        std::abs(seq.gates[i].duration - seq.gates[n - 1 - i].duration) <= 1e-15;
      record(res, same, "asymmetry at order " + std::to_string(order) + " position " +
                            std::to_string(i));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// qdrift module

CheckResult check_qdrift_cptp(std::uint64_t seed) {
  CheckResult res{"qdrift-channel-cptp"};
  CounterRng rng = check_rng(seed, 11);
  for (int inst = 0; inst < 20 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 2 + static_cast<int>(rng.below(3)));
    const double t = scaled_time(rng, h);
    const long long n = 1 + static_cast<long long>(rng.below(8));
    const Superoperator s = qdrift_exact_channel(h, full_subset(h), t, n);
    const CptpCheck c = cptp_check(s);
    record(res, c.cp, fail_detail("min Choi eigenvalue", c.min_choi_eigenvalue, -1e-10));
    record(res, c.tp, fail_detail("trace-preservation deviation", c.tp_deviation, 1e-10));
    const double choi_trace = std::abs(choi_matrix(s).trace() - cxd(1.0, 0.0));
    record(res, choi_trace <= 1e-10, fail_detail("Choi trace - 1", choi_trace, 1e-10));
  }
  return res;
}

CheckResult check_qdrift_channel_bound(std::uint64_t seed) {
  CheckResult res{"qdrift-channel-bound"};
  CounterRng rng = check_rng(seed, 12);
  for (int inst = 0; inst < 100 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, inst % 2 == 0 ? 4 : 8,
                                             2 + static_cast<int>(rng.below(3)));
    const double t = scaled_time(rng, h);
    const long long n = 1 + static_cast<long long>(rng.below(64));
    const auto full = full_subset(h);
    const Superoperator approx = qdrift_exact_channel(h, full, t, n);
    const Superoperator ideal = unitary_channel(exact_unitary(h, full, t));
    const double measured = diamond_lower_bound(approx, ideal);
    const double bound = qdrift_error_bound(h.lambda, t, n);
    record(res, measured <= bound * (1.0 + 1e-9) + 1e-12,
           fail_detail("channel distance", measured, bound));
  }
  return res;
}

CheckResult check_qdrift_sampler_consistency(std::uint64_t seed) {
  CheckResult res{"qdrift-sampler-consistency"};
  CounterRng rng = check_rng(seed, 13);
  const Hamiltonian h = random_hamiltonian(rng, 4, 3);
  const double t = 0.8 / h.lambda;
  const long long n = 4;
  const auto full = full_subset(h);
  const Superoperator exact = qdrift_exact_channel(h, full, t, n);
  const auto average_distance = [&](long long samples) {
    Mat acc = Mat::Zero(exact.mat.rows(), exact.mat.cols());
    for (long long j = 0; j < samples; ++j) {
      const GateSequence seq =
          qdrift_sample(h, full, t, n, rng::at(seed, 1, static_cast<std::uint64_t>(j)));
      const Mat u = sequence_unitary(seq, h);
      acc += kron(u.conjugate(), u);
    }
    acc /= static_cast<double>(samples);
    return max_abs(acc - exact.mat);
  };
  const double coarse = average_distance(400);
  const double fine = average_distance(10000);
  record(res, fine <= 0.05, fail_detail("mean-channel deviation at 10^4 samples", fine, 0.05));
  record(res, fine < coarse,
         fail_detail("deviation should shrink with samples", fine, coarse));
  return res;
}

// ---------------------------------------------------------------------------
// composite module

CheckResult check_composite_epsilon(std::uint64_t seed) {
  CheckResult res{"composite-epsilon-compliance"};
  CounterRng rng = check_rng(seed, 14);
  for (int inst = 0; inst < 100 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 2 + static_cast<int>(rng.below(3)));
    Partition p;
    p.a_indices = random_subset_split(rng, h.size(), &p.b_indices);
    const double t = scaled_time(rng, h);
    const double eps = std::pow(10.0, rng.uniform(-3.0, -1.0));
    CompositeParams params;
    params.partition = p;
    params.t = t;
    params.epsilon = eps;
    params.n_b = inst % 3 == 0 ? 1 : (inst % 3 == 1 ? 4 : 16);
    if (inst % 5 == 0) {
      params.order = 1;
      params.r = first_order_cost(h, p, t, eps, params.n_b).r;
    } else {
      params.order = 2;
      params.r = higher_order_cost(h, p, 2, t, eps, params.n_b).r;
    }
    const Superoperator channel = composite_exact_channel(h, params);
    const Superoperator ideal = unitary_channel(exact_unitary(h, full_subset(h), t));
    const double measured = diamond_lower_bound(channel, ideal);
    record(res, measured <= eps * (1.0 + 1e-9),
           fail_detail("composite channel distance", measured, eps));
  }
  return res;
}

CheckResult check_composite_collapse_deterministic(std::uint64_t seed) {
  CheckResult res{"composite-collapse-deterministic"};
  CounterRng rng = check_rng(seed, 15);
  for (int order : {1, 2, 4}) {
    for (long long r : {1LL, 3LL}) {
      const Hamiltonian h = random_hamiltonian(rng, 4, 3);
      const double t = scaled_time(rng, h);
      CompositeParams params;
      params.partition.a_indices = full_subset(h);
      params.order = order;
      params.t = t;
      params.epsilon = 0.1;
      params.n_b = 4;
      params.r = r;
      const Superoperator comp = composite_exact_channel(h, params);
      GateSequence seq = trotter_sequence(h, full_subset(h), order, t / static_cast<double>(r));
      const Superoperator segment = unitary_channel(sequence_unitary(seq, h));
      const double dist = diamond_lower_bound(comp, superop_power(segment, r));
      record(res, dist <= 1e-10,
             fail_detail("order " + std::to_string(order) + " r " + std::to_string(r), dist,
                         1e-10));
    }
  }
  return res;
}

CheckResult check_composite_collapse_sampled(std::uint64_t seed) {
  CheckResult res{"composite-collapse-sampled"};
  CounterRng rng = check_rng(seed, 16);
  for (long long r : {1LL, 2LL, 3LL}) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 3);
    const double t = scaled_time(rng, h);
    const long long n_b = 1 + static_cast<long long>(rng.below(4));
    CompositeParams params;
    params.partition.b_indices = full_subset(h);
    params.order = 1;
    params.t = t;
    params.epsilon = 0.1;
    params.n_b = n_b;
    params.r = r;
    const Superoperator comp = composite_exact_channel(h, params);
    const Superoperator qd = qdrift_exact_channel(h, full_subset(h), t, n_b * r);
    const double dist = diamond_lower_bound(comp, qd);
    record(res, dist <= 1e-10, fail_detail("r " + std::to_string(r), dist, 1e-10));
  }
  return res;
}

CheckResult check_composite_segment_decomposition(std::uint64_t seed) {
  CheckResult res{"composite-segment-decomposition"};
  CounterRng rng = check_rng(seed, 17);
  for (int inst = 0; inst < 20 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 3 + static_cast<int>(rng.below(2)));
    Partition p;
    p.a_indices = random_subset_split(rng, h.size(), &p.b_indices);
    if (p.a_indices.empty() || p.b_indices.empty()) continue;
    const double t = scaled_time(rng, h);
    CompositeParams params;
    params.partition = p;
    params.order = 2;
    params.t = t;
    params.epsilon = 1.0;
    params.n_b = inst % 2 == 0 ? 1 : 4;
    params.r = 1;
    const Superoperator comp = composite_exact_channel(h, params);
    const Superoperator ideal = unitary_channel(exact_unitary(h, full_subset(h), t));
    const double measured = diamond_lower_bound(comp, ideal);

    // Per-block errors and the outer formula's own error, measured
    // independently; upsilon blocks of each kind.
    double worst_a = 0.0;
    double worst_b = 0.0;
    Superoperator outer_exact = identity_superoperator(h.dim);
    for (const OuterBlock& blk : outer_loop_sequence(params.order, t)) {
      if (blk.kind == BlockKind::kDeterministic) {
        const Mat approx =
            sequence_unitary(trotter_sequence(h, p.a_indices, params.order, blk.sub_time), h);
        const Mat exact = exact_unitary(h, p.a_indices, blk.sub_time);
        worst_a = std::max(
            worst_a, diamond_lower_bound(unitary_channel(approx), unitary_channel(exact)));
        outer_exact = compose(unitary_channel(exact), outer_exact);
      } else {
        const Superoperator approx =
            qdrift_exact_channel(h, p.b_indices, blk.sub_time, params.n_b);
        const Mat exact = exact_unitary(h, p.b_indices, blk.sub_time);
        worst_b = std::max(worst_b, diamond_lower_bound(approx, unitary_channel(exact)));
        outer_exact = compose(unitary_channel(exact), outer_exact);
      }
    }
    const double outer_err = diamond_lower_bound(outer_exact, ideal);
    const double ups = static_cast<double>(upsilon(params.order));
    const double budget = ups * worst_a + ups * worst_b + outer_err;
    record(res, measured <= budget + 1e-12,
           fail_detail("segment error vs block budget", measured, budget));
  }
  return res;
}

CheckResult check_composite_cost_monotonic(std::uint64_t seed) {
  CheckResult res{"composite-cost-monotonic"};
  CounterRng rng = check_rng(seed, 18);
  for (int inst = 0; inst < 20 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 3);
    Partition p;
    p.a_indices = random_subset_split(rng, h.size(), &p.b_indices);
    const int order = inst % 2 == 0 ? 1 : 2;
    double prev = 0.0;
    for (double t : {0.2, 0.4, 0.8, 1.2}) {
      const double cost = composite_cost_relaxed(h, p, order, t, 1e-2, 4.0);
      record(res, cost >= prev - 1e-12,
             fail_detail("cost should grow with t", cost, prev));
      prev = cost;
    }
    prev = std::numeric_limits<double>::infinity();
    for (double eps : {1e-3, 1e-2, 1e-1}) {
      const double cost = composite_cost_relaxed(h, p, order, 0.5, eps, 4.0);
      record(res, cost <= prev + 1e-12,
             fail_detail("cost should shrink with eps", cost, prev));
      prev = cost;
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// partition module

CheckResult check_probabilities_in_range(std::uint64_t seed) {
  CheckResult res{"assignment-probabilities-in-range"};
  CounterRng rng = check_rng(seed, 19);
  for (int inst = 0; inst < 1000 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 2, 2 + static_cast<int>(rng.below(5)));
    const double t = scaled_time(rng, h);
    const double eps = std::pow(10.0, rng.uniform(-4.0, -1.0));
    const int order = inst % 2 == 0 ? 2 : 4;
    const double lb = nb_lower_bound(h, t, eps, order);
    const double n_b = lb * rng.uniform(1.0, 4.0);
    const ProbPartition pp = prob_partition(h, t, eps, order, n_b);
    for (double pr : pp.probs) {
      record(res, pr >= 0.0 && pr <= 1.0, fail_detail("probability out of range", pr, 1.0));
    }
    // Second half of the scheme's guarantee: expected sampled weight.
    double e_lambda_b = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      e_lambda_b += (1.0 - pp.probs[i]) * h.terms[i].weight;
    }
    const double bound = lambda_b_guarantee_bound(h, t, eps, order, n_b);
    record(res, e_lambda_b <= bound * (1.0 + 1e-9),
           fail_detail("expected sampled weight", e_lambda_b, bound));
  }
  return res;
}

CheckResult check_gradient_matches_fd(std::uint64_t seed) {
  CheckResult res{"weight-gradient-matches-fd"};
  CounterRng rng = check_rng(seed, 20);
  for (int inst = 0; inst < 50 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 3 + static_cast<int>(rng.below(2)));
    const double t = rng.uniform(0.2, 1.0);
    const double eps = 1e-2;
    const long long n_b = 1 + static_cast<long long>(rng.below(8));
    std::vector<double> w(h.size());
    for (double& wi : w) wi = rng.uniform(0.1, 0.9);
    const std::vector<double> grad = weight_gradient(h, w, t, eps, n_b);
    const double step = 1e-5;
    double scale = 1.0;
    for (double g : grad) scale = std::max(scale, std::abs(g));
    for (std::size_t m = 0; m < w.size(); ++m) {
      std::vector<double> lo = w;
      std::vector<double> hi = w;
      lo[m] -= step;
      hi[m] += step;
      const double fd = (weighted_cost_relaxed(h, hi, t, eps, n_b) -
                         weighted_cost_relaxed(h, lo, t, eps, n_b)) /
                        (2.0 * step);
      record(res, std::abs(fd - grad[m]) <= 1e-6 * scale,
             fail_detail("coordinate " + std::to_string(m), grad[m], fd));
    }
  }
  return res;
}

CheckResult check_descent_monotone(std::uint64_t seed) {
  CheckResult res{"descent-never-increases-cost"};
  CounterRng rng = check_rng(seed, 21);
  for (int inst = 0; inst < 10 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 3 + static_cast<int>(rng.below(2)));
    std::vector<double> init(h.size());
    for (double& wi : init) wi = rng.uniform(0.0, 1.0);
    const DescentResult d = descend_weights(h, 0.5, 1e-2, 4, init, 0.0, 1e-8, 2000);
    record(res, d.final_cost <= d.initial_cost * (1.0 + 1e-12),
           fail_detail("descent cost", d.final_cost, d.initial_cost));
    for (double wi : d.weights.weights) {
      record(res, wi >= 0.0 && wi <= 1.0, fail_detail("weight out of box", wi, 1.0));
    }
  }
  return res;
}

CheckResult check_moment_dominance(std::uint64_t seed) {
  CheckResult res{"moment-bounds-dominate-mc"};
  CounterRng rng = check_rng(seed, 22);
  for (int inst = 0; inst < 50 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, inst % 2 == 0 ? 2 : 4,
                                             3 + static_cast<int>(rng.below(3)));
    const double t = scaled_time(rng, h);
    const double eps = std::pow(10.0, rng.uniform(-3.0, -1.0));
    const int order = 2;
    const double lb = nb_lower_bound(h, t, eps, order);
    const long long n_b = static_cast<long long>(std::ceil(lb * rng.uniform(1.0, 3.0)));
    const ProbPartition pp = prob_partition(h, t, eps, order, static_cast<double>(n_b));
    const MomentReport mr =
        moment_report(h, pp, t, order, n_b, 2000, rng.next_u64());
    record(res, mr.mc_la2 <= mr.e_la2_bound + 3.0 * mr.mc_la2_se + 1e-9,
           fail_detail("E[L_A^2]", mr.mc_la2, mr.e_la2_bound));
    record(res, mr.mc_lambda_b <= mr.e_lambda_b + 3.0 * mr.mc_lambda_b_se + 1e-9,
           fail_detail("E[lambda_B]", mr.mc_lambda_b, mr.e_lambda_b));
    record(res, mr.mc_q <= mr.e_q_bound + 3.0 * mr.mc_q_se + 1e-9,
           fail_detail("E[Q]", mr.mc_q, mr.e_q_bound));
    if (!mr.p_skipped) {
      record(res, mr.mc_p <= mr.e_p_bound + 3.0 * mr.mc_p_se + 1e-9,
             fail_detail("E[P]", mr.mc_p, mr.e_p_bound));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// metrics module

CheckResult check_unitary_distance_dominance(std::uint64_t seed) {
  CheckResult res{"unitary-distance-dominance"};
  CounterRng rng = check_rng(seed, 23);
  for (int inst = 0; inst < 50 && res.ok; ++inst) {
    const int dim = inst % 2 == 0 ? 2 : 4;
    const Mat u = random_unitary(rng, dim);
    const Mat v = random_unitary(rng, dim);
    const double lower = diamond_lower_bound(unitary_channel(u), unitary_channel(v));
    const double upper = unitary_spectral_distance(u, v);
    record(res, lower <= upper * (1.0 + 1e-9) + 1e-12,
           fail_detail("entangled lower bound", lower, upper));
  }
  return res;
}

CheckResult check_built_channels_cptp(std::uint64_t seed) {
  CheckResult res{"built-channels-cptp"};
  CounterRng rng = check_rng(seed, 24);
  for (int inst = 0; inst < 10 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 3);
    const double t = scaled_time(rng, h);
    Partition p;
    p.a_indices = random_subset_split(rng, h.size(), &p.b_indices);
    CompositeParams params;
    params.partition = p;
    params.order = 2;
    params.t = t;
    params.epsilon = 0.1;
    params.n_b = 2;
    params.r = 2;
    const Superoperator channels[] = {
        unitary_channel(sequence_unitary(trotter_sequence(h, full_subset(h), 2, t), h)),
        qdrift_exact_channel(h, full_subset(h), t, 3),
        composite_exact_channel(h, params),
    };
    for (const Superoperator& s : channels) {
      const CptpCheck c = cptp_check(s);
      record(res, c.cp && c.tp,
             fail_detail("cp/tp deviation", std::min(c.min_choi_eigenvalue, -c.tp_deviation),
                         -1e-10));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// framework module

CheckResult check_template_matches_qdrift(std::uint64_t seed) {
  CheckResult res{"template-matches-qdrift-channel"};
  CounterRng rng = check_rng(seed, 25);
  for (int inst = 0; inst < 20 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 2 + static_cast<int>(rng.below(3)));
    const double t = scaled_time(rng, h);
    const auto full = full_subset(h);
    const Superoperator direct = qdrift_exact_channel(h, full, t, 1);
    const Superoperator templ = template_channel({qdrift_select_instance(h, full, t)}, h.dim);
    record(res, max_abs(direct.mat - templ.mat) <= 1e-10,
           fail_detail("single instance", max_abs(direct.mat - templ.mat), 1e-10));
    // Stacked instances compose to the multi-sample channel.
    const Superoperator direct2 = qdrift_exact_channel(h, full, t, 2);
    const Superoperator templ2 = template_channel(
        {qdrift_select_instance(h, full, t / 2.0), qdrift_select_instance(h, full, t / 2.0)},
        h.dim);
    record(res, max_abs(direct2.mat - templ2.mat) <= 1e-10,
           fail_detail("stacked instances", max_abs(direct2.mat - templ2.mat), 1e-10));
  }
  return res;
}

CheckResult check_template_matches_randomized(std::uint64_t seed) {
  CheckResult res{"template-matches-randomized-orderings"};
  CounterRng rng = check_rng(seed, 26);
  for (int inst = 0; inst < 10 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 2 + static_cast<int>(rng.below(2)));
    const double t = scaled_time(rng, h);
    const auto full = full_subset(h);
    const Superoperator direct = randomized_trotter_channel(h, full, t);
    const Superoperator templ =
        template_channel({randomized_trotter_select_instance(h, full, t)}, h.dim);
    record(res, max_abs(direct.mat - templ.mat) <= 1e-10,
           fail_detail("channel difference", max_abs(direct.mat - templ.mat), 1e-10));
  }
  return res;
}

CheckResult check_multiproduct_coeffs(std::uint64_t) {
  CheckResult res{"multiproduct-coefficients-solve"};
  const std::vector<std::vector<long long>> k_sets = {
      {1}, {1, 2}, {1, 2, 3}, {1, 2, 3, 4}, {2, 3, 5, 7}};
  for (const auto& ks : k_sets) {
    const std::vector<double> c = multiproduct_coeffs(ks);
    double sum = 0.0;
    for (double ci : c) sum += ci;
    record(res, std::abs(sum - 1.0) <= 1e-9, fail_detail("coefficient sum", sum, 1.0));
  }
  return res;
}

CheckResult check_randomized_relabel_invariant(std::uint64_t seed) {
  CheckResult res{"randomized-orderings-relabel-invariant"};
  CounterRng rng = check_rng(seed, 27);
  for (int inst = 0; inst < 10 && res.ok; ++inst) {
    const Hamiltonian h = random_hamiltonian(rng, 4, 3);
    const double t = scaled_time(rng, h);
    // Rebuild with the term list rotated; the ordering average must not care.
    std::vector<std::pair<double, Mat>> rotated;
    for (std::size_t i = 0; i < h.size(); ++i) {
      const auto& term = h.terms[(i + 1) % h.size()];
      rotated.emplace_back(term.weight, term.op);
    }
    const Hamiltonian h2 = make_hamiltonian(h.dim, rotated);
    const double diff = max_abs(randomized_trotter_channel(h, full_subset(h), t).mat -
                                randomized_trotter_channel(h2, full_subset(h2), t).mat);
    record(res, diff <= 1e-10, fail_detail("relabeled channel difference", diff, 1e-10));
  }
  return res;
}

}  // namespace

Hamiltonian random_hamiltonian(CounterRng& rng, int dim, int terms) {
  std::vector<std::pair<double, Mat>> raw;
  raw.reserve(static_cast<std::size_t>(terms));
  for (int k = 0; k < terms; ++k) {
    Mat g(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) g(r, c) = cxd(rng.gaussian(), rng.gaussian());
    }
    const Mat herm = 0.5 * (g + g.adjoint());
    raw.emplace_back(rng.uniform(0.2, 1.0), herm);
  }
  return make_hamiltonian(dim, raw);
}

Mat random_unitary(CounterRng& rng, int dim) {
  Mat g(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) g(r, c) = cxd(rng.gaussian(), rng.gaussian());
  }
  return Eigen::HouseholderQR<Mat>(g).householderQ();
}

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
  using CheckFn = CheckResult (*)(std::uint64_t);
  struct Entry {
    const char* name;
    CheckFn fn;
  };
  const Entry checks[] = {
      {"weights-1norm-additive", check_weights_1norm_additive},
      {"dense-sum-additive", check_dense_sum_additive},
      {"normalization-idempotent", check_normalization_idempotent},
      {"nested-commutator-sum-additive", check_commutator_sum_additive},
      {"nested-commutator-sum-dominated", check_commutator_sum_dominated},
      {"ordered-pair-sum-symmetry", check_ordered_pair_symmetry},
      {"trotter-channel-bound", check_trotter_channel_bound},
      {"trotter-order-scaling", check_trotter_order_scaling},
      {"gate-durations-conserve-time", check_durations_conserved},
      {"sequences-palindromic", check_sequences_palindromic},
      {"qdrift-channel-cptp", check_qdrift_cptp},
      {"qdrift-channel-bound", check_qdrift_channel_bound},
      {"qdrift-sampler-consistency", check_qdrift_sampler_consistency},
      {"composite-epsilon-compliance", check_composite_epsilon},
      {"composite-collapse-deterministic", check_composite_collapse_deterministic},
      {"composite-collapse-sampled", check_composite_collapse_sampled},
      {"composite-segment-decomposition", check_composite_segment_decomposition},
      {"composite-cost-monotonic", check_composite_cost_monotonic},
      {"assignment-probabilities-in-range", check_probabilities_in_range},
      {"weight-gradient-matches-fd", check_gradient_matches_fd},
      {"descent-never-increases-cost", check_descent_monotone},
      {"moment-bounds-dominate-mc", check_moment_dominance},
      {"unitary-distance-dominance", check_unitary_distance_dominance},
      {"built-channels-cptp", check_built_channels_cptp},
      {"template-matches-qdrift-channel", check_template_matches_qdrift},
      {"template-matches-randomized-orderings", check_template_matches_randomized},
      {"multiproduct-coefficients-solve", check_multiproduct_coeffs},
      {"randomized-orderings-relabel-invariant", check_randomized_relabel_invariant},
  };
  std::vector<CheckResult> out;
  out.reserve(std::size(checks));
  for (const Entry& entry : checks) {
    // An exception is a failure of that one property, not of the suite.
    try {
      out.push_back(entry.fn(seed));
    } catch (const std::exception& e) {
      CheckResult res;
      res.name = entry.name;
      res.ok = false;
      res.detail = std::string("unexpected exception: ") + e.what();
      out.push_back(res);
    }
  }
  return out;
}

bool all_ok(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks) {
    if (!c.ok) return false;
  }
  return true;
}

std::string render_checks(const std::vector<CheckResult>& checks) {
  std::ostringstream out;
  for (const CheckResult& c : checks) {
    if (c.ok) {
      out << "ok " << c.name << '\n';
    } else {
      out << "FAIL " << c.name << ": " << c.detail << '\n';
    }
  }
  return out.str();
}

}  // namespace composim
