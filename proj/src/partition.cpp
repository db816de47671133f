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

#include "composim/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "composim/commutators.hpp"
#include "composim/composite.hpp"
#include "composim/rng.hpp"
#include "composim/trotter.hpp"

namespace composim {
namespace {

constexpr std::uint64_t kPartitionStream = 2;
constexpr std::uint64_t kTrialStream = 3;

using RMat = Eigen::MatrixXd;

// ||[Op_i, Op_j]|| for all pairs; the gradient scheme reuses this heavily.
RMat comm_norms(const Hamiltonian& h) {
  if (h.dim > 64) throw std::invalid_argument("weight scheme requires dim <= 64");
  const Eigen::Index l = static_cast<Eigen::Index>(h.size());
  RMat c = RMat::Zero(l, l);
  for (Eigen::Index i = 0; i < l; ++i) {
    for (Eigen::Index j = i + 1; j < l; ++j) {
      const Mat comm = h.terms[i].op * h.terms[j].op - h.terms[j].op * h.terms[i].op;
      const double v = max_abs(comm) == 0.0 ? 0.0 : spectral_norm(comm);
      c(i, j) = v;
      c(j, i) = v;
    }
  }
  return c;
}

void check_weights(const Hamiltonian& h, const std::vector<double>& w) {
  if (w.size() != h.size()) throw std::invalid_argument("weight vector length must equal L");
  for (double wi : w) {
    if (!(wi >= 0.0) || !(wi <= 1.0)) throw std::invalid_argument("weights must lie in [0,1]");
  }
}

double weighted_cost_impl(const Hamiltonian& h, const std::vector<double>& w, double t,
                          double epsilon, double n_b, const RMat& cn) {
  const std::size_t l = h.size();
  double l_a = 0.0;
  double resid = 0.0;  // weight left on the sampled side
  for (std::size_t i = 0; i < l; ++i) {
    if (w[i] > 0.0) l_a += 1.0;
    resid += (1.0 - w[i]) * h.terms[i].weight;
  }
  double pair_sum = 0.0;
  for (std::size_t i = 0; i < l; ++i) {
    if (w[i] == 0.0) continue;
    double row = 0.0;
    for (std::size_t j = 0; j < l; ++j) {
      row += h.terms[j].weight * cn(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    pair_sum += w[i] * h.terms[i].weight * row;
  }
  return (l_a + n_b) * (t * t / epsilon) * (pair_sum + 4.0 * resid * resid / n_b);
}

std::vector<double> gradient_impl(const Hamiltonian& h, const std::vector<double>& w, double t,
                                  double epsilon, double n_b, const RMat& cn) {
  const std::size_t l = h.size();
  double l_a = 0.0;
  double resid = 0.0;
  for (std::size_t i = 0; i < l; ++i) {
    if (w[i] > 0.0) l_a += 1.0;
    resid += (1.0 - w[i]) * h.terms[i].weight;
  }
  const double pre = (l_a + n_b) * (t * t / epsilon);
  std::vector<double> g(l, 0.0);
  for (std::size_t m = 0; m < l; ++m) {
    double row = 0.0;
    for (std::size_t j = 0; j < l; ++j) {
      row += h.terms[j].weight * cn(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j));
    }
    const double hm = h.terms[m].weight;
    g[m] = pre * (hm * row - 8.0 * hm * resid / n_b);
  }
  return g;
}

// Factor under the square root in the threshold definition; equals 1 when
// n_b sits exactly at the lower bound.
double chi_sqrt_factor(const Hamiltonian& h, double t, double epsilon, int order, double n_b) {
  const double k2 = static_cast<double>(order);
  const double k = k2 / 2.0;
  const double ups = static_cast<double>(upsilon(order));
  const double ratio = epsilon / (h.lambda * t);
  return n_b * std::pow(ratio, 1.0 - 1.0 / k2) *
         std::pow((k2 + ups) / (k2 + 1.0), 1.0 / k2) * std::pow(ups, 1.0 / k2) /
         std::pow(2.0, 1.0 - 1.0 / k);
}

void require_even(int order, const char* who) {
  if (order < 2 || order % 2 != 0) {
    throw std::invalid_argument(std::string(who) + " needs an even order >= 2");
  }
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

}  // namespace

double weighted_cost_relaxed(const Hamiltonian& h, const std::vector<double>& weights,
                             double t, double epsilon, long long n_b) {
  check_weights(h, weights);
  if (n_b < 1) throw std::invalid_argument("n_b must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return weighted_cost_impl(h, weights, t, epsilon, static_cast<double>(n_b), comm_norms(h));
}

std::vector<double> weight_gradient(const Hamiltonian& h, const std::vector<double>& weights,
                                    double t, double epsilon, long long n_b) {
  check_weights(h, weights);
  if (n_b < 1) throw std::invalid_argument("n_b must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  return gradient_impl(h, weights, t, epsilon, static_cast<double>(n_b), comm_norms(h));
}

double fixed_point_weight(const Hamiltonian& h, const std::vector<double>& weights,
                          std::size_t m, bool* clamped) {
  check_weights(h, weights);
  if (m >= h.size()) throw std::invalid_argument("fixed_point_weight index out of range");
  const double hm = h.terms[m].weight;
  const RMat cn = comm_norms(h);
  double sum = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i == m) continue;
    sum += (h.terms[i].weight / hm) *
           (cn(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) / 8.0 -
            (1.0 - weights[i]));
  }
  const double raw = 1.0 - sum;
  const double out = std::clamp(raw, 0.0, 1.0);
  if (clamped != nullptr) *clamped = (out != raw);
  return out;
}

DescentResult descend_weights(const Hamiltonian& h, double t, double epsilon, long long n_b,
                              const std::vector<double>& init, double step, double tol,
                              long long max_iters) {
  check_weights(h, init);
  if (n_b < 1) throw std::invalid_argument("n_b must be >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const RMat cn = comm_norms(h);
  const double nb = static_cast<double>(n_b);
  std::vector<double> w = init;
  DescentResult res;
  res.initial_cost = weighted_cost_impl(h, w, t, epsilon, nb, cn);
  res.final_cost = res.initial_cost;

  const auto projected_sup = [&](const std::vector<double>& ww, const std::vector<double>& g) {
    // Gradient components pushing past an active bound do not count: the
    // iterate cannot move that way.
    double sup = 0.0;
    for (std::size_t i = 0; i < ww.size(); ++i) {
      if (ww[i] <= 0.0 && g[i] > 0.0) continue;
      if (ww[i] >= 1.0 && g[i] < 0.0) continue;
      sup = std::max(sup, std::abs(g[i]));
    }
    return sup;
  };

  std::vector<double> g = gradient_impl(h, w, t, epsilon, nb, cn);
  if (step <= 0.0) {
    const double g0 = projected_sup(w, g);
    if (g0 == 0.0) {
      res.weights.weights = w;
      res.converged = true;
      return res;
    }
    step = 0.1 / (static_cast<double>(h.size()) * g0);
  }

  for (long long it = 0; it < max_iters; ++it) {
    res.iterations = it + 1;
    if (projected_sup(w, g) <= tol) {
      res.converged = true;
      break;
    }
    double s = step;
    bool moved = false;
    while (s > step * 1e-18) {
      std::vector<double> cand(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) {
        cand[i] = std::clamp(w[i] - s * g[i], 0.0, 1.0);
      }
      const double c = weighted_cost_impl(h, cand, t, epsilon, nb, cn);
      if (c <= res.final_cost) {
        if (cand == w) break;  // bounds block every coordinate
        w = std::move(cand);
        res.final_cost = c;
        moved = true;
        break;
      }
      s /= 2.0;
    }
    if (!moved) {
      res.converged = true;  // no admissible decrease left
      break;
    }
    g = gradient_impl(h, w, t, epsilon, nb, cn);
  }
  res.weights.weights = w;
  return res;
}

double nb_lower_bound_value(double lambda, double t, double epsilon, int order) {
  require_even(order, "nb_lower_bound");
  if (!(t > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("need t, epsilon > 0");
  const double k2 = static_cast<double>(order);
  const double k = k2 / 2.0;
  const double ups = static_cast<double>(upsilon(order));
  return std::pow(lambda * t / epsilon, 1.0 - 1.0 / k2) *
         std::pow((k2 + 1.0) / (k2 + ups), 1.0 / k2) * std::pow(2.0, 1.0 - 1.0 / k) /
         std::pow(ups, 1.0 / k2);
}

double nb_lower_bound(const Hamiltonian& h, double t, double epsilon, int order) {
  return nb_lower_bound_value(h.lambda, t, epsilon, order);
}

long long nb_parametrized(const Hamiltonian& h, double t, double epsilon, int order, double c) {
  const double lb = nb_lower_bound(h, t, epsilon, order);
  const double f = 1.0 + std::pow(2.0, -c);
  long long n = ceil_count(f * f * lb);
  // The ceiling must not dip under the admissibility floor.
  if (static_cast<double>(n) < lb) n = static_cast<long long>(std::ceil(lb));
  return n;
}

ProbPartition prob_partition(const Hamiltonian& h, double t, double epsilon, int order,
                             double n_b) {
  require_even(order, "prob_partition");
  if (!(t > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("need t, epsilon > 0");
  const double lb = nb_lower_bound(h, t, epsilon, order);
  if (n_b < lb * (1.0 - 1e-12)) {
    throw std::invalid_argument("prob_partition: n_b = " + format_double(n_b) +
                                " is below the admissibility floor " + format_double(lb));
  }
  const double factor = chi_sqrt_factor(h, t, epsilon, order, n_b);
  const double root = std::sqrt(std::max(factor, 0.0));
  const double chi = (h.lambda / static_cast<double>(h.size())) * (root - 1.0);
  ProbPartition pp;
  pp.chi = std::max(chi, 0.0);  // n_b at the floor gives chi = 0 up to rounding
  pp.probs.resize(h.size());
  double sampled_weight = 0.0;  // sum over terms of (1 - p_i) h_i
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double hi = h.terms[i].weight;
    const double one_minus_p = std::min(pp.chi / hi, 1.0);
    pp.probs[i] = 1.0 - one_minus_p;
    sampled_weight += one_minus_p * hi;
    if (one_minus_p < 1.0) pp.sampling_set.push_back(i);
  }
  const double guarantee = h.lambda * root;
  if (sampled_weight > guarantee + 1e-9 * std::max(1.0, guarantee)) {
    throw std::logic_error("prob_partition: construction guarantee violated");
  }
  return pp;
}

Partition sample_partition(const ProbPartition& pp, std::uint64_t seed) {
  Partition p;
  for (std::size_t i = 0; i < pp.probs.size(); ++i) {
    const double u = rng::uniform_at(seed, kPartitionStream, static_cast<std::uint64_t>(i));
    if (u < pp.probs[i]) {
      p.a_indices.push_back(i);
    } else {
      p.b_indices.push_back(i);
    }
  }
  return p;
}

double lambda_b_guarantee_bound(const Hamiltonian& h, double t, double epsilon, int order,
                                double n_b) {
  require_even(order, "lambda_b_guarantee_bound");
  const double k2 = static_cast<double>(order);
  const double ups = static_cast<double>(upsilon(order));
  const double inner = std::pow((2.0 * k2 + 2.0 * ups) / (k2 + 1.0), 1.0 / k2) *
                       std::pow(2.0 * ups, 1.0 + 1.0 / k2);
  return h.lambda * 0.5 * std::sqrt(inner) *
         std::sqrt(n_b * std::pow(epsilon / (h.lambda * t), 1.0 - 1.0 / k2));
}

MomentReport moment_report(const Hamiltonian& h, const ProbPartition& pp, double t,
                           int order, long long n_b, long long n_trials, std::uint64_t seed) {
  require_even(order, "moment_report");
  if (pp.probs.size() != h.size()) throw std::invalid_argument("prob partition length mismatch");
  if (n_trials < 100) throw std::invalid_argument("moment_report needs n_trials >= 100");
  if (n_b < 1) throw std::invalid_argument("n_b must be >= 1");
  MomentReport rep;
  rep.n_trials = n_trials;
  rep.chi = pp.chi;
  rep.s_size = pp.sampling_set.size();
  for (std::size_t i : pp.sampling_set) rep.lambda_s += h.terms[i].weight;
  rep.lambda_sc = h.lambda - rep.lambda_s;
  const double s = static_cast<double>(rep.s_size);
  double inv_sum = 0.0;  // sum over S of chi/h_i
  for (std::size_t i : pp.sampling_set) inv_sum += pp.chi / h.terms[i].weight;
  rep.e_la = s - inv_sum;
  rep.e_lambda_b = pp.chi * s + rep.lambda_sc;
  rep.e_la2_bound = s * s - s * inv_sum;
  const double nb = static_cast<double>(n_b);
  const double inner = pp.chi * rep.lambda_s + rep.e_lambda_b * rep.e_lambda_b;
  rep.e_q_bound = 4.0 * t * t / nb * inner;
  rep.e_q2_bound = 16.0 * std::pow(t, 4) * h.lambda * h.lambda / (nb * nb) * inner;
  const double k2 = static_cast<double>(order);
  const double ups = static_cast<double>(upsilon(order));
  rep.e_p_bound = std::pow(2.0 * ups, 2.0 + k2) / (k2 + 1.0) * std::pow(t, k2 + 1.0) *
                  std::pow(h.lambda, k2) * (rep.lambda_s - pp.chi * s);

  const bool p_ok = h.size() <= 63 && h.dim <= 64 && alpha_within_budget(h.size(), order);
  rep.p_skipped = !p_ok;
  // Exact alpha per distinct sampled subset, keyed by bitmask.
  std::map<std::uint64_t, double> alpha_cache;
  const auto alpha_of_mask = [&](std::uint64_t mask, const std::vector<std::size_t>& subset) {
    auto it = alpha_cache.find(mask);
    if (it != alpha_cache.end()) return it->second;
    const double v = alpha_exact(h, subset, order);
    alpha_cache.emplace(mask, v);
    return v;
  };
  double alpha_full = 0.0;
  if (p_ok) alpha_full = alpha_exact(h, full_subset(h), order);

  std::vector<double> la2(static_cast<std::size_t>(n_trials));
  std::vector<double> lb(static_cast<std::size_t>(n_trials));
  std::vector<double> qv(static_cast<std::size_t>(n_trials));
  std::vector<double> pv(static_cast<std::size_t>(n_trials));
  for (long long trial = 0; trial < n_trials; ++trial) {
    const std::uint64_t trial_seed = rng::at(seed, kTrialStream, static_cast<std::uint64_t>(trial));
    const Partition part = sample_partition(pp, trial_seed);
    const double la = static_cast<double>(part.a_indices.size());
    const double lam_b = lambda_of(h, part.b_indices);
    const std::size_t idx = static_cast<std::size_t>(trial);
    la2[idx] = la * la;
    lb[idx] = lam_b;
    qv[idx] = 4.0 * t * t * lam_b * lam_b / nb;
    if (p_ok) {
      std::uint64_t mask_a = 0;
      for (std::size_t i : part.a_indices) mask_a |= (1ULL << i);
      const double aa = alpha_of_mask(mask_a, part.a_indices);
      const double ab = alpha_of_mask(~mask_a & ((1ULL << h.size()) - 1ULL), part.b_indices);
      const double cross = std::max(alpha_full - aa - ab, 0.0);
      pv[idx] = std::pow(t, k2 + 1.0) * (4.0 * std::pow(ups, k2 + 1.0) / (k2 + 1.0)) *
                (ups * aa + cross);
    }
  }
  const MeanSe m_la2 = mean_se(la2);
  rep.mc_la2 = m_la2.mean;
  rep.mc_la2_se = m_la2.se;
  const MeanSe m_lb = mean_se(lb);
  rep.mc_lambda_b = m_lb.mean;
  rep.mc_lambda_b_se = m_lb.se;
  const MeanSe m_q = mean_se(qv);
  rep.mc_q = m_q.mean;
  rep.mc_q_se = m_q.se;
  if (p_ok) {
    const MeanSe m_p = mean_se(pv);
    rep.mc_p = m_p.mean;
    rep.mc_p_se = m_p.se;
  }
  return rep;
}

std::string serialize_moment_report(const MomentReport& rep) {
  std::ostringstream out;
  out << "chi " << format_double(rep.chi) << "\n";
  out << "s_size " << rep.s_size << "\n";
  out << "lambda_s " << format_double(rep.lambda_s) << "\n";
  out << "lambda_sc " << format_double(rep.lambda_sc) << "\n";
  out << "e_la " << format_double(rep.e_la) << "\n";
  out << "e_lambda_b " << format_double(rep.e_lambda_b) << "\n";
  out << "e_la2_bound " << format_double(rep.e_la2_bound) << "\n";
  out << "e_q_bound " << format_double(rep.e_q_bound) << "\n";
  out << "e_q2_bound " << format_double(rep.e_q2_bound) << "\n";
  out << "e_p_bound " << format_double(rep.e_p_bound) << "\n";
  out << "mc_la2 " << format_double(rep.mc_la2) << " se " << format_double(rep.mc_la2_se) << "\n";
  out << "mc_lambda_b " << format_double(rep.mc_lambda_b) << " se "
      << format_double(rep.mc_lambda_b_se) << "\n";
  out << "mc_q " << format_double(rep.mc_q) << " se " << format_double(rep.mc_q_se) << "\n";
  out << "mc_p " << format_double(rep.mc_p) << " se " << format_double(rep.mc_p_se) << "\n";
  out << "p_skipped " << (rep.p_skipped ? 1 : 0) << "\n";
  out << "n_trials " << rep.n_trials << "\n";
  return out.str();
}

ImprovementDiagnostics improvement_diagnostics(const Hamiltonian& h, const Partition& p,
                                               double t, double epsilon, int order,
                                               long long n_b) {
  check_partition(h, p);
  if (!valid_order(order)) throw std::invalid_argument("order must be 1 or even");
  const CostReport rep = order == 1 ? first_order_cost(h, p, t, epsilon, n_b)
                                    : higher_order_cost(h, p, order, t, epsilon, n_b);
  ImprovementDiagnostics d;
  d.order = order;
  d.q_b = rep.q_b;
  d.beta = rep.beta;
  d.c_trott = rep.c_trott;
  d.c_qd = rep.c_qd;
  d.c_comp = rep.c_comp;
  const double l = static_cast<double>(h.size());
  const double la = static_cast<double>(p.a_indices.size());
  const double k2 = static_cast<double>(order == 1 ? 1 : order);
  const double shrink = std::pow(std::max(1.0 - rep.q_b, 0.0), 1.0 / k2);
  d.ratio_la = la * shrink / l;
  d.ratio_lambda_b = h.lambda > 0.0 ? rep.lambda_b / h.lambda : 0.0;
  d.ratio_nb_la = la > 0.0 ? static_cast<double>(n_b) / la
                           : std::numeric_limits<double>::quiet_NaN();
  d.ratio_nb = static_cast<double>(n_b) * shrink / l;
  const double beta = rep.beta;
  d.ratio_lambda_beta =
      rep.lambda_b / (std::pow(h.lambda, 1.0 / beta) *
                      std::pow(std::sqrt(epsilon) / t, 1.0 - 1.0 / beta));
  d.comp_vs_best = rep.c_comp / std::min(rep.c_trott, rep.c_qd);
  if (order == 1) {
    // Ordered pairs inside A with a nonvanishing commutator; the regime
    // conditions use the square root of this count.
    double count = 0.0;
    double a_max = 0.0;
    for (std::size_t i : p.a_indices) a_max = std::max(a_max, h.terms[i].weight);
    for (std::size_t i : p.a_indices) {
      for (std::size_t j : p.a_indices) {
        if (i == j) continue;
        const Mat comm = h.terms[i].op * h.terms[j].op - h.terms[j].op * h.terms[i].op;
        if (max_abs(comm) != 0.0) count += 1.0;
      }
    }
    d.n_nz = std::sqrt(count);
    d.nz_pairs_vs_la = la > 0.0 ? count / la : std::numeric_limits<double>::quiet_NaN();
    d.lambda_b2_vs_nz = (count > 0.0 && la > 0.0 && a_max > 0.0)
                            ? rep.lambda_b * rep.lambda_b * la * la /
                                  (a_max * a_max * count * count)
                            : std::numeric_limits<double>::quiet_NaN();
  } else {
    d.n_nz = std::numeric_limits<double>::quiet_NaN();
    d.nz_pairs_vs_la = std::numeric_limits<double>::quiet_NaN();
    d.lambda_b2_vs_nz = std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

std::string serialize_improvement_diagnostics(const ImprovementDiagnostics& d) {
  std::ostringstream out;
  out << "order " << d.order << "\n";
  out << "ratio_la " << format_double(d.ratio_la) << "\n";
  out << "ratio_lambda_b " << format_double(d.ratio_lambda_b) << "\n";
  out << "ratio_lambda_beta " << format_double(d.ratio_lambda_beta) << "\n";
  out << "ratio_nb_la " << format_double(d.ratio_nb_la) << "\n";
  out << "ratio_nb " << format_double(d.ratio_nb) << "\n";
  out << "beta " << format_double(d.beta) << "\n";
  out << "q_b " << format_double(d.q_b) << "\n";
  out << "c_trott " << format_double(d.c_trott) << "\n";
  out << "c_qd " << format_double(d.c_qd) << "\n";
  out << "c_comp " << format_double(d.c_comp) << "\n";
  out << "comp_vs_best " << format_double(d.comp_vs_best) << "\n";
  out << "n_nz " << format_double(d.n_nz) << "\n";
  out << "nz_pairs_vs_la " << format_double(d.nz_pairs_vs_la) << "\n";
  out << "lambda_b2_vs_nz " << format_double(d.lambda_b2_vs_nz) << "\n";
  return out.str();
}

}  // namespace composim
