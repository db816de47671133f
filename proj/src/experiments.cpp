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

#include "composim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "composim/linalg.hpp"
#include "composim/metrics.hpp"
#include "composim/parallel.hpp"
#include "composim/partition.hpp"
#include "composim/qdrift.hpp"
#include "composim/rng.hpp"
#include "composim/trotter.hpp"

namespace composim {
namespace {

// Same stream assignments as the partition module, so experiment draws and
// sample_partition draws agree term for term.
constexpr std::uint64_t kPartitionStream = 2;
constexpr std::uint64_t kTrialStream = 3;

void require_even_order(int order, const char* who) {
  if (order < 2 || order % 2 != 0) {
    throw std::invalid_argument(std::string(who) + " needs an even order >= 2");
  }
}

void require_weights(const std::vector<double>& weights, const char* who) {
  if (weights.empty()) throw std::invalid_argument(std::string(who) + " needs weights");
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument(std::string(who) + " needs positive weights");
  }
}

double sum_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

}  // namespace

std::vector<double> exp_decay_weights(long long l) {
  if (l < 1 || l > 1024) throw std::invalid_argument("family size must be in [1, 1024]");
  std::vector<double> h(static_cast<std::size_t>(l));
  for (long long i = 0; i < l; ++i) {
    h[static_cast<std::size_t>(i)] = std::ldexp(1.0, static_cast<int>(-(i + 1)));
  }
  return h;
}

ExpectedCostBound expected_cost_bound(const std::vector<double>& weights,
                                      const std::vector<double>& probs,
                                      const std::vector<char>& in_s, double chi, double n_b,
                                      double t, double epsilon, int order) {
  require_even_order(order, "expected_cost_bound");
  require_weights(weights, "expected_cost_bound");
  if (probs.size() != weights.size() || in_s.size() != weights.size()) {
    throw std::invalid_argument("expected_cost_bound: vector size mismatch");
  }
  if (!(n_b > 0.0) || !(t > 0.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument("expected_cost_bound needs positive n_b, t, epsilon");
  }
  const double k2 = static_cast<double>(order);
  const double ups = static_cast<double>(upsilon(order));
  const std::size_t l = weights.size();

  ExpectedCostBound out;
  out.s_size = 0;
  double lambda_sc = 0.0;
  double sum_ratio = 0.0;  // sum over the threshold set of (1 - p_i)
  for (std::size_t i = 0; i < l; ++i) {
    if (in_s[i]) {
      ++out.s_size;
      out.s_lambda += weights[i];
      sum_ratio += 1.0 - probs[i];
    } else {
      lambda_sc += weights[i];
    }
  }
  const double lambda = out.s_lambda + lambda_sc;
  const double s = static_cast<double>(out.s_size);
  out.e_la = s - sum_ratio;
  out.e_lambda_b = chi * s + lambda_sc;
  out.e_la2_bound = std::max(s * s - s * sum_ratio, 0.0);

  // P(|B| = 0) and P(|B| = 1) from the independent assignments, via prefix
  // and suffix products so no division by a zero probability is needed.
  std::vector<double> prefix(l + 1, 1.0);
  std::vector<double> suffix(l + 1, 1.0);
  for (std::size_t i = 0; i < l; ++i) prefix[i + 1] = prefix[i] * probs[i];
  for (std::size_t i = l; i > 0; --i) suffix[i - 1] = suffix[i] * probs[i - 1];
  const double p_b0 = prefix[l];
  double p_b1 = 0.0;
  for (std::size_t i = 0; i < l; ++i) p_b1 += (1.0 - probs[i]) * prefix[i] * suffix[i + 1];
  out.e_nb2_bound = p_b1 + std::max(1.0 - p_b0 - p_b1, 0.0) * n_b * n_b;

  const double inner = chi * out.s_lambda + out.e_lambda_b * out.e_lambda_b;
  out.e_q2_bound = 16.0 * std::pow(t, 4.0) * lambda * lambda / (n_b * n_b) * inner;
  out.e_p_bound = std::pow(2.0 * ups, k2 + 2.0) / (k2 + 1.0) * std::pow(t, k2 + 1.0) *
                  std::pow(lambda, k2) * std::max(out.s_lambda - chi * s, 0.0);
  out.total = (std::sqrt(out.e_la2_bound) + std::sqrt(out.e_nb2_bound)) *
              (std::pow(out.e_p_bound / epsilon, 1.0 / k2) + std::sqrt(out.e_q2_bound) / epsilon);
  return out;
}

double saturation_trotter_cost(double lambda, long long l, double t, double epsilon, int order) {
  require_even_order(order, "saturation_trotter_cost");
  const double k2 = static_cast<double>(order);
  const double ups = static_cast<double>(upsilon(order));
  return static_cast<double>(l) * std::pow(lambda * t, 1.0 + 1.0 / k2) *
         std::pow(epsilon, -1.0 / k2) * std::pow(ups, 1.0 + 1.0 / k2) *
         std::pow(2.0, 2.0 + 1.0 / k2) / std::pow(k2 + 1.0, 1.0 / k2);
}

double saturation_crossover_time(const std::vector<double>& weights, double epsilon, int order) {
  require_even_order(order, "saturation_crossover_time");
  require_weights(weights, "saturation_crossover_time");
  if (!(epsilon > 0.0)) throw std::invalid_argument("need epsilon > 0");
  const double k2 = static_cast<double>(order);
  const double ups = static_cast<double>(upsilon(order));
  const double lambda = sum_of(weights);
  const double l = static_cast<double>(weights.size());
  // 4 lambda^2 t^2 / eps = saturation_trotter_cost(t) solved for t.
  const double rhs = l * std::pow(ups, 1.0 + 1.0 / k2) * std::pow(2.0, 1.0 / k2) /
                     std::pow(k2 + 1.0, 1.0 / k2) * std::pow(epsilon / lambda, 1.0 - 1.0 / k2);
  return std::pow(rhs, k2 / (k2 - 1.0));
}

std::vector<SaturationRow> saturation_experiment(const std::vector<double>& weights, double t,
                                                 double epsilon, int order,
                                                 const std::vector<double>& c_grid) {
  require_even_order(order, "saturation_experiment");
  require_weights(weights, "saturation_experiment");
  if (!(t > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("need t, epsilon > 0");
  if (c_grid.empty()) throw std::invalid_argument("saturation_experiment needs a c grid");
  const std::size_t l = weights.size();
  const double lambda = sum_of(weights);
  const double lb = nb_lower_bound_value(lambda, t, epsilon, order);
  const double c_trott = saturation_trotter_cost(lambda, static_cast<long long>(l), t, epsilon,
                                                 order);
  const double c_qd = qdrift_cost_relaxed(lambda, t, epsilon);

  std::vector<SaturationRow> rows(c_grid.size());
  for (std::size_t row = 0; row < c_grid.size(); ++row) {
    const double c = c_grid[row];
    if (c < 0.0) throw std::invalid_argument("saturation c values must be >= 0");
    const double chi = c * lambda / static_cast<double>(l);
    const double n_b = (1.0 + c) * (1.0 + c) * lb;
    std::vector<double> probs(l);
    std::vector<char> in_s(l);
    for (std::size_t i = 0; i < l; ++i) {
      in_s[i] = chi < weights[i] ? 1 : 0;
      probs[i] = 1.0 - std::min(chi / weights[i], 1.0);
    }
    const ExpectedCostBound b =
        expected_cost_bound(weights, probs, in_s, chi, n_b, t, epsilon, order);
    SaturationRow& r = rows[row];
    r.c = c;
    r.n_b = n_b;
    r.s_size = b.s_size;
    r.e_cost = b.total;
    r.c_trott = c_trott;
    r.c_qd = c_qd;
    r.ratio_trott = b.total / c_trott;
    r.ratio_qd = b.total / c_qd;
  }
  return rows;
}

std::vector<double> saturation_c_grid(const std::vector<double>& weights) {
  require_weights(weights, "saturation_c_grid");
  const double lambda = sum_of(weights);
  const double h_max = *std::max_element(weights.begin(), weights.end());
  // chi reaches h_max at c = L h_max / lambda; past that the threshold set
  // is empty and the sweep sits exactly on the plain sampling cost.
  const double c_max = static_cast<double>(weights.size()) * h_max / lambda;
  std::vector<double> grid;
  for (int j = 0; j <= 10; ++j) grid.push_back(c_max * static_cast<double>(j) / 10.0);
  grid.push_back(c_max * 1.25);
  return grid;
}

std::vector<ExpDecayRow> exp_decay_experiment(const std::vector<long long>& l_grid, double c,
                                              double epsilon, int order, long long trials,
                                              std::uint64_t seed) {
  require_even_order(order, "exp_decay_experiment");
  if (l_grid.empty()) throw std::invalid_argument("exp_decay_experiment needs an L grid");
  if (!(epsilon > 0.0)) throw std::invalid_argument("need epsilon > 0");
  if (trials < 100) throw std::invalid_argument("exp_decay_experiment needs >= 100 trials");
  const double k2 = static_cast<double>(order);
  const double ups = static_cast<double>(upsilon(order));

  std::vector<ExpDecayRow> rows(l_grid.size());
  for (std::size_t row = 0; row < l_grid.size(); ++row) {
    const long long l = l_grid[row];
    if (l < 2) throw std::invalid_argument("exp-decay family needs L >= 2");
    const std::vector<double> h = exp_decay_weights(l);
    const double ld = static_cast<double>(l);
    const double lambda = 1.0 - std::ldexp(1.0, static_cast<int>(-l));
    const double alpha = std::log2(ld) / ld;

    // Crossover of 4 lambda^2 t^2 / eps against the product-formula cost
    // upsilon L (upsilon t)^(1+1/2k) eps^(-1/2k) (4 alpha / (2k+1))^(1/2k)
    // with the family's model alpha, in closed form.
    const double rhs = std::pow(ups, 2.0 + 1.0 / k2) * ld *
                       std::pow(4.0 * alpha / (k2 + 1.0), 1.0 / k2) *
                       std::pow(epsilon, 1.0 - 1.0 / k2) / (4.0 * lambda * lambda);
    const double t_star = std::pow(rhs, k2 / (k2 - 1.0));

    const double lb = nb_lower_bound_value(lambda, t_star, epsilon, order);
    const double f = 1.0 + std::pow(2.0, -c);
    const double n_b = f * f * lb;
    const double chi = std::pow(2.0, -c) * lambda / ld;

    // Threshold membership i < c + log2 L - log2 lambda, rearranged so the
    // -log2 lambda = delta side survives rounding: for L >= 54 the double
    // value of lambda is exactly 1 and a naive log2 would lose the term.
    const double delta = -std::log1p(-std::ldexp(1.0, static_cast<int>(-l))) / std::log(2.0);
    const double m = std::log2(ld);
    std::vector<char> in_s(h.size());
    std::vector<double> probs(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      const double idx = static_cast<double>(i + 1);
      in_s[i] = (idx - c - m) < delta ? 1 : 0;
      probs[i] = 1.0 - std::min(std::ldexp(chi, static_cast<int>(i + 1)), 1.0);
    }

    const ExpectedCostBound b =
        expected_cost_bound(h, probs, in_s, chi, n_b, t_star, epsilon, order);

    std::vector<double> la(static_cast<std::size_t>(trials));
    std::vector<double> lamb(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t trial) {
      const std::uint64_t trial_seed = rng::at(seed, kTrialStream, trial);
      double count = 0.0;
      double b_weight = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        const double u = rng::uniform_at(trial_seed, kPartitionStream, i);
        if (u < probs[i]) {
          count += 1.0;
        } else {
          b_weight += h[i];
        }
      }
      la[trial] = count;
      lamb[trial] = b_weight;
    });
    double mc_la = 0.0;
    double mc_lb = 0.0;
    double devs = 0.0;
    for (long long trial = 0; trial < trials; ++trial) {
      const double v = la[static_cast<std::size_t>(trial)];
      mc_la += v;
      mc_lb += lamb[static_cast<std::size_t>(trial)];
      if (std::abs(v - b.e_la) > b.e_la) devs += 1.0;
    }
    mc_la /= static_cast<double>(trials);
    mc_lb /= static_cast<double>(trials);
    const double dev_prob = devs / static_cast<double>(trials);
    const double dev_se = std::sqrt(dev_prob * (1.0 - dev_prob) / static_cast<double>(trials));

    ExpDecayRow& r = rows[row];
    r.l = l;
    r.lambda = lambda;
    r.alpha_model = alpha;
    r.t_star = t_star;
    r.n_b = n_b;
    r.chi = chi;
    r.s_size = b.s_size;
    r.s_floor = static_cast<long long>(std::floor(c + m + delta));
    r.e_la = b.e_la;
    r.mc_la = mc_la;
    r.la_over_l = mc_la / ld;
    r.e_lambda_b = b.e_lambda_b;
    r.mc_lambda_b = mc_lb;
    r.lambda_b_over_lambda = mc_lb / lambda;
    r.e_cost = b.total;
    r.c_base = 4.0 * lambda * lambda * t_star * t_star / epsilon;
    r.cost_ratio = b.total / r.c_base;
    r.dev_prob = dev_prob;
    r.dev_bound = 2.0 * std::exp(-b.e_la / 3.0) + 3.0 * dev_se;
  }
  return rows;
}

std::vector<CrossoverRow> crossover_experiment(const Hamiltonian& h,
                                               const std::vector<double>& eps_grid, int order) {
  if (eps_grid.empty()) throw std::invalid_argument("crossover_experiment needs an eps grid");
  std::vector<CrossoverRow> rows(eps_grid.size());
  for (std::size_t row = 0; row < eps_grid.size(); ++row) {
    const double eps = eps_grid[row];
    if (!(eps > 0.0)) throw std::invalid_argument("crossover eps values must be > 0");
    CrossoverRow& r = rows[row];
    r.epsilon = eps;
    r.t_star = crossover_time(h, eps, order);
    r.c_trott = trotter_cost_relaxed(h, order, r.t_star, eps);
    r.c_qd = qdrift_cost_relaxed(h.lambda, r.t_star, eps);
  }
  return rows;
}

std::string exp_decay_csv(const std::vector<ExpDecayRow>& rows) {
  std::ostringstream out;
  out << "l,lambda,alpha_model,t_star,n_b,chi,s_size,s_floor,e_la,mc_la,la_over_l,"
         "e_lambda_b,mc_lambda_b,lambda_b_over_lambda,e_cost,c_base,cost_ratio,"
         "dev_prob,dev_bound\n";
  for (const ExpDecayRow& r : rows) {
    out << r.l << ',' << format_double(r.lambda) << ',' << format_double(r.alpha_model) << ','
        << format_double(r.t_star) << ',' << format_double(r.n_b) << ','
        << format_double(r.chi) << ',' << r.s_size << ',' << r.s_floor << ','
        << format_double(r.e_la) << ',' << format_double(r.mc_la) << ','
        << format_double(r.la_over_l) << ',' << format_double(r.e_lambda_b) << ','
        << format_double(r.mc_lambda_b) << ',' << format_double(r.lambda_b_over_lambda) << ','
        << format_double(r.e_cost) << ',' << format_double(r.c_base) << ','
        << format_double(r.cost_ratio) << ',' << format_double(r.dev_prob) << ','
        << format_double(r.dev_bound) << '\n';
  }
  return out.str();
}

std::string saturation_csv(const std::vector<SaturationRow>& rows) {
  std::ostringstream out;
  out << "c,n_b,s_size,e_cost,c_trott,c_qd,ratio_trott,ratio_qd\n";
  for (const SaturationRow& r : rows) {
    out << format_double(r.c) << ',' << format_double(r.n_b) << ',' << r.s_size << ','
        << format_double(r.e_cost) << ',' << format_double(r.c_trott) << ','
        << format_double(r.c_qd) << ',' << format_double(r.ratio_trott) << ','
        << format_double(r.ratio_qd) << '\n';
  }
  return out.str();
}

std::string crossover_csv(const std::vector<CrossoverRow>& rows) {
  std::ostringstream out;
  out << "epsilon,t_star,c_trott,c_qd\n";
  for (const CrossoverRow& r : rows) {
    out << format_double(r.epsilon) << ',' << format_double(r.t_star) << ','
        << format_double(r.c_trott) << ',' << format_double(r.c_qd) << '\n';
  }
  return out.str();
}

}  // namespace composim
