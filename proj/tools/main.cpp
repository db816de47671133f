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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "composim/composite.hpp"
#include "composim/experiments.hpp"
#include "composim/hamiltonian.hpp"
#include "composim/linalg.hpp"
#include "composim/metrics.hpp"
#include "composim/partition.hpp"
#include "composim/qdrift.hpp"
#include "composim/trotter.hpp"
#include "composim/verify.hpp"

namespace {

using namespace composim;

// Exit-code contract: 0 = all checks pass, 2 = a bound or invariant was
// violated, 3 = configuration error (bad flags, bad input file, unsatisfiable
// parameters).
constexpr int kExitOk = 0;
constexpr int kExitViolation = 2;
constexpr int kExitConfig = 3;

// Default seed; documented in the README and stable across releases.
constexpr std::uint64_t kDefaultSeed = 20260101;

struct RunConfig {
  std::string ham_path;
  std::string out_path;
  std::string format = "text";  // text | csv
  std::string scheme = "gradient";
  std::string b_terms;
  std::string l_grid = "16,32,64,128,256";
  std::string c_grid;
  std::string eps_grid = "1e-2,1e-3,1e-4";
  double t = 1.0;
  double epsilon = 1e-3;
  double n_b = 0.0;  // 0 = choose automatically
  double c = -1.0;   // < 0 = not set
  int order = 2;
  long long trials = 0;
  std::uint64_t seed = kDefaultSeed;
  bool diagnostics = false;
};

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << text;
}

template <typename T>
std::vector<T> parse_list(const std::string& s, const char* what) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::stringstream conv(item);
    T v;
    if (!(conv >> v)) throw std::invalid_argument(std::string("bad ") + what + ": " + item);
    std::string rest;
    if (conv >> rest) throw std::invalid_argument(std::string("bad ") + what + ": " + item);
    out.push_back(v);
  }
  return out;
}

Partition partition_from_b(const Hamiltonian& h, const std::string& b_terms) {
  Partition p;
  std::vector<char> in_b(h.size(), 0);
  for (long long idx : parse_list<long long>(b_terms, "term index")) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= h.size())
      throw std::invalid_argument("term index out of range: " + std::to_string(idx));
    in_b[static_cast<std::size_t>(idx)] = 1;
  }
  for (std::size_t i = 0; i < h.size(); ++i) {
    (in_b[i] ? p.b_indices : p.a_indices).push_back(i);
  }
  check_partition(h, p);
  return p;
}

// Turns strictly "key value" lines into a two-row CSV.
std::string kv_to_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line, header, row;
  while (std::getline(ss, line)) {
    const auto pos = line.find(' ');
    if (pos == std::string::npos || line.find(' ', pos + 1) != std::string::npos)
      throw std::logic_error("not a key-value line: " + line);
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += line.substr(0, pos);
    row += line.substr(pos + 1);
  }
  return header + "\n" + row + "\n";
}

long long resolve_n_b(const Hamiltonian& h, const Partition& p, const RunConfig& cfg) {
  if (cfg.n_b > 0.0) return ceil_count(cfg.n_b);
  if (p.b_indices.empty()) return 1;
  const double opt = cfg.order == 1
                         ? optimal_nb_first(h, p)
                         : optimal_nb_higher(h, p, cfg.order, cfg.t, cfg.epsilon);
  const long long n = ceil_count(opt);
  return n < 1 ? 1 : n;
}

void require_valid_order(int order) {
  if (!valid_order(order)) throw std::invalid_argument("order must be 1 or even and positive");
}

int run_cost(const RunConfig& cfg) {
  require_valid_order(cfg.order);
  const Hamiltonian h = load_hamiltonian(cfg.ham_path);
  const Partition p = partition_from_b(h, cfg.b_terms);
  const long long n_b = resolve_n_b(h, p, cfg);
  const CostReport rep = cfg.order == 1
                             ? first_order_cost(h, p, cfg.t, cfg.epsilon, n_b)
                             : higher_order_cost(h, p, cfg.order, cfg.t, cfg.epsilon, n_b);
  std::string text = serialize_cost_report(rep);
  if (cfg.diagnostics) {
    const ImprovementDiagnostics d =
        improvement_diagnostics(h, p, cfg.t, cfg.epsilon, cfg.order, n_b);
    if (cfg.format == "csv") {
      // Merge both key-value blocks into one row. The diagnostics block
      // repeats a few cost-report keys; keep each column once.
      std::set<std::string> seen;
      std::istringstream base(text);
      for (std::string line; std::getline(base, line);) {
        seen.insert(line.substr(0, line.find(' ')));
      }
      std::istringstream diag(serialize_improvement_diagnostics(d));
      for (std::string line; std::getline(diag, line);) {
        if (seen.insert(line.substr(0, line.find(' '))).second) text += line + "\n";
      }
    } else {
      text += serialize_improvement_diagnostics(d);
    }
  }
  emit(cfg.out_path, cfg.format == "csv" ? kv_to_csv(text) : text);
  return kExitOk;
}

int run_partition(const RunConfig& cfg) {
  require_valid_order(cfg.order);
  const Hamiltonian h = load_hamiltonian(cfg.ham_path);
  std::ostringstream out;
  if (cfg.scheme == "gradient") {
    const long long n_b = cfg.n_b > 0.0 ? ceil_count(cfg.n_b) : 1;
    const std::vector<double> init(h.size(), 0.5);
    const DescentResult res = descend_weights(h, cfg.t, cfg.epsilon, n_b, init);
    if (cfg.format == "csv") {
      out << "index,weight,side\n";
      for (std::size_t i = 0; i < h.size(); ++i) {
        out << i << ',' << format_double(res.weights.weights[i]) << ','
            << (res.weights.weights[i] > 0.0 ? 'A' : 'B') << "\n";
      }
    } else {
      out << "scheme gradient\n";
      out << "n_b " << n_b << "\n";
      out << "initial_cost " << format_double(res.initial_cost) << "\n";
      out << "final_cost " << format_double(res.final_cost) << "\n";
      out << "iterations " << res.iterations << "\n";
      out << "converged " << (res.converged ? 1 : 0) << "\n";
      for (std::size_t i = 0; i < h.size(); ++i) {
        out << "term " << i << " weight " << format_double(res.weights.weights[i]) << " side "
            << (res.weights.weights[i] > 0.0 ? 'A' : 'B') << "\n";
      }
    }
  } else if (cfg.scheme == "prob") {
    double n_b = cfg.n_b;
    if (n_b <= 0.0) {
      const double c = cfg.c >= 0.0 ? cfg.c : 1.0;
      n_b = static_cast<double>(nb_parametrized(h, cfg.t, cfg.epsilon, cfg.order, c));
    }
    const ProbPartition pp = prob_partition(h, cfg.t, cfg.epsilon, cfg.order, n_b);
    const Partition p = sample_partition(pp, cfg.seed);
    std::vector<char> side(h.size(), 'B');
    for (std::size_t i : p.a_indices) side[i] = 'A';
    if (cfg.format == "csv") {
      out << "index,weight,prob_a,in_s,side\n";
      for (std::size_t i = 0; i < h.size(); ++i) {
        const bool in_s =
            std::find(pp.sampling_set.begin(), pp.sampling_set.end(), i) != pp.sampling_set.end();
        out << i << ',' << format_double(h.terms[i].weight) << ','
            << format_double(pp.probs[i]) << ',' << (in_s ? 1 : 0) << ',' << side[i] << "\n";
      }
    } else {
      out << "scheme prob\n";
      out << "chi " << format_double(pp.chi) << "\n";
      out << "n_b " << format_double(n_b) << "\n";
      out << "s_size " << pp.sampling_set.size() << "\n";
      out << "seed " << cfg.seed << "\n";
      for (std::size_t i = 0; i < h.size(); ++i) {
        out << "term " << i << " prob_a " << format_double(pp.probs[i]) << " side " << side[i]
            << "\n";
      }
      if (cfg.trials > 0) {
        const MomentReport rep = moment_report(h, pp, cfg.t, cfg.order, ceil_count(n_b),
                                               cfg.trials, cfg.seed);
        out << serialize_moment_report(rep);
      }
    }
  } else {
    throw std::invalid_argument("unknown scheme: " + cfg.scheme + " (use gradient or prob)");
  }
  emit(cfg.out_path, out.str());
  return kExitOk;
}

int run_simulate(const RunConfig& cfg) {
  require_valid_order(cfg.order);
  const Hamiltonian h = load_hamiltonian(cfg.ham_path);
  const std::vector<std::size_t> full = full_subset(h);
  const Superoperator exact = unitary_channel(exact_unitary(h, full, cfg.t));

  const TrotterCost tc = trotter_cost(h, cfg.order, cfg.t, cfg.epsilon);
  const GateSequence seq = trotter_sequence(h, full, cfg.order, cfg.t / static_cast<double>(tc.r));
  const Superoperator trot =
      superop_power(unitary_channel(sequence_unitary(seq, h)), tc.r);
  const double trot_measured = diamond_lower_bound(trot, exact);
  const double trot_bound =
      trotter_error_bound(h, full, cfg.order, cfg.t, tc.r).channel_total;

  const QDriftCost qc = qdrift_cost(h, full, cfg.t, cfg.epsilon);
  const Superoperator qd = qdrift_exact_channel(h, full, cfg.t, qc.n);
  const double qd_measured = diamond_lower_bound(qd, exact);
  const double qd_bound = qdrift_error_bound(h.lambda, cfg.t, qc.n);

  const Partition p = partition_from_b(h, cfg.b_terms);
  const long long n_b = resolve_n_b(h, p, cfg);
  const CostReport rep = cfg.order == 1
                             ? first_order_cost(h, p, cfg.t, cfg.epsilon, n_b)
                             : higher_order_cost(h, p, cfg.order, cfg.t, cfg.epsilon, n_b);
  CompositeParams params;
  params.partition = p;
  params.order = cfg.order;
  params.t = cfg.t;
  params.epsilon = cfg.epsilon;
  params.n_b = n_b;
  params.r = rep.r;
  const Superoperator comp = composite_exact_channel(h, params);
  const double comp_measured = diamond_lower_bound(comp, exact);

  std::ostringstream out;
  if (cfg.format == "csv") {
    out << "method,segments,samples,measured,bound\n";
    out << "trotter," << tc.r << ",0," << format_double(trot_measured) << ','
        << format_double(trot_bound) << "\n";
    out << "qdrift,1," << qc.n << ',' << format_double(qd_measured) << ','
        << format_double(qd_bound) << "\n";
    out << "composite," << rep.r << ',' << n_b << ',' << format_double(comp_measured) << ','
        << format_double(cfg.epsilon) << "\n";
  } else {
    out << "t " << format_double(cfg.t) << "\n";
    out << "epsilon " << format_double(cfg.epsilon) << "\n";
    out << "order " << cfg.order << "\n";
    out << "trotter_r " << tc.r << "\n";
    out << "trotter_measured " << format_double(trot_measured) << "\n";
    out << "trotter_bound " << format_double(trot_bound) << "\n";
    out << "qdrift_n " << qc.n << "\n";
    out << "qdrift_measured " << format_double(qd_measured) << "\n";
    out << "qdrift_bound " << format_double(qd_bound) << "\n";
    out << "composite_r " << rep.r << "\n";
    out << "composite_nb " << n_b << "\n";
    out << "composite_measured " << format_double(comp_measured) << "\n";
    out << "composite_bound " << format_double(cfg.epsilon) << "\n";
  }
  emit(cfg.out_path, out.str());
  const bool violated =
      trot_measured > trot_bound || qd_measured > qd_bound || comp_measured > cfg.epsilon;
  if (violated) std::cerr << "FAIL measured distance exceeds its bound\n";
  return violated ? kExitViolation : kExitOk;
}

int run_verify(const RunConfig& cfg) {
  const std::vector<CheckResult> checks = run_invariant_suite(cfg.seed);
  emit(cfg.out_path, render_checks(checks));
  return all_ok(checks) ? kExitOk : kExitViolation;
}

int run_exp_decay(const RunConfig& cfg) {
  const std::vector<long long> l_grid = parse_list<long long>(cfg.l_grid, "L value");
  if (l_grid.empty()) throw std::invalid_argument("empty --l-grid");
  const double c = cfg.c >= 0.0 ? cfg.c : 1.0;
  const long long trials = cfg.trials > 0 ? cfg.trials : 2000;
  const std::vector<ExpDecayRow> rows =
      exp_decay_experiment(l_grid, c, cfg.epsilon, cfg.order, trials, cfg.seed);
  emit(cfg.out_path, exp_decay_csv(rows));
  return kExitOk;
}

int run_saturation(const RunConfig& cfg) {
  require_valid_order(cfg.order);
  if (cfg.order == 1) throw std::invalid_argument("saturation sweep needs an even order");
  std::vector<double> weights;
  if (cfg.ham_path.empty()) {
    weights = exp_decay_weights(16);
  } else {
    const Hamiltonian h = load_hamiltonian(cfg.ham_path);
    for (const HamTerm& term : h.terms) weights.push_back(term.weight);
  }
  const double t =
      cfg.t > 0.0 ? cfg.t : saturation_crossover_time(weights, cfg.epsilon, cfg.order);
  const std::vector<double> c_grid = cfg.c_grid.empty()
                                         ? saturation_c_grid(weights)
                                         : parse_list<double>(cfg.c_grid, "c value");
  const std::vector<SaturationRow> rows =
      saturation_experiment(weights, t, cfg.epsilon, cfg.order, c_grid);
  emit(cfg.out_path, saturation_csv(rows));

  // Endpoint sanity: at c = 0 the expected-cost bound must sit at the known
  // multiple of the product-formula cost; past the threshold it must match
  // the sampling cost.
  const int two_k = cfg.order;
  const double limit = std::pow(static_cast<double>(upsilon(two_k)), 1.0 / two_k) /
                       std::pow(2.0, 1.0 - 1.0 / two_k);
  bool violated = false;
  for (const SaturationRow& row : rows) {
    if (row.c == 0.0 && std::abs(row.ratio_trott - limit) > 0.01) {
      std::cerr << "FAIL saturation c=0: ratio_trott " << format_double(row.ratio_trott)
                << " expected " << format_double(limit) << "\n";
      violated = true;
    }
    if (row.s_size == 0 && std::abs(row.ratio_qd - 1.0) > 0.02) {
      std::cerr << "FAIL saturation sampling-only: ratio_qd " << format_double(row.ratio_qd)
                << " expected 1\n";
      violated = true;
    }
  }
  return violated ? kExitViolation : kExitOk;
}

int run_crossover(const RunConfig& cfg) {
  require_valid_order(cfg.order);
  const Hamiltonian h = load_hamiltonian(cfg.ham_path);
  const std::vector<double> eps_grid = parse_list<double>(cfg.eps_grid, "epsilon value");
  if (eps_grid.empty()) throw std::invalid_argument("empty --eps-grid");
  const std::vector<CrossoverRow> rows = crossover_experiment(h, eps_grid, cfg.order);
  emit(cfg.out_path, crossover_csv(rows));
  return kExitOk;
}

void add_common_flags(CLI::App* cmd, RunConfig* cfg) {
  cmd->add_option("--time", cfg->t, "Evolution time t");
  cmd->add_option("--eps", cfg->epsilon, "Target channel error")->check(CLI::PositiveNumber);
  cmd->add_option("--order", cfg->order, "Formula order: 1 or an even integer");
  cmd->add_option("--seed", cfg->seed, "RNG seed (default 20260101)");
  cmd->add_option("--out", cfg->out_path, "Write output here instead of stdout");
  cmd->add_option("--format", cfg->format, "Output format")
      ->check(CLI::IsMember({"text", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Composite Hamiltonian-simulation compiler and cost analyzer"};
  app.require_subcommand(1);

  CLI::App* cost = app.add_subcommand("cost", "Gate-cost and error-bound report");
  cost->add_option("--ham", cfg.ham_path, "Hamiltonian JSON file")->required();
  cost->add_option("--b-terms", cfg.b_terms, "Comma-separated 0-based indices sampled randomly");
  cost->add_option("--nb", cfg.n_b, "Randomized samples per segment (default: optimize)");
  cost->add_flag("--diagnostics", cfg.diagnostics, "Append improvement-regime ratios");
  add_common_flags(cost, &cfg);

  CLI::App* part = app.add_subcommand("partition", "Partition the terms of a Hamiltonian");
  part->add_option("--ham", cfg.ham_path, "Hamiltonian JSON file")->required();
  part->add_option("--scheme", cfg.scheme, "gradient | prob")
      ->check(CLI::IsMember({"gradient", "prob"}));
  auto* part_nb = part->add_option("--nb", cfg.n_b, "Randomized samples per segment");
  part->add_option("--c", cfg.c, "Sample-count parameter: n_b = (1+2^-c)^2 * floor bound")
      ->excludes(part_nb);
  part->add_option("--trials", cfg.trials, "Monte Carlo trials for the moment report");
  add_common_flags(part, &cfg);

  CLI::App* sim = app.add_subcommand("simulate", "Build exact channels, compare to bounds");
  sim->add_option("--ham", cfg.ham_path, "Hamiltonian JSON file")->required();
  sim->add_option("--b-terms", cfg.b_terms, "Comma-separated 0-based indices sampled randomly");
  sim->add_option("--nb", cfg.n_b, "Randomized samples per segment (default: optimize)");
  add_common_flags(sim, &cfg);

  CLI::App* ver = app.add_subcommand("verify", "Run the cross-module invariant suite");
  ver->add_option("--seed", cfg.seed, "RNG seed (default 20260101)");
  ver->add_option("--out", cfg.out_path, "Write output here instead of stdout");

  CLI::App* exp = app.add_subcommand("experiment", "Named cost-model experiments");
  exp->require_subcommand(1);
  CLI::App* expd = exp->add_subcommand("exp-decay",
                                       "Exponentially decaying weights swept over L");
  expd->add_option("--l-grid", cfg.l_grid, "Comma-separated term counts");
  expd->add_option("--c", cfg.c, "Threshold parameter chi = 2^-c lambda / L");
  expd->add_option("--trials", cfg.trials, "Monte Carlo trials per L (default 2000)");
  expd->add_option("--eps", cfg.epsilon, "Target channel error")->check(CLI::PositiveNumber);
  expd->add_option("--order", cfg.order, "Even formula order");
  expd->add_option("--seed", cfg.seed, "RNG seed (default 20260101)");
  expd->add_option("--out", cfg.out_path, "Write output here instead of stdout");

  CLI::App* sat = exp->add_subcommand("saturation", "Expected-cost bound swept over c");
  sat->add_option("--ham", cfg.ham_path, "Hamiltonian JSON file (default: 2^-i, L=16)");
  sat->add_option("--c-grid", cfg.c_grid, "Comma-separated c values");
  sat->add_option("--time", cfg.t, "Evolution time (default: cost-crossover time)")
      ->default_val(0.0);
  sat->add_option("--eps", cfg.epsilon, "Target channel error")->check(CLI::PositiveNumber);
  sat->add_option("--order", cfg.order, "Even formula order");
  sat->add_option("--out", cfg.out_path, "Write output here instead of stdout");

  CLI::App* cross = exp->add_subcommand("crossover", "Trotter/sampling crossover time per epsilon");
  cross->add_option("--ham", cfg.ham_path, "Hamiltonian JSON file")->required();
  cross->add_option("--eps-grid", cfg.eps_grid, "Comma-separated target errors");
  cross->add_option("--order", cfg.order, "Formula order: 1 or an even integer");
  cross->add_option("--out", cfg.out_path, "Write output here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand(cost)) return run_cost(cfg);
    if (app.got_subcommand(part)) return run_partition(cfg);
    if (app.got_subcommand(sim)) return run_simulate(cfg);
    if (app.got_subcommand(ver)) return run_verify(cfg);
    if (exp->got_subcommand(expd)) return run_exp_decay(cfg);
    if (exp->got_subcommand(sat)) return run_saturation(cfg);
    if (exp->got_subcommand(cross)) return run_crossover(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::cerr << "error: no subcommand\n";
  return kExitConfig;
}
