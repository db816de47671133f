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

// Exercises the installed CLI end to end: exit-code contract, output shape,
// and per-seed determinism. Runs the real binary via system().

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what) {
  if (ok) {
    std::cout << "ok " << what << "\n";
  } else {
    std::cout << "FAIL " << what << "\n";
    ++g_failures;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

// Runs the CLI with stdout captured to a file; returns the exit code.
int run(const std::string& args, const std::string& out_file) {
  const std::string cmd =
      std::string(COMPOSIM_CLI_PATH) + " " + args + " > " + out_file + " 2> /dev/null";
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

int main() {
  const std::string data = COMPOSIM_DATA_DIR;
  const std::string xz = data + "/single_qubit_xz.json";
  const std::string mixed = data + "/two_qubit_mixed.json";
  const std::string heis = data + "/two_qubit_heisenberg.json";
  const std::string matrix = data + "/single_qubit_matrix.json";

  // Cost report with the known first-order values.
  {
    const int rc = run("cost --ham " + xz + " --order 1 --time 1 --eps 0.1 "
                       "--b-terms 1 --nb 4 --diagnostics",
                       "smoke_cost.txt");
    const std::string out = slurp("smoke_cost.txt");
    expect(rc == 0, "cost exits 0");
    expect(out.find("r 30\n") != std::string::npos, "cost reports r 30");
    expect(out.find("c_comp 150\n") != std::string::npos, "cost reports c_comp 150");
    expect(out.find("comp_vs_best") != std::string::npos, "cost appends diagnostics");
  }

  // The same report as CSV keeps one header and one data row.
  {
    const int rc = run("cost --ham " + xz + " --order 1 --time 1 --eps 0.1 "
                       "--b-terms 1 --nb 4 --format csv",
                       "smoke_cost.csv");
    const std::string out = slurp("smoke_cost.csv");
    expect(rc == 0, "cost csv exits 0");
    expect(out.rfind("order,", 0) == 0, "cost csv starts with the header");
    int lines = 0;
    for (char ch : out) lines += ch == '\n';
    expect(lines == 2, "cost csv has exactly two lines");
  }

  // Both partition schemes run on the bundled sets.
  {
    const int rc = run("partition --ham " + mixed + " --scheme gradient --time 0.5 "
                       "--eps 0.01 --nb 2",
                       "smoke_grad.txt");
    const std::string out = slurp("smoke_grad.txt");
    expect(rc == 0, "gradient partition exits 0");
    expect(out.find("scheme gradient") != std::string::npos, "gradient header present");
    expect(out.find("final_cost") != std::string::npos, "gradient prints final cost");
  }
  {
    const int rc = run("partition --ham " + mixed + " --scheme prob --time 0.4 "
                       "--eps 0.01 --nb 9 --trials 200 --seed 5",
                       "smoke_prob.txt");
    const std::string out = slurp("smoke_prob.txt");
    expect(rc == 0, "probabilistic partition exits 0");
    expect(out.find("chi ") != std::string::npos, "probabilistic header present");
    expect(out.find("mc_lambda_b ") != std::string::npos, "moment report appended");
  }

  // Simulation compares measured distances to bounds and stays within them.
  {
    const int rc = run("simulate --ham " + xz + " --order 2 --time 0.5 --eps 0.01 "
                       "--b-terms 1 --nb 4",
                       "smoke_sim.txt");
    const std::string out = slurp("smoke_sim.txt");
    expect(rc == 0, "simulate exits 0 with all bounds satisfied");
    expect(out.find("trotter_measured ") != std::string::npos, "simulate reports trotter");
    expect(out.find("qdrift_measured ") != std::string::npos, "simulate reports qdrift");
    expect(out.find("composite_measured ") != std::string::npos,
           "simulate reports composite");
  }

  // Matrix-form input loads through the same path.
  {
    const int rc = run("cost --ham " + matrix + " --order 2 --time 0.5 --eps 0.01",
                       "smoke_matrix.txt");
    expect(rc == 0, "matrix-form hamiltonian loads");
  }

  // Experiments emit plot-ready CSV.
  {
    const int rc = run("experiment exp-decay --l-grid 16,32 --trials 300 --seed 9",
                       "smoke_expdecay.csv");
    const std::string out = slurp("smoke_expdecay.csv");
    expect(rc == 0, "exp-decay exits 0");
    expect(out.rfind("l,lambda,", 0) == 0, "exp-decay csv header");
    int lines = 0;
    for (char ch : out) lines += ch == '\n';
    expect(lines == 3, "exp-decay csv has header plus two rows");
  }
  {
    const int rc = run("experiment saturation", "smoke_sat.csv");
    const std::string out = slurp("smoke_sat.csv");
    expect(rc == 0, "saturation exits 0 with both limits in range");
    expect(out.rfind("c,n_b,", 0) == 0, "saturation csv header");
  }
  {
    const int rc = run("experiment crossover --ham " + heis + " --eps-grid 1e-2,1e-3",
                       "smoke_cross.csv");
    const std::string out = slurp("smoke_cross.csv");
    expect(rc == 0, "crossover exits 0");
    expect(out.rfind("epsilon,t_star,", 0) == 0, "crossover csv header");
  }

  // Determinism: repeated runs with one seed are byte-identical.
  {
    const int rc1 = run("experiment exp-decay --l-grid 16 --trials 300 --seed 11",
                        "smoke_det_a.csv");
    const int rc2 = run("experiment exp-decay --l-grid 16 --trials 300 --seed 11",
                        "smoke_det_b.csv");
    const std::string a = slurp("smoke_det_a.csv");
    expect(rc1 == 0 && rc2 == 0 && !a.empty() && a == slurp("smoke_det_b.csv"),
           "repeated runs are byte-identical");
    const int rc3 = run("experiment exp-decay --l-grid 16 --trials 300 --seed 12",
                        "smoke_det_c.csv");
    expect(rc3 == 0 && slurp("smoke_det_c.csv") != a, "changing the seed changes the draw");
  }

  // Config errors use exit code 3.
  expect(run("cost --ham " + xz + " --order 3", "smoke_err.txt") == 3,
         "invalid order exits 3");
  expect(run("cost --ham " + data + "/no_such_file.json", "smoke_err.txt") == 3,
         "missing file exits 3");
  expect(run("frobnicate", "smoke_err.txt") == 3, "unknown subcommand exits 3");
  expect(run("cost", "smoke_err.txt") == 3, "missing required flag exits 3");
  expect(run("partition --ham " + xz + " --scheme prob --nb 1 --time 1 --eps 0.001",
             "smoke_err.txt") == 3,
         "sample count below the floor exits 3");
  expect(run("--help", "smoke_err.txt") == 0, "help exits 0");

  // The full invariant suite passes through the CLI entry point.
  {
    const int rc = run("verify --seed 20260101", "smoke_verify.txt");
    const std::string out = slurp("smoke_verify.txt");
    expect(rc == 0, "verify exits 0");
    expect(out.find("FAIL") == std::string::npos, "verify reports no failures");
    expect(out.find("ok trotter-channel-bound") != std::string::npos,
           "verify lists the bound checks");
  }

  for (const char* f :
       {"smoke_cost.txt", "smoke_cost.csv", "smoke_grad.txt", "smoke_prob.txt",
        "smoke_sim.txt", "smoke_matrix.txt", "smoke_expdecay.csv", "smoke_sat.csv",
        "smoke_cross.csv", "smoke_det_a.csv", "smoke_det_b.csv", "smoke_det_c.csv",
        "smoke_err.txt", "smoke_verify.txt"}) {
    std::remove(f);
  }

  if (g_failures > 0) {
    std::cout << g_failures << " smoke check(s) failed\n";
    return 1;
  }
  std::cout << "all cli smoke checks passed\n";
  return 0;
}
