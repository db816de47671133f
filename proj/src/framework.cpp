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

#include "composim/framework.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "composim/trotter.hpp"

namespace composim {
namespace {

long long factorial(std::size_t n) {
  long long f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<long long>(i);
  return f;
}

void check_instance(const SelectInstance& inst, int dim) {
  const std::size_t a = inst.prep_amplitudes.size();
  if (a == 0) throw std::invalid_argument("select instance needs at least one amplitude");
  if (inst.controlled_ops.size() != a) {
    throw std::invalid_argument("select instance needs one controlled op per amplitude");
  }
  if (static_cast<long long>(a) * dim > 4096) {
    throw std::invalid_argument("select instance exceeds the 4096 total-dimension cap");
  }
  double norm2 = 0.0;
  for (double amp : inst.prep_amplitudes) {
    if (amp < 0.0) throw std::invalid_argument("prep amplitudes must be nonnegative");
    norm2 += amp * amp;
  }
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("prep amplitudes must have unit square sum");
  }
  for (const Mat& u : inst.controlled_ops) {
    if (u.rows() != dim || u.cols() != dim) {
      throw std::invalid_argument("controlled op dimension mismatch");
    }
    if (max_abs(u.adjoint() * u - Mat::Identity(dim, dim)) > 1e-10) {
      throw std::invalid_argument("controlled op is not unitary");
    }
  }
  if (inst.unprep.size() != 0) {
    const Eigen::Index ai = static_cast<Eigen::Index>(a);
    if (inst.unprep.rows() != ai || inst.unprep.cols() != ai) {
      throw std::invalid_argument("unprep must act on the ancilla");
    }
    if (max_abs(inst.unprep.adjoint() * inst.unprep - Mat::Identity(ai, ai)) > 1e-10) {
      throw std::invalid_argument("unprep is not unitary");
    }
  }
}

}  // namespace

Superoperator template_channel(const std::vector<SelectInstance>& instances, int dim) {
  if (dim > 64) throw std::invalid_argument("template_channel requires dim <= 64");
  Superoperator total = identity_superoperator(dim);
  for (const SelectInstance& inst : instances) {
    check_instance(inst, dim);
    const std::size_t a = inst.prep_amplitudes.size();
    // System-space Kraus operators: K_m = sum_j unprep(m,j) amp_j U_j, the
    // ancilla-outcome-m branch of unprep * select * (prep tensor identity).
    std::vector<Mat> kraus;
    kraus.reserve(a);
    for (std::size_t m = 0; m < a; ++m) {
      Mat k = Mat::Zero(dim, dim);
      for (std::size_t j = 0; j < a; ++j) {
        const cxd v = inst.unprep.size() == 0
                          ? cxd(m == j ? 1.0 : 0.0, 0.0)
                          : inst.unprep(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(j));
        if (v != cxd(0.0, 0.0)) k += v * inst.prep_amplitudes[j] * inst.controlled_ops[j];
      }
      kraus.push_back(std::move(k));
    }
    Superoperator s;
    s.dim = dim;
    if (inst.post_select >= 0) {
      if (static_cast<std::size_t>(inst.post_select) >= a) {
        throw std::invalid_argument("post_select outcome out of range");
      }
      const Mat& k = kraus[static_cast<std::size_t>(inst.post_select)];
      if (max_abs(k) == 0.0) {
        throw std::runtime_error("post-selection branch has zero success probability");
      }
      s.mat = kron(k.conjugate(), k);  // unnormalized branch, by design
    } else {
      s.mat = Mat::Zero(static_cast<Eigen::Index>(dim) * dim, static_cast<Eigen::Index>(dim) * dim);
      for (const Mat& k : kraus) s.mat += kron(k.conjugate(), k);
    }
    total = compose(s, total);
  }
  return total;
}

Mat prep_unitary(const std::vector<double>& amplitudes) {
  const Eigen::Index a = static_cast<Eigen::Index>(amplitudes.size());
  RVec target(a);
  double norm2 = 0.0;
  for (Eigen::Index i = 0; i < a; ++i) {
    target(i) = amplitudes[static_cast<std::size_t>(i)];
    norm2 += target(i) * target(i);
  }
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("prep_unitary needs a unit vector");
  }
  RVec v = target;
  v(0) -= 1.0;  // reflect e_0 onto the target
  const double vn2 = v.squaredNorm();
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(a, a);
  if (vn2 > 1e-24) w -= 2.0 / vn2 * (v * v.transpose());
  return w.cast<cxd>();
}

SelectInstance qdrift_select_instance(const Hamiltonian& h,
                                      const std::vector<std::size_t>& subset, double t) {
  check_subset(h, subset);
  if (subset.empty()) throw std::invalid_argument("qdrift instance needs a nonempty subset");
  const double lam = lambda_of(h, subset);
  if (!(lam > 0.0)) throw std::invalid_argument("qdrift instance needs lambda > 0");
  SelectInstance inst;
  for (std::size_t i : subset) {
    inst.prep_amplitudes.push_back(std::sqrt(h.terms[i].weight / lam));
    inst.controlled_ops.push_back(expm_i_herm(h.terms[i].op, lam * t));
  }
  return inst;
}

SelectInstance randomized_trotter_select_instance(const Hamiltonian& h,
                                                  const std::vector<std::size_t>& subset,
                                                  double t) {
  check_subset(h, subset);
  if (subset.empty() || subset.size() > 6) {
    throw std::invalid_argument("randomized trotter instance needs 1..6 terms");
  }
  const long long perms = factorial(subset.size());
  const double amp = 1.0 / std::sqrt(static_cast<double>(perms));
  SelectInstance inst;
  std::vector<std::size_t> order = subset;
  std::sort(order.begin(), order.end());
  do {
    inst.prep_amplitudes.push_back(amp);
    inst.controlled_ops.push_back(sequence_unitary(trotter_sequence(h, order, 1, t), h));
  } while (std::next_permutation(order.begin(), order.end()));
  return inst;
}

Superoperator randomized_trotter_channel(const Hamiltonian& h,
                                         const std::vector<std::size_t>& subset, double t) {
  check_subset(h, subset);
  if (subset.empty() || subset.size() > 6) {
    throw std::invalid_argument("randomized_trotter_channel needs 1..6 terms");
  }
  if (h.dim > 64) throw std::invalid_argument("randomized_trotter_channel requires dim <= 64");
  const double weight = 1.0 / static_cast<double>(factorial(subset.size()));
  std::vector<std::size_t> order = subset;
  std::sort(order.begin(), order.end());
  Superoperator s;
  s.dim = h.dim;
  s.mat = Mat::Zero(static_cast<Eigen::Index>(h.dim) * h.dim,
                    static_cast<Eigen::Index>(h.dim) * h.dim);
  do {
    const Mat u = sequence_unitary(trotter_sequence(h, order, 1, t), h);
    s.mat += weight * kron(u.conjugate(), u);
  } while (std::next_permutation(order.begin(), order.end()));
  return s;
}

std::vector<double> multiproduct_coeffs(const std::vector<long long>& k_vec, int step) {
  const std::size_t n = k_vec.size();
  if (n == 0) throw std::invalid_argument("multiproduct_coeffs needs at least one k");
  if (step < 1) throw std::invalid_argument("power step must be >= 1");
  for (std::size_t i = 0; i < n; ++i) {
    if (k_vec[i] < 1) throw std::invalid_argument("k values must be positive");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (k_vec[i] == k_vec[j]) {
        throw std::invalid_argument("duplicate k makes the system singular");
      }
    }
  }
  Eigen::MatrixXd m(n, n);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < n; ++col) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          std::pow(static_cast<double>(k_vec[col]),
                   -static_cast<double>(step) * static_cast<double>(row));
    }
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  rhs(0) = 1.0;
  const Eigen::VectorXd c = m.colPivHouseholderQr().solve(rhs);
  if ((m * c - rhs).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::runtime_error("multiproduct system residual exceeds 1e-10");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = c(static_cast<Eigen::Index>(i));
  return out;
}

double multiproduct_error_check(const Hamiltonian& h, const std::vector<long long>& k_vec,
                                const std::vector<double>& t_grid, int base_order) {
  if (h.dim > 16) throw std::invalid_argument("multiproduct_error_check requires dim <= 16");
  if (!valid_order(base_order)) throw std::invalid_argument("base order must be 1 or even");
  const std::vector<double> coeffs =
      multiproduct_coeffs(k_vec, base_order == 1 ? 1 : 2);
  const auto all = full_subset(h);
  std::vector<std::pair<double, double>> points;
  points.reserve(t_grid.size());
  for (double t : t_grid) {
    Mat m = Mat::Zero(h.dim, h.dim);
    for (std::size_t j = 0; j < k_vec.size(); ++j) {
      const Mat base = sequence_unitary(
          trotter_sequence(h, all, base_order, t / static_cast<double>(k_vec[j])), h);
      m += coeffs[j] * matrix_power(base, k_vec[j]);
    }
    const double err = spectral_norm(m - exact_unitary(h, all, t));
    if (err > 0.0) points.emplace_back(t, err);
  }
  if (points.size() < 4) {
    throw std::invalid_argument("multiproduct grid left fewer than 4 usable points");
  }
  return fit_scaling_exponent(points);
}

}  // namespace composim
