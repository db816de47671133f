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

#include "composim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "composim/qdrift.hpp"
#include "composim/trotter.hpp"

namespace composim {
namespace {

void require_same_dim(const Superoperator& a, const Superoperator& b) {
  if (a.dim != b.dim) throw std::invalid_argument("superoperator dimensions differ");
}

}  // namespace

Superoperator identity_superoperator(int dim) {
  Superoperator s;
  s.dim = dim;
  s.mat = Mat::Identity(static_cast<Eigen::Index>(dim) * dim, static_cast<Eigen::Index>(dim) * dim);
  return s;
}

Superoperator unitary_channel(const Mat& u) {
  const Eigen::Index d = u.rows();
  if (u.cols() != d) throw std::invalid_argument("unitary_channel needs a square matrix");
  const Mat gram = u.adjoint() * u;
  if (max_abs(gram - Mat::Identity(d, d)) > 1e-10) {
    throw std::invalid_argument("unitary_channel input is not unitary to 1e-10");
  }
  Superoperator s;
  s.dim = static_cast<int>(d);
  s.mat = kron(u.conjugate(), u);
  return s;
}

Superoperator compose(const Superoperator& outer, const Superoperator& inner) {
  require_same_dim(outer, inner);
  Superoperator s;
  s.dim = outer.dim;
  s.mat = outer.mat * inner.mat;
  return s;
}

Superoperator superop_power(const Superoperator& s, long long n) {
  if (n < 0) throw std::invalid_argument("superop_power needs n >= 0");
  Superoperator out;
  out.dim = s.dim;
  out.mat = matrix_power(s.mat, n);
  return out;
}

Mat choi_matrix(const Superoperator& s) {
  const Eigen::Index d = s.dim;
  Mat j = Mat::Zero(d * d, d * d);
  // J = (1/d) sum_{i,j} Phi(E_ij) (x) E_ij; vec(E_ij) is the unit vector at
  // column-stacked index j*d + i.
  for (Eigen::Index col = 0; col < d; ++col) {
    for (Eigen::Index row = 0; row < d; ++row) {
      const Vec image = s.mat.col(col * d + row);
      // unvec: column-major reshape of the image into a d x d block.
      for (Eigen::Index c2 = 0; c2 < d; ++c2) {
        for (Eigen::Index r2 = 0; r2 < d; ++r2) {
          j(r2 * d + row, c2 * d + col) += image(c2 * d + r2) / static_cast<double>(d);
        }
      }
    }
  }
  return j;
}

CptpCheck cptp_check(const Superoperator& s) {
  const Eigen::Index d = s.dim;
  const Mat j = choi_matrix(s);
  const Mat jh = 0.5 * (j + j.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(jh);
  CptpCheck out;
  out.min_choi_eigenvalue = es.eigenvalues().minCoeff();
  out.cp = out.min_choi_eigenvalue >= -1e-10 && max_abs(j - jh) <= 1e-10;
  // Partial trace over the output (first) tensor factor must give I/d.
  Mat pt = Mat::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) {
        pt(i, k) += j(a * d + i, a * d + k);
      }
    }
  }
  out.tp_deviation = max_abs(pt - Mat::Identity(d, d) / static_cast<double>(d));
  out.tp = out.tp_deviation <= 1e-10;
  return out;
}

double diamond_lower_bound(const Superoperator& phi, const Superoperator& psi) {
  require_same_dim(phi, psi);
  const Mat diff = choi_matrix(phi) - choi_matrix(psi);
  const Mat herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(herm);
  return es.eigenvalues().cwiseAbs().sum();
}

double unitary_spectral_distance(const Mat& u, const Mat& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw std::invalid_argument("unitary_spectral_distance dimension mismatch");
  }
  return 2.0 * spectral_norm(u - v);
}

double fit_scaling_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw std::invalid_argument("fit needs at least 4 points");
  double tmin = points.front().first;
  double tmax = points.front().first;
  for (const auto& [t, err] : points) {
    if (!(t > 0.0)) throw std::invalid_argument("fit needs positive t values");
    if (!(err > 0.0)) throw std::invalid_argument("fit needs positive errors");
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  if (tmax < 4.0 * tmin) throw std::invalid_argument("fit needs t spanning >= 2 octaves");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(points.size());
  for (const auto& [t, err] : points) {
    const double x = std::log(t);
    const double y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double crossover_time(const Hamiltonian& h, double epsilon, int order) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto log_ratio = [&](double t) {
    const double ct = trotter_cost_relaxed(h, order, t, epsilon);
    const double cq = qdrift_cost_relaxed(h.lambda, t, epsilon);
    if (!(ct > 0.0) || !(cq > 0.0)) {
      throw std::runtime_error("crossover bracket error: degenerate cost (commuting terms?)");
    }
    return std::log(cq) - std::log(ct);
  };
  double lo = 1e-6, hi = 1.0;
  double flo = log_ratio(lo), fhi = log_ratio(hi);
  int guard = 0;
  while (flo * fhi > 0.0 && guard < 120) {
    if (std::abs(flo) < std::abs(fhi)) {
      lo /= 4.0;
      flo = log_ratio(lo);
    } else {
      hi *= 4.0;
      fhi = log_ratio(hi);
    }
    ++guard;
  }
  if (flo * fhi > 0.0) {
    throw std::runtime_error("crossover bracket error: no sign change in cost ratio");
  }
  for (int it = 0; it < 500; ++it) {
    const double mid = std::sqrt(lo * hi);  // bisect in log t
    const double fm = log_ratio(mid);
    if (std::abs(fm) <= 1e-9) return mid;
    if (flo * fm <= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  throw std::runtime_error("crossover bisection failed to reach tolerance");
}

}  // namespace composim
