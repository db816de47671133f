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

#include "composim/linalg.hpp"

#include <cstdio>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace composim {

double max_abs(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == m.cols()) {
    const double scale = max_abs(m);
    if (scale == 0.0) return 0.0;
    const double tol = 1e-13 * scale;
    if (max_abs(m - m.adjoint()) <= tol) {
      Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
      return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    // i * (anti-Hermitian) is Hermitian with the same singular values.
    if (max_abs(m + m.adjoint()) <= tol) {
      Eigen::SelfAdjointEigenSolver<Mat> es(Mat(cxd(0.0, 1.0) * m),
                                            Eigen::EigenvaluesOnly);
      return es.eigenvalues().cwiseAbs().maxCoeff();
    }
  }
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Mat expm_i_herm(const Mat& h, double theta) {
  if (h.rows() != h.cols()) throw std::invalid_argument("expm_i_herm: matrix not square");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("expm_i_herm: eigensolver failed");
  const auto& v = es.eigenvectors();
  Vec phases(h.rows());
  for (Eigen::Index j = 0; j < h.rows(); ++j) {
    const double a = theta * es.eigenvalues()(j);
    phases(j) = cxd(std::cos(a), std::sin(a));
  }
  return v * phases.asDiagonal() * v.adjoint();
}

Mat matrix_power(const Mat& m, long long n) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_power: matrix not square");
  if (n < 0) throw std::invalid_argument("matrix_power: negative exponent");
  Mat out = Mat::Identity(m.rows(), m.cols());
  Mat base = m;
  while (n > 0) {
    if (n & 1) out = base * out;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return out;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace composim
