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

#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

namespace composim {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Largest singular value. Hermitian and anti-Hermitian inputs are detected and
// routed through a self-adjoint eigensolve, which is both faster and exact for
// the normal matrices produced by nested commutators.
double spectral_norm(const Mat& m);

double max_abs(const Mat& m);

bool is_hermitian(const Mat& m, double tol = 1e-12);

// e^{i theta H} for Hermitian H, via eigendecomposition. Exact up to the
// eigensolver's accuracy; used as the oracle for every unitary in the library.
Mat expm_i_herm(const Mat& h, double theta);

// Integer matrix power by binary exponentiation; deterministic, so identical
// inputs give bit-identical results.
Mat matrix_power(const Mat& m, long long n);

Mat kron(const Mat& a, const Mat& b);

// Formats a double with max_digits10 so that parsing recovers the exact value.
std::string format_double(double v);

// Ceiling for repetition counts. Bound arithmetic that lands exactly on an
// integer can overshoot by an ulp and round a whole step up; a 1e-12 relative
// forgiveness absorbs that. Counts in this library stay far below 1e12, so
// the slack never swallows a genuine fraction.
inline long long ceil_count(double x) {
  if (!(x > 0.0)) return 0;
  return static_cast<long long>(std::ceil(x * (1.0 - 1e-12)));
}

}  // namespace composim
