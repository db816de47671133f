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

#include "composim/pauli.hpp"

#include <stdexcept>

namespace composim {

Mat pauli_i() {
  Mat m = Mat::Identity(2, 2);
  return m;
}

Mat pauli_x() {
  Mat m(2, 2);
  m << cxd(0, 0), cxd(1, 0), cxd(1, 0), cxd(0, 0);
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << cxd(0, 0), cxd(0, -1), cxd(0, 1), cxd(0, 0);
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << cxd(1, 0), cxd(0, 0), cxd(0, 0), cxd(-1, 0);
  return m;
}

Mat pauli_string_matrix(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("pauli string must be nonempty");
  Mat out = Mat::Identity(1, 1);
  for (char c : s) {
    switch (c) {
      case 'I':
        out = kron(out, pauli_i());
        break;
      case 'X':
        out = kron(out, pauli_x());
        break;
      case 'Y':
        out = kron(out, pauli_y());
        break;
      case 'Z':
        out = kron(out, pauli_z());
        break;
      default:
        throw std::invalid_argument(std::string("unknown pauli letter '") + c + "'");
    }
  }
  return out;
}

}  // namespace composim
