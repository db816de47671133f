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

#include <string>

#include "composim/linalg.hpp"

namespace composim {

// Dense matrix for a Pauli string such as "XZI": leftmost letter acts on the
// most significant qubit. Accepts I, X, Y, Z; throws on anything else.
Mat pauli_string_matrix(const std::string& s);

// Single-qubit Paulis.
Mat pauli_i();
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

}  // namespace composim
