// Copyright 2026 The incoherent Authors
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

// Pauli matrices and a parser for real-weighted Pauli-string sums such as
// "0.7853981633974483 * ZZ - 0.1 * XI + IY". The leftmost letter acts on the
// first tensor factor.

#include <string>
#include <string_view>

#include "incoherent/liouville.hpp"

namespace incoherent {

ComplexMatrix pauli(char label);
/// Tensor product of the single-qubit Paulis named in `word`, e.g. "XIZ".
ComplexMatrix pauli_string(std::string_view word);
/// Parses a sum of `coefficient * WORD` terms. All words must have the same
/// length; a missing coefficient means 1. Throws ParseError.
ComplexMatrix parse_pauli_sum(std::string_view expr);

}  // namespace incoherent
