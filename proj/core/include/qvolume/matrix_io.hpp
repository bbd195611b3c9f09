// Copyright 2026 The qvolume Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "qvolume/hermitian.hpp"

namespace qvolume {

// Plain-text matrix format:
//
//   n
//   a_11 a_12 ... a_1n
//   ...
//   a_n1 a_n2 ... a_nn
//
// Entries are whitespace separated and written as "re+imj" / "re-imj" with 17
// significant digits. The reader also accepts bare reals ("0.25") and bare
// imaginaries ("-2j"). Lines starting with '#' are skipped by the reader.

std::string format_complex(Complex z);

/// Throws InvalidInput on malformed text.
Complex parse_complex(std::string_view token);

void write_matrix(std::ostream &out, const ComplexMatrix &m);

/// Throws InvalidInput on malformed input or truncated data.
ComplexMatrix read_matrix(std::istream &in);

}  // namespace qvolume
