// Copyright 2026 The czsynth Authors
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

#include <stdexcept>
#include <string>

namespace czsynth {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An operator was expected to commute with Z on some qubits but does not.
struct NotBlockDiagonal : Error {
    using Error::Error;
};

/// An iterative matrix factorization failed to reach tolerance.
struct ConvergenceFailure : Error {
    using Error::Error;
};

/// A diagonal operator (or partial determinant) is not a tensor product of one-qubit diagonals.
struct NotSeparable : Error {
    using Error::Error;
};

/// A diagonal operator has a (numerically) zero entry where a quotient is required.
struct ZeroEntry : Error {
    using Error::Error;
};

/// A named builtin does not exist.
struct UnknownName : Error {
    using Error::Error;
};

/// Malformed text or JSON input. `line` is 1-based, or 0 when not applicable.
struct ParseError : Error {
    int line;
    ParseError(const std::string &msg, int line_number = 0)
        : Error(line_number > 0 ? "line " + std::to_string(line_number) + ": " + msg : msg), line(line_number) {
    }
};

}  // namespace czsynth
