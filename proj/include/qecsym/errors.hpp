// Copyright 2026 The qecsym Authors
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

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qecsym {

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedSymmetryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidRecoverySetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SymmetryRejectedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const char* version_string() { return "0.1.0"; }

// Cap on dense (2^n-dimensional) operator work; QECSYM_DENSE_LIMIT overrides.
inline int dense_qubit_limit() {
    if (const char* env = std::getenv("QECSYM_DENSE_LIMIT")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 10;
}

inline void require_dense(int n, const std::string& what) {
    if (n > dense_qubit_limit())
        throw CapacityError(what + ": " + std::to_string(n) +
                            " qubits exceeds the dense limit of " +
                            std::to_string(dense_qubit_limit()) +
                            " (set QECSYM_DENSE_LIMIT to raise it)");
}

}  // namespace qecsym
