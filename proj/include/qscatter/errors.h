// Copyright 2026 The qscatter Authors
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

#ifndef QSCATTER_ERRORS_H
#define QSCATTER_ERRORS_H

#include <stdexcept>
#include <string>

namespace qscatter {

// Invalid inputs (bad directions, out-of-range Bloch vectors, non-positive
// wave numbers) are reported with std::invalid_argument. The two types below
// cover failures that are not plain argument errors.

/// A tomographic scheme whose 3x3 matrix is singular or too badly conditioned
/// to invert.
class DegenerateSchemeError : public std::runtime_error {
   public:
    explicit DegenerateSchemeError(const std::string &what) : std::runtime_error("scheme degenerate: " + what) {
    }
};

/// A 1D or 2D search whose grid minimum sits on the boundary of the domain.
class NoInteriorMinimumError : public std::runtime_error {
   public:
    explicit NoInteriorMinimumError(const std::string &what) : std::runtime_error("no interior minimum: " + what) {
    }
};

}  // namespace qscatter

#endif
