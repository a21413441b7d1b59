// Copyright 2026 The bvq Authors
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

#include <stdexcept>
#include <string>

namespace bvq {

// Malformed input: bad file, inconsistent configuration, impossible sizes.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A mathematical hypothesis of the requested computation does not hold.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// |u| reached the admissible amplitude 1/||B||_A.
class AmplitudeError : public PreconditionError {
public:
    AmplitudeError(const std::string& what, double limit, double peak)
        : PreconditionError(what), limit_(limit), peak_(peak) {}
    double limit() const noexcept { return limit_; }
    double peak() const noexcept { return peak_; }

private:
    double limit_;
    double peak_;
};

// Transition fails the non-degeneracy or resonance hypotheses of the averaging result.
class DegenerateTransitionError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// Eigendecomposition of i(A + uB) failed or the input was not Hermitian.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace bvq
