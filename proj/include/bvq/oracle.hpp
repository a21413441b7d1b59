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

// Reference integrator for x' = (A^(N) + u B^(N)) x used to cross-check the
// exponential propagator. Classical RK4, no renormalisation.

#pragma once

#include "bvq/control_signal.hpp"
#include "bvq/operator_model.hpp"

namespace bvq {

// Each piece is split into ceil(length / dt_fine) equal RK4 steps, so pieces
// need not be multiples of dt_fine.
State oracle_integrate(const OperatorTriple& triple, int n, const ControlSignal& signal,
                       const State& psi0, double dt_fine);

}  // namespace bvq
