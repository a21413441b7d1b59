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

#include "bvq/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace bvq {

State oracle_integrate(const OperatorTriple& triple, int n, const ControlSignal& signal,
                       const State& psi0, double dt_fine) {
    if (!(dt_fine > 0.0)) throw std::invalid_argument("oracle_integrate: dt_fine must be > 0");
    if (psi0.size() != n) throw std::invalid_argument("oracle_integrate: dimension mismatch");
    const CompressedPair pair = compress(triple, n);
    State x = psi0;
    State k1(n), k2(n), k3(n), k4(n);
    for (std::size_t i = 0; i < signal.pieces(); ++i) {
        const Eigen::MatrixXcd m = pair.a_matrix + signal.values()[i] * pair.b_matrix;
        const double len = signal.piece_length(i);
        const auto substeps = static_cast<long long>(std::ceil(len / dt_fine - 1e-9));
        const double h = len / static_cast<double>(std::max(1LL, substeps));
        for (long long s = 0; s < std::max(1LL, substeps); ++s) {
            k1.noalias() = m * x;
            k2.noalias() = m * (x + 0.5 * h * k1);
            k3.noalias() = m * (x + 0.5 * h * k2);
            k4.noalias() = m * (x + h * k3);
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    return x;
}

}  // namespace bvq
