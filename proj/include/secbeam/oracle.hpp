// SPDX-License-Identifier: Apache-2.0
//
// secbeam - worst-case secrecy rate allocation across mmWave beams
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>

#include "secbeam/secrecy.hpp"
#include "secbeam/solver.hpp"

namespace secbeam {

/// Resolution of the exhaustive search. Refinement re-grids a box around the
/// incumbent, shrinking every dimension 5x per level.
struct GridSpec {
    std::size_t t_steps = 101;
    std::size_t p_steps = 101;
    std::size_t refine_levels = 3;

    void validate() const; // throws std::invalid_argument
};

struct OracleResult {
    Allocation allocation;
    double secrecy_bits = 0.0;
    std::size_t points_evaluated = 0;
};

struct VerifyResult {
    bool pass = false;
    double relative_gap = 0.0; // (c_oracle - c_report) / c_oracle; negative when the report wins
    double oracle_bits = 0.0;
};

/*!
 * Dense grid search over feasible allocations; the independent ground truth
 * used to validate the solver. Time fractions are enumerated on the simplex
 * grid {sum t <= 1}; powers per beam on [0, P_max] where
 * P_max = P_tx / max(1/(t_steps-1), 1e-3), capped at 1e3 * P_tx, since a
 * beam's power may legitimately exceed P_tx when its time share is small.
 *
 * Only exactly feasible grid points are scored. Restricted to L <= 3 beams;
 * the combinatorics explode beyond that.
 */
OracleResult grid_search(const Scenario& scenario, const GridSpec& spec);

/// Accepts a solver report when its value reaches the oracle optimum up to
/// `rel_tol` relative slack. The oracle value is a lower bound on the true
/// optimum, so a report may legitimately come out above it.
VerifyResult verify_report(const Scenario& scenario, const SolveReport& report,
                           const GridSpec& spec, double rel_tol);

} // namespace secbeam
