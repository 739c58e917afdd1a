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
#include <string>
#include <vector>

#include "secbeam/ckm.hpp"

namespace secbeam {

/// Per-beam time fractions and transmit powers; the decision variables.
/// Nonnegative by contract. Feasibility against a scenario's budgets is a
/// separate predicate so that transiently infeasible iterates can be scored.
struct Allocation {
    std::vector<double> t; // time fractions, dimensionless
    std::vector<double> p; // powers, watts

    std::size_t size() const { return t.size(); }

    double time_used() const;
    double power_used() const; // sum of p[l] * t[l]
};

/// Secrecy rate toward every candidate location plus the binding worst case.
struct SecrecyEvaluation {
    std::vector<double> f_bits;   // f_j for j = 0..J-1, bits per channel use
    std::size_t worst_index = 0;  // argmin, smallest index on ties
    double worst_bits = 0.0;      // min_j f_j
};

struct ConstraintViolation {
    std::string constraint; // "time_budget", "power_budget", "t[3]", "p[0]"
    double residual;        // positive amount by which the constraint is exceeded
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<ConstraintViolation> violations;
};

/// Index sets of beams that dominate the eavesdropper at each location:
/// sets[j] = { l : alpha[l] >= beta[j][l] }. Ties are included; their rate
/// contribution is identically zero.
std::vector<std::vector<std::size_t>> secure_sets(const Scenario& scenario);

/// Secrecy rate of the sum-over-secure-beams objective toward location j:
///   sum_{l in sets[j]} t[l] * log2((1 + p[l]*alpha[l]) / (1 + p[l]*beta[j][l]))
/// Defined for any nonnegative allocation; every summand is >= 0.
double eval_f(const Scenario& scenario, const Allocation& alloc, std::size_t j);

/// Single log term of the objective for one beam/location pair, in bits.
/// Exposed so that exhaustive-search code can tabulate it without going
/// through full evaluations.
double secrecy_log_term_bits(double alpha, double beta, double power_watts);

/// f_j for every location plus worst-case index and value.
SecrecyEvaluation evaluate(const Scenario& scenario, const Allocation& alloc);

/// Checks sum(t) <= 1 + tol, sum(p*t) <= p_tx * (1 + tol) and entrywise
/// nonnegativity down to -tol. Violations are reported with their residuals.
FeasibilityReport is_feasible(const Scenario& scenario, const Allocation& alloc,
                              double tol);

} // namespace secbeam
