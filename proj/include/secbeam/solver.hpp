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
#include <optional>
#include <string>
#include <vector>

#include "secbeam/secrecy.hpp"

namespace secbeam {

/*!
 * Step sizes and stopping parameters of the projected primal-dual loop.
 *
 * The defaults are tuned for desk-scale scenarios (a handful of beams and
 * locations) and are deliberately small: the active worst-case location can
 * change between iterations, and large steps make the iterates thrash.
 */
struct SolverConfig {
    double eta_t = 1e-2;      // time-fraction step size
    double eta_p = 1e-2;      // power step size
    double eta_lambda = 1e-1; // time-budget multiplier step size
    double eta_mu = 1e-1;     // power-budget multiplier step size

    double epsilon_bits = 1e-6;   // stop when the windowed improvement in c drops below this
    std::size_t max_iters = 500000;
    // The fixed-step iteration orbits the optimum rather than landing on it.
    // Block averages of the orbit (block = stop_window/2) are scored alongside
    // the raw iterates, and improvement is judged across this window. It spans
    // many orbit cycles; short windows mistake mid-run plateaus for the end.
    std::size_t stop_window = 20000;
    double feasibility_tol = 1e-6;
    bool repair_on_exit = true;   // rescale the reported point onto the budgets
    bool record_trace = false;    // keep a per-iteration history in the report

    double init_lambda = 0.0; // dual warm starts, for annealed re-solves
    double init_mu = 0.0;

    void validate() const; // throws std::invalid_argument
};

/// Multipliers of the two budget constraints plus the location currently
/// treated as the binding worst case. Kept nonnegative by projection.
struct DualState {
    double lambda = 0.0;      // time budget
    double mu = 0.0;          // power budget, 1/W scale
    std::size_t active_j = 0; // argmin_j f_j at the last evaluation
};

/*!
 * First-order optimality diagnostics at a point (allocation, lambda, mu).
 *
 * Stationarity is measured with location weights nu on the simplex chosen to
 * minimize the residual; when the worst-case location is uniquely binding
 * this reduces to putting all weight on it, and when several locations are
 * simultaneously binding (the typical situation at an equalized optimum) the
 * weight splits. Misplaced weight is penalized through the nu * (f_j - c)
 * slackness products, so the fit cannot hide a genuinely non-stationary point.
 */
struct KktResiduals {
    double stationarity = 0.0;       // max over supported coordinates, nat scale
    double primal_feasibility = 0.0; // max budget/negativity violation
    double dual_feasibility = 0.0;   // max negative multiplier magnitude
    double slackness = 0.0;          // max complementary-slackness product
    std::vector<double> nu;          // fitted location weights (sums to 1)

    double max_residual() const;
};

struct TracePoint {
    std::size_t iter = 0;
    double c_bits = 0.0;      // worst-case value at the raw iterate
    double best_bits = 0.0;   // incumbent feasible value so far
    double lambda = 0.0;
    double mu = 0.0;
    std::size_t active_j = 0;
};

/// Result of a solve or baseline evaluation. `allocation` always satisfies
/// the budgets at feasibility_tol; `secrecy_bits` is its worst-case value.
struct SolveReport {
    Allocation allocation;
    double secrecy_bits = 0.0;
    DualState dual;
    std::size_t iterations = 0;
    bool converged = false;
    KktResiduals kkt;
    std::vector<TracePoint> trace; // empty unless record_trace was set
    std::string note;              // diagnostic, e.g. degenerate zero objective
};

/*!
 * One projected gradient ascent step on (p, t) at the active location j*,
 * using the pre-step values of both variables (parallel update):
 *
 *   p[l] <- max(0, p[l] + eta_p * (g_l - mu) * t[l])
 *   t[l] <- max(0, t[l] + eta_t * (q_l - lambda - mu * p[l]))
 *
 * where, for beams secure toward j*, g_l is the derivative of the log term
 * and q_l its value (natural log); both are zero for beams that are not.
 */
Allocation primal_step(const Scenario& scenario, const Allocation& alloc,
                       const DualState& dual, const SolverConfig& config);

/// Projected subgradient ascent on the multipliers from the budget residuals:
/// lambda <- max(0, lambda + eta_lambda*(sum t - 1)), and likewise mu with
/// sum p*t - P_tx.
DualState dual_step(const Scenario& scenario, const Allocation& alloc,
                    const DualState& dual, const SolverConfig& config);

/// Joint time and power allocation via the full primal-dual loop.
/// `init` must be feasible when given; defaults to the uniform baseline point.
SolveReport solve_joint(const Scenario& scenario, const SolverConfig& config,
                        const std::optional<Allocation>& init = std::nullopt);

/// Same loop with powers frozen at `fixed_p` (every beam at P_tx when empty).
SolveReport solve_time_only(const Scenario& scenario, const SolverConfig& config,
                            const std::vector<double>& fixed_p = {});

/// Same loop with time fractions frozen at `fixed_t` (uniform 1/L when empty).
SolveReport solve_power_only(const Scenario& scenario, const SolverConfig& config,
                             const std::vector<double>& fixed_t = {});

/// t = 1/L and p = P_tx on every beam; the power budget is tight.
SolveReport baseline_uniform(const Scenario& scenario);

/// All time and the whole budget on one beam.
SolveReport baseline_los_only(const Scenario& scenario, std::size_t los_index);

/// KKT diagnostics at an arbitrary point; see KktResiduals.
KktResiduals kkt_residuals(const Scenario& scenario, const Allocation& alloc,
                           const DualState& dual);

} // namespace secbeam
