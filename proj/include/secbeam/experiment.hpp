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
#include <iosfwd>
#include <string>
#include <vector>

#include "secbeam/oracle.hpp"
#include "secbeam/solver.hpp"

namespace secbeam {

enum class Scheme { los_only, uniform, power_only, time_only, joint };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name); // throws std::invalid_argument

enum class SweepKind { none, los_power, total_power };

/*!
 * A batch run: one scenario, a set of allocation schemes, and optionally a
 * sweep over either the power pinned on the LoS beam or the total budget.
 * Parsed from .experiment files (see docs/formats.md).
 */
struct ExperimentSpec {
    Scenario scenario;
    std::vector<Scheme> schemes;
    SweepKind sweep = SweepKind::none;
    std::vector<double> sweep_values; // strictly increasing, non-empty for a sweep
    std::string output_path;          // CSV destination
    std::size_t los_index = 0;        // beam treated as the LoS path
    SolverConfig solver;
    bool oracle_check = false;
    GridSpec oracle_grid;

    void validate() const; // throws std::invalid_argument
};

/// One CSV row. `status` is "ok" unless the row could not be solved (for
/// example a pinned power that already exceeds the budget).
struct ExperimentRow {
    double sweep_value = 0.0;
    Scheme scheme = Scheme::joint;
    std::string status = "ok";
    bool has_result = false;
    SolveReport report;
    bool has_oracle_gap = false;
    double oracle_gap = 0.0;
};

struct ExperimentResult {
    std::size_t n_beams = 0;
    std::vector<ExperimentRow> rows;
    bool all_converged = true;
    std::vector<std::string> warnings; // post-run consistency checks
};

/// Runs every (sweep value, scheme) combination in deterministic order.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Renders the result as CSV: header plus one row per (sweep value, scheme),
/// floats at 12 significant digits. Byte-stable for a fixed spec.
std::string to_csv(const ExperimentResult& result);

/// Loads either an inline scenario file or a CKM-backed one (ckm_file +
/// rx_gains_watts). Throws ParseError with file/line on malformed input.
Scenario load_scenario_file(const std::string& path);
Scenario load_scenario(std::istream& in, const std::string& origin);

/// Loads an .experiment file; `scenario` paths are resolved relative to it.
ExperimentSpec load_experiment_file(const std::string& path);
ExperimentSpec load_experiment(std::istream& in, const std::string& origin);

} // namespace secbeam
