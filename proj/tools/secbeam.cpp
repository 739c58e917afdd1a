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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "secbeam/errors.hpp"
#include "secbeam/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void print_report(const secbeam::Scenario& scenario, const secbeam::SolveReport& report,
                  const std::string& scheme) {
    std::cout << "scheme:      " << scheme << '\n';
    std::cout << "secrecy:     " << fmt(report.secrecy_bits) << " bits\n";
    std::cout << "time:       ";
    for (double v : report.allocation.t)
        std::cout << ' ' << fmt(v);
    std::cout << "  (sum " << fmt(report.allocation.time_used()) << ")\n";
    std::cout << "power [W]:  ";
    for (double v : report.allocation.p)
        std::cout << ' ' << fmt(v);
    std::cout << "  (used " << fmt(report.allocation.power_used()) << " of "
              << fmt(scenario.p_tx_watts) << ")\n";
    std::cout << "iterations:  " << report.iterations
              << (report.converged ? "  (converged)" : "  (iteration cap reached)") << '\n';
    std::cout << "duals:       lambda " << fmt(report.dual.lambda) << ", mu "
              << fmt(report.dual.mu) << ", worst location " << (report.dual.active_j + 1)
              << '\n';
    std::cout << "kkt max:     " << fmt(report.kkt.max_residual()) << "  (stationarity "
              << fmt(report.kkt.stationarity) << ", slackness " << fmt(report.kkt.slackness)
              << ")\n";
    if (!report.note.empty())
        std::cout << "note:        " << report.note << '\n';
}

int run_command(const std::string& spec_path, const std::string& output_override) {
    auto spec = secbeam::load_experiment_file(spec_path);
    if (!output_override.empty())
        spec.output_path = output_override;
    if (spec.output_path.empty())
        throw std::invalid_argument("no output path: set 'output' in the experiment file "
                                    "or pass --output");

    auto result = secbeam::run_experiment(spec);
    std::ofstream out(spec.output_path, std::ios::binary);
    if (!out)
        throw std::invalid_argument("cannot write output file '" + spec.output_path + "'");
    out << secbeam::to_csv(result);
    out.close();

    std::cout << "wrote " << result.rows.size() << " rows to " << spec.output_path << '\n';
    for (const auto& w : result.warnings)
        std::cerr << "warning: " << w << '\n';
    if (!result.all_converged) {
        std::cerr << "warning: at least one row did not converge\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

int solve_command(const std::string& scenario_path, const std::string& scheme_name,
                  std::size_t los_index_1based, bool oracle_check,
                  const secbeam::SolverConfig& config) {
    auto scenario = secbeam::load_scenario_file(scenario_path);
    auto scheme = secbeam::scheme_from_name(scheme_name);

    secbeam::SolveReport report;
    switch (scheme) {
    case secbeam::Scheme::los_only:
        report = secbeam::baseline_los_only(scenario, los_index_1based - 1);
        break;
    case secbeam::Scheme::uniform:
        report = secbeam::baseline_uniform(scenario);
        break;
    case secbeam::Scheme::power_only:
        report = secbeam::solve_power_only(scenario, config);
        break;
    case secbeam::Scheme::time_only:
        report = secbeam::solve_time_only(scenario, config);
        break;
    case secbeam::Scheme::joint:
        report = secbeam::solve_joint(scenario, config);
        break;
    }

    print_report(scenario, report, scheme_name);

    if (oracle_check) {
        secbeam::GridSpec grid;
        auto verdict = secbeam::verify_report(scenario, report, grid, 0.01);
        std::cout << "oracle:      " << fmt(verdict.oracle_bits) << " bits, gap "
                  << fmt(verdict.relative_gap) << (verdict.pass ? "  (ok)" : "  (BELOW ORACLE)")
                  << '\n';
        if (!verdict.pass)
            return kExitNotConverged;
    }
    return report.converged ? kExitOk : kExitNotConverged;
}

int validate_command(const std::string& ckm_path) {
    auto ckm = secbeam::load_ckm_file(ckm_path);
    std::size_t n_samples = 0;
    for (const auto& row : ckm.samples)
        for (const auto& cell : row)
            n_samples += cell.size();
    std::cout << ckm_path << ": ok (" << ckm.n_beams() << " beams, " << ckm.n_locations()
              << " locations, " << n_samples << " samples, reference power "
              << fmt(ckm.p_tx_ref_watts) << " W)\n";

    auto beta = secbeam::worst_case_beta(ckm);
    std::cout << "worst-case normalized gains [1/W], one row per location:\n";
    for (const auto& row : beta) {
        std::cout << " ";
        for (double v : row)
            std::cout << ' ' << fmt(v);
        std::cout << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"secbeam - worst-case secrecy rate allocation across mmWave beams"};
    app.require_subcommand(1);

    std::string run_spec, run_output;
    auto* run = app.add_subcommand("run", "run an experiment file and write its CSV table");
    run->add_option("spec", run_spec, "experiment file")->required();
    run->add_option("--output", run_output, "override the output path from the file");

    std::string solve_scenario, solve_scheme = "joint";
    std::size_t solve_los = 1;
    bool solve_oracle = false;
    secbeam::SolverConfig solve_config;
    auto* solve = app.add_subcommand("solve", "solve a single scenario");
    solve->add_option("scenario", solve_scenario, "scenario file")->required();
    solve->add_option("--scheme", solve_scheme,
                      "los_only, uniform, power_only, time_only or joint");
    solve->add_option("--los-index", solve_los, "1-based LoS beam index (los_only scheme)");
    solve->add_flag("--oracle-check", solve_oracle,
                    "compare the result against the grid-search oracle");
    solve->add_option("--max-iters", solve_config.max_iters, "iteration cap");
    solve->add_option("--eta-t", solve_config.eta_t, "time step size");
    solve->add_option("--eta-p", solve_config.eta_p, "power step size");
    solve->add_option("--eta-lambda", solve_config.eta_lambda, "time multiplier step size");
    solve->add_option("--eta-mu", solve_config.eta_mu, "power multiplier step size");
    solve->add_option("--epsilon", solve_config.epsilon_bits, "stopping tolerance in bits");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a CKM file and print its summary");
    validate->add_option("ckm", validate_path, "CKM file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return run_command(run_spec, run_output);
        if (solve->parsed())
            return solve_command(solve_scenario, solve_scheme, solve_los, solve_oracle,
                                 solve_config);
        if (validate->parsed())
            return validate_command(validate_path);
    } catch (const secbeam::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}
