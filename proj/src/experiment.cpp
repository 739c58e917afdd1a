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

#include "secbeam/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "secbeam/errors.hpp"
#include "parse_util.hpp"

namespace secbeam {

const char* scheme_name(Scheme s) {
    switch (s) {
    case Scheme::los_only:
        return "los_only";
    case Scheme::uniform:
        return "uniform";
    case Scheme::power_only:
        return "power_only";
    case Scheme::time_only:
        return "time_only";
    case Scheme::joint:
        return "joint";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "los_only")
        return Scheme::los_only;
    if (name == "uniform")
        return Scheme::uniform;
    if (name == "power_only")
        return Scheme::power_only;
    if (name == "time_only")
        return Scheme::time_only;
    if (name == "joint")
        return Scheme::joint;
    throw std::invalid_argument("unknown scheme '" + name +
                                "' (expected los_only, uniform, power_only, time_only or joint)");
}

void ExperimentSpec::validate() const {
    scenario.validate();
    if (schemes.empty())
        throw std::invalid_argument("experiment: needs at least one scheme");
    for (std::size_t i = 0; i < schemes.size(); ++i)
        for (std::size_t k = i + 1; k < schemes.size(); ++k)
            if (schemes[i] == schemes[k])
                throw std::invalid_argument("experiment: scheme '" +
                                            std::string(scheme_name(schemes[i])) +
                                            "' listed twice");
    if (sweep == SweepKind::none) {
        if (!sweep_values.empty())
            throw std::invalid_argument("experiment: sweep values given without a sweep kind");
    } else {
        if (sweep_values.empty())
            throw std::invalid_argument("experiment: sweep needs at least one value");
        for (std::size_t i = 0; i + 1 < sweep_values.size(); ++i)
            if (!(sweep_values[i] < sweep_values[i + 1]))
                throw std::invalid_argument("experiment: sweep values must be strictly increasing");
        for (double v : sweep_values)
            if (!std::isfinite(v) || v < 0.0)
                throw std::invalid_argument("experiment: sweep values must be finite and >= 0");
        if (sweep == SweepKind::total_power && !(sweep_values.front() > 0.0))
            throw std::invalid_argument("experiment: total power values must be positive");
    }
    if (los_index >= scenario.n_beams())
        throw std::invalid_argument("experiment: los beam index out of range");
    solver.validate();
    oracle_grid.validate();
    if (oracle_check && scenario.n_beams() > 3)
        throw std::invalid_argument("experiment: oracle check supports at most 3 beams");
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

SolveReport fixed_point_report(const Scenario& scenario, Allocation alloc) {
    SolveReport report;
    auto eval = evaluate(scenario, alloc);
    report.allocation = std::move(alloc);
    report.secrecy_bits = eval.worst_bits;
    report.dual.active_j = eval.worst_index;
    report.converged = true;
    report.kkt = kkt_residuals(scenario, report.allocation, report.dual);
    return report;
}

// Power vector with the LoS beam pinned and the rest chosen so the budget is
// tight under uniform time: p_rest = (L * P_tx - p_los) / (L - 1). Returns an
// empty vector when the pin already exceeds what the budget allows.
std::vector<double> pinned_power_vector(const Scenario& scenario, std::size_t los_index,
                                        double p_los) {
    const std::size_t L = scenario.n_beams();
    std::vector<double> p(L, 0.0);
    if (L == 1) {
        if (p_los > scenario.p_tx_watts * (1.0 + 1e-12))
            return {};
        p[0] = p_los;
        return p;
    }
    double rest = (static_cast<double>(L) * scenario.p_tx_watts - p_los) /
                  static_cast<double>(L - 1);
    if (rest < 0.0)
        return {};
    for (std::size_t l = 0; l < L; ++l)
        p[l] = (l == los_index) ? p_los : rest;
    return p;
}

std::size_t sweep_thread_count(std::size_t n_points) {
    std::size_t n = std::thread::hardware_concurrency();
    if (n == 0)
        n = 1;
    if (const char* env = std::getenv("SECBEAM_THREADS")) {
        char* end = nullptr;
        unsigned long cap = std::strtoul(env, &end, 10);
        if (end != env && cap >= 1)
            n = std::min<std::size_t>(n, cap);
    }
    return std::max<std::size_t>(1, std::min(n, n_points));
}

} // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();

    ExperimentResult result;
    result.n_beams = spec.scenario.n_beams();

    std::vector<double> sweep_values = spec.sweep_values;
    if (spec.sweep == SweepKind::none)
        sweep_values = {spec.scenario.p_tx_watts};

    // Reference solves for los_power sweeps: these do not depend on the
    // pinned value, so they become horizontal rows repeated at every point.
    SolveReport joint_ref, power_ref;
    if (spec.sweep == SweepKind::los_power) {
        for (Scheme s : spec.schemes) {
            if (s == Scheme::joint)
                joint_ref = solve_joint(spec.scenario, spec.solver);
            else if (s == Scheme::power_only)
                power_ref = solve_power_only(spec.scenario, spec.solver);
        }
    }

    // The base-scenario oracle is shared by every los_power point.
    double base_oracle_bits = 0.0;
    if (spec.oracle_check && spec.sweep != SweepKind::total_power)
        base_oracle_bits = grid_search(spec.scenario, spec.oracle_grid).secrecy_bits;

    auto solve_point = [&](double value, std::vector<ExperimentRow>& rows) {
        Scenario point_scenario = spec.scenario;
        if (spec.sweep == SweepKind::total_power)
            point_scenario.p_tx_watts = value;

        double oracle_bits = base_oracle_bits;
        if (spec.oracle_check && spec.sweep == SweepKind::total_power)
            oracle_bits = grid_search(point_scenario, spec.oracle_grid).secrecy_bits;

        for (Scheme scheme : spec.schemes) {
            ExperimentRow row;
            row.sweep_value = value;
            row.scheme = scheme;

            try {
                if (spec.sweep == SweepKind::los_power) {
                    switch (scheme) {
                    case Scheme::los_only: {
                        if (value > point_scenario.p_tx_watts * (1.0 + 1e-12)) {
                            row.status = "infeasible_pin";
                            break;
                        }
                        Allocation alloc;
                        alloc.t.assign(result.n_beams, 0.0);
                        alloc.p.assign(result.n_beams, 0.0);
                        alloc.t[spec.los_index] = 1.0;
                        alloc.p[spec.los_index] = value;
                        row.report = fixed_point_report(point_scenario, std::move(alloc));
                        row.has_result = true;
                        break;
                    }
                    case Scheme::uniform: {
                        auto p = pinned_power_vector(point_scenario, spec.los_index, value);
                        if (p.empty()) {
                            row.status = "infeasible_pin";
                            break;
                        }
                        Allocation alloc;
                        alloc.t.assign(result.n_beams,
                                       1.0 / static_cast<double>(result.n_beams));
                        alloc.p = std::move(p);
                        row.report = fixed_point_report(point_scenario, std::move(alloc));
                        row.has_result = true;
                        break;
                    }
                    case Scheme::time_only: {
                        auto p = pinned_power_vector(point_scenario, spec.los_index, value);
                        if (p.empty()) {
                            row.status = "infeasible_pin";
                            break;
                        }
                        row.report = solve_time_only(point_scenario, spec.solver, p);
                        row.has_result = true;
                        break;
                    }
                    case Scheme::power_only:
                        row.report = power_ref; // pinned power does not apply
                        row.has_result = true;
                        break;
                    case Scheme::joint:
                        row.report = joint_ref;
                        row.has_result = true;
                        break;
                    }
                } else {
                    switch (scheme) {
                    case Scheme::los_only:
                        row.report = baseline_los_only(point_scenario, spec.los_index);
                        break;
                    case Scheme::uniform:
                        row.report = baseline_uniform(point_scenario);
                        break;
                    case Scheme::power_only:
                        row.report = solve_power_only(point_scenario, spec.solver);
                        break;
                    case Scheme::time_only:
                        row.report = solve_time_only(point_scenario, spec.solver);
                        break;
                    case Scheme::joint:
                        row.report = solve_joint(point_scenario, spec.solver);
                        break;
                    }
                    row.has_result = true;
                }
            } catch (const std::exception&) {
                row.status = "error";
                row.has_result = false;
            }

            if (row.has_result && spec.oracle_check) {
                row.has_oracle_gap = true;
                if (oracle_bits <= 1e-12)
                    row.oracle_gap = oracle_bits - row.report.secrecy_bits;
                else
                    row.oracle_gap = (oracle_bits - row.report.secrecy_bits) / oracle_bits;
            }

            rows.push_back(std::move(row));
        }
    };

    // Sweep points are independent; run them on a small pool and stitch the
    // rows back together in sweep order so the output is deterministic.
    std::vector<std::vector<ExperimentRow>> per_point(sweep_values.size());
    std::size_t n_threads = sweep_thread_count(sweep_values.size());
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < sweep_values.size(); ++i)
            solve_point(sweep_values[i], per_point[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= sweep_values.size())
                    return;
                solve_point(sweep_values[i], per_point[i]);
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    for (auto& rows : per_point)
        for (auto& row : rows) {
            if (row.has_result && !row.report.converged)
                result.all_converged = false;
            result.rows.push_back(std::move(row));
        }

    // A growing budget can never hurt the optimum; flag a joint column that
    // decreases beyond solver noise.
    if (spec.sweep == SweepKind::total_power) {
        double prev = 0.0;
        bool have_prev = false;
        for (const auto& row : result.rows) {
            if (row.scheme != Scheme::joint || !row.has_result)
                continue;
            if (have_prev && row.report.secrecy_bits < prev - 1e-4)
                result.warnings.push_back(
                    "joint secrecy decreased from " + fmt(prev) + " to " +
                    fmt(row.report.secrecy_bits) + " bits at budget " + fmt(row.sweep_value) +
                    " W");
            prev = row.report.secrecy_bits;
            have_prev = true;
        }
    }
    return result;
}

std::string to_csv(const ExperimentResult& result) {
    std::ostringstream out;
    out << "sweep_value,scheme,c_bits";
    for (std::size_t l = 1; l <= result.n_beams; ++l)
        out << ",t_" << l;
    for (std::size_t l = 1; l <= result.n_beams; ++l)
        out << ",p_" << l;
    out << ",iterations,converged,oracle_gap,status\n";

    for (const auto& row : result.rows) {
        std::vector<std::string> fields;
        fields.push_back(fmt(row.sweep_value));
        fields.push_back(scheme_name(row.scheme));
        if (row.has_result) {
            fields.push_back(fmt(row.report.secrecy_bits));
            for (double v : row.report.allocation.t)
                fields.push_back(fmt(v));
            for (double v : row.report.allocation.p)
                fields.push_back(fmt(v));
            fields.push_back(std::to_string(row.report.iterations));
            fields.push_back(row.report.converged ? "1" : "0");
            fields.push_back(row.has_oracle_gap ? fmt(row.oracle_gap) : "");
        } else {
            for (std::size_t i = 0; i < 2 * result.n_beams + 4; ++i)
                fields.emplace_back();
        }
        fields.push_back(row.status);
        for (std::size_t i = 0; i < fields.size(); ++i)
            out << (i ? "," : "") << fields[i];
        out << '\n';
    }
    return out.str();
}

namespace {

struct ScenarioBuilder {
    std::string origin;
    bool inline_form = false;
    bool ckm_form = false;
    bool have_alpha = false;
    bool have_p_tx = false;
    std::vector<double> alpha;
    std::vector<std::vector<double>> beta;
    std::vector<std::string> beam_labels;
    std::vector<std::string> location_labels;
    double p_tx = 0.0;
    std::string ckm_path;
    std::vector<double> rx_gains;
    bool have_rx_gains = false;
    std::size_t alpha_line = 0;
};

} // namespace

Scenario load_scenario(std::istream& in, const std::string& origin) {
    using detail::parse_double;
    using detail::tokenize;

    ScenarioBuilder b;
    b.origin = origin;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = tokenize(line);
        if (tokens.empty())
            continue;
        const std::string& key = tokens[0];

        if (key == "p_tx_watts") {
            if (b.have_p_tx)
                throw ParseError(origin, lineno, "duplicate p_tx_watts");
            if (tokens.size() != 2)
                throw ParseError(origin, lineno, "p_tx_watts takes exactly one value");
            b.p_tx = parse_double(tokens[1], origin, lineno, "p_tx_watts");
            if (!(b.p_tx > 0.0))
                throw ParseError(origin, lineno, "p_tx_watts must be positive");
            b.have_p_tx = true;
        } else if (key == "alpha_per_watt") {
            if (b.have_alpha)
                throw ParseError(origin, lineno, "duplicate alpha_per_watt");
            if (tokens.size() < 2)
                throw ParseError(origin, lineno, "alpha_per_watt needs at least one value");
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                double v = parse_double(tokens[i], origin, lineno, "alpha");
                if (v < 0.0)
                    throw ParseError(origin, lineno, "alpha values must be >= 0");
                b.alpha.push_back(v);
            }
            b.have_alpha = true;
            b.inline_form = true;
            b.alpha_line = lineno;
        } else if (key == "beta_per_watt") {
            if (!b.have_alpha)
                throw ParseError(origin, lineno,
                                 "alpha_per_watt must come before the beta rows");
            if (tokens.size() - 1 != b.alpha.size())
                throw ParseError(origin, lineno,
                                 "beta row " + std::to_string(b.beta.size() + 1) + " has " +
                                     std::to_string(tokens.size() - 1) +
                                     " entries but alpha has " + std::to_string(b.alpha.size()) +
                                     " beams");
            std::vector<double> row;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                double v = parse_double(tokens[i], origin, lineno, "beta");
                if (v < 0.0)
                    throw ParseError(origin, lineno, "beta values must be >= 0");
                row.push_back(v);
            }
            b.beta.push_back(std::move(row));
            b.inline_form = true;
        } else if (key == "beam_labels") {
            b.beam_labels.assign(tokens.begin() + 1, tokens.end());
        } else if (key == "location_labels") {
            b.location_labels.assign(tokens.begin() + 1, tokens.end());
        } else if (key == "ckm_file") {
            if (tokens.size() != 2)
                throw ParseError(origin, lineno, "ckm_file takes exactly one path");
            b.ckm_path = tokens[1];
            b.ckm_form = true;
        } else if (key == "rx_gains_watts") {
            if (tokens.size() < 2)
                throw ParseError(origin, lineno, "rx_gains_watts needs at least one value");
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                double v = parse_double(tokens[i], origin, lineno, "rx gain");
                if (v < 0.0)
                    throw ParseError(origin, lineno, "rx gains must be >= 0");
                b.rx_gains.push_back(v);
            }
            b.have_rx_gains = true;
            b.ckm_form = true;
        } else {
            throw ParseError(origin, lineno, "unknown scenario entry '" + key + "'");
        }
    }

    if (b.inline_form && b.ckm_form)
        throw ParseError(origin, 0, "file mixes inline (alpha/beta) and CKM-backed forms");
    if (!b.have_p_tx)
        throw ParseError(origin, 0, "missing p_tx_watts");

    if (b.ckm_form) {
        if (b.ckm_path.empty())
            throw ParseError(origin, 0, "CKM-backed scenario is missing ckm_file");
        if (!b.have_rx_gains)
            throw ParseError(origin, 0, "CKM-backed scenario is missing rx_gains_watts");
        Ckm ckm = load_ckm_file(detail::join_path(detail::dir_of(origin), b.ckm_path));
        if (b.rx_gains.size() != ckm.n_beams())
            throw ParseError(origin, 0,
                             "rx_gains_watts has " + std::to_string(b.rx_gains.size()) +
                                 " entries but the CKM has " + std::to_string(ckm.n_beams()) +
                                 " beams");
        Scenario sc = build_scenario(ckm, b.rx_gains, b.p_tx);
        if (!b.beam_labels.empty())
            sc.beam_labels = b.beam_labels;
        if (!b.location_labels.empty())
            sc.location_labels = b.location_labels;
        sc.validate();
        return sc;
    }

    if (!b.have_alpha)
        throw ParseError(origin, 0, "missing alpha_per_watt (or ckm_file for the CKM form)");
    if (b.beta.empty())
        throw ParseError(origin, 0, "missing beta_per_watt rows");

    Scenario sc;
    sc.alpha = std::move(b.alpha);
    sc.beta = std::move(b.beta);
    sc.p_tx_watts = b.p_tx;
    sc.beam_labels = std::move(b.beam_labels);
    sc.location_labels = std::move(b.location_labels);
    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(origin, 0, e.what());
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path, 0, "cannot open file");
    return load_scenario(in, path);
}

ExperimentSpec load_experiment(std::istream& in, const std::string& origin) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_index;
    using detail::tokenize;

    ExperimentSpec spec;
    bool have_scenario = false, have_schemes = false, have_sweep = false;
    bool have_los = false;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = tokenize(line);
        if (tokens.empty())
            continue;
        const std::string& key = tokens[0];

        auto want_values = [&](std::size_t at_least) {
            if (tokens.size() < at_least + 1)
                throw ParseError(origin, lineno, key + " needs at least " +
                                                     std::to_string(at_least) + " value(s)");
        };

        if (key == "scenario") {
            want_values(1);
            if (have_scenario)
                throw ParseError(origin, lineno, "duplicate scenario");
            spec.scenario = load_scenario_file(
                detail::join_path(detail::dir_of(origin), tokens[1]));
            have_scenario = true;
        } else if (key == "schemes") {
            want_values(1);
            if (have_schemes)
                throw ParseError(origin, lineno, "duplicate schemes");
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                try {
                    spec.schemes.push_back(scheme_from_name(tokens[i]));
                } catch (const std::invalid_argument& e) {
                    throw ParseError(origin, lineno, e.what());
                }
            }
            have_schemes = true;
        } else if (key == "sweep_total_power_watts" || key == "sweep_los_power_watts") {
            want_values(1);
            if (have_sweep)
                throw ParseError(origin, lineno, "duplicate sweep");
            spec.sweep = (key == "sweep_total_power_watts") ? SweepKind::total_power
                                                            : SweepKind::los_power;
            for (std::size_t i = 1; i < tokens.size(); ++i)
                spec.sweep_values.push_back(
                    parse_double(tokens[i], origin, lineno, "sweep value"));
            have_sweep = true;
        } else if (key == "output") {
            want_values(1);
            spec.output_path = tokens[1];
        } else if (key == "los_index") {
            want_values(1);
            spec.los_index = parse_index(tokens[1], origin, lineno, "los_index") - 1;
            have_los = true;
        } else if (key == "oracle_check") {
            want_values(1);
            spec.oracle_check = parse_bool(tokens[1], origin, lineno, "oracle_check");
        } else if (key == "oracle.t_steps") {
            want_values(1);
            spec.oracle_grid.t_steps = parse_index(tokens[1], origin, lineno, key);
        } else if (key == "oracle.p_steps") {
            want_values(1);
            spec.oracle_grid.p_steps = parse_index(tokens[1], origin, lineno, key);
        } else if (key == "oracle.refine_levels") {
            want_values(1);
            spec.oracle_grid.refine_levels =
                static_cast<std::size_t>(parse_double(tokens[1], origin, lineno, key));
        } else if (key == "solver.eta_t") {
            want_values(1);
            spec.solver.eta_t = parse_double(tokens[1], origin, lineno, key);
        } else if (key == "solver.eta_p") {
            want_values(1);
            spec.solver.eta_p = parse_double(tokens[1], origin, lineno, key);
        } else if (key == "solver.eta_lambda") {
            want_values(1);
            spec.solver.eta_lambda = parse_double(tokens[1], origin, lineno, key);
        } else if (key == "solver.eta_mu") {
            want_values(1);
            spec.solver.eta_mu = parse_double(tokens[1], origin, lineno, key);
        } else if (key == "solver.epsilon_bits") {
            want_values(1);
            spec.solver.epsilon_bits = parse_double(tokens[1], origin, lineno, key);
        } else if (key == "solver.max_iters") {
            want_values(1);
            spec.solver.max_iters = parse_index(tokens[1], origin, lineno, key);
        } else if (key == "solver.stop_window") {
            want_values(1);
            spec.solver.stop_window = parse_index(tokens[1], origin, lineno, key);
        } else if (key == "solver.feasibility_tol") {
            want_values(1);
            spec.solver.feasibility_tol = parse_double(tokens[1], origin, lineno, key);
        } else if (key == "solver.repair_on_exit") {
            want_values(1);
            spec.solver.repair_on_exit = parse_bool(tokens[1], origin, lineno, key);
        } else if (key == "solver.init_lambda") {
            want_values(1);
            spec.solver.init_lambda = parse_double(tokens[1], origin, lineno, key);
        } else if (key == "solver.init_mu") {
            want_values(1);
            spec.solver.init_mu = parse_double(tokens[1], origin, lineno, key);
        } else {
            throw ParseError(origin, lineno, "unknown experiment entry '" + key + "'");
        }
    }

    if (!have_scenario)
        throw ParseError(origin, 0, "missing scenario");
    if (!have_schemes)
        spec.schemes = {Scheme::los_only, Scheme::uniform, Scheme::power_only,
                        Scheme::time_only, Scheme::joint};
    (void)have_los;

    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(origin, 0, e.what());
    }
    return spec;
}

ExperimentSpec load_experiment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path, 0, "cannot open file");
    return load_experiment(in, path);
}

} // namespace secbeam
