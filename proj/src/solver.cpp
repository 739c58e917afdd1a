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

#include "secbeam/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace secbeam {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// Natural-log value and derivative of one beam's secrecy term toward the
// active location; both vanish for beams outside the secure set.
struct BeamGradient {
    double q = 0.0; // ln((1 + p*alpha)/(1 + p*beta))
    double g = 0.0; // alpha/(1 + p*alpha) - beta/(1 + p*beta)
};

BeamGradient beam_gradient(double alpha, double beta, double power) {
    BeamGradient out;
    if (alpha < beta)
        return out; // not secure toward this location; term is clamped away
    double num = 1.0 + power * alpha;
    double den = 1.0 + power * beta;
    out.q = std::log(num / den);
    out.g = alpha / num - beta / den;
    return out;
}

enum class RepairMode { joint, frozen_p, frozen_t };

// Scales the point onto the budgets without leaving the nonnegative orthant.
// Frozen variables are never touched; their budget share is absorbed by the
// free ones (both budgets are linear in t, so scaling t repairs either).
Allocation repair(const Scenario& scenario, Allocation alloc, RepairMode mode) {
    double time_used = alloc.time_used();
    if (time_used > 1.0) {
        double s = 1.0 / time_used;
        for (double& v : alloc.t)
            v *= s;
    }
    double power_used = alloc.power_used();
    if (power_used > scenario.p_tx_watts) {
        double s = scenario.p_tx_watts / power_used;
        if (mode == RepairMode::frozen_p) {
            for (double& v : alloc.t)
                v *= s;
        } else {
            for (double& v : alloc.p)
                v *= s;
        }
    }
    return alloc;
}

// A location with no strictly secure beam pins min_j f_j to zero for every
// allocation; the loop cannot do anything about it.
bool objective_identically_zero(const Scenario& scenario) {
    for (std::size_t j = 0; j < scenario.n_locations(); ++j) {
        bool has_strict = false;
        for (std::size_t l = 0; l < scenario.n_beams(); ++l)
            if (scenario.alpha[l] > scenario.beta[j][l]) {
                has_strict = true;
                break;
            }
        if (!has_strict)
            return true;
    }
    return false;
}

Allocation uniform_allocation(const Scenario& scenario) {
    std::size_t L = scenario.n_beams();
    Allocation alloc;
    alloc.t.assign(L, 1.0 / static_cast<double>(L));
    alloc.p.assign(L, scenario.p_tx_watts);
    return alloc;
}

SolveReport evaluated_report(const Scenario& scenario, Allocation alloc,
                             std::string note = {}) {
    SolveReport report;
    auto eval = evaluate(scenario, alloc);
    report.allocation = std::move(alloc);
    report.secrecy_bits = eval.worst_bits;
    report.dual.active_j = eval.worst_index;
    report.converged = true;
    report.kkt = kkt_residuals(scenario, report.allocation, report.dual);
    report.note = std::move(note);
    return report;
}

// Shared primal-dual loop. Freezing a variable family is expressed by a zero
// step size; the repair mode keeps the frozen family untouched.
SolveReport run_loop(const Scenario& scenario, const SolverConfig& config,
                     Allocation alloc, double eta_t, double eta_p, RepairMode mode) {
    scenario.validate();
    config.validate();

    if (objective_identically_zero(scenario)) {
        SolveReport report = evaluated_report(
            scenario, repair(scenario, std::move(alloc), mode),
            "degenerate scenario: some location has no strictly secure beam; "
            "the objective is identically zero");
        return report;
    }

    auto feasibility = is_feasible(scenario, alloc, config.feasibility_tol);
    if (!feasibility.feasible)
        throw std::invalid_argument("solver: initial allocation violates '" +
                                    feasibility.violations.front().constraint + "' by " +
                                    std::to_string(feasibility.violations.front().residual));

    SolverConfig step_cfg = config;
    step_cfg.eta_t = eta_t;
    step_cfg.eta_p = eta_p;

    DualState dual;
    dual.lambda = config.init_lambda;
    dual.mu = config.init_mu;
    SolveReport report;

    // Incumbent: best feasible point seen, scored after repair so that the
    // reported value is attained by the reported allocation.
    Allocation best_alloc = repair(scenario, alloc, mode);
    double best_bits = evaluate(scenario, best_alloc).worst_bits;

    const std::size_t window = std::max<std::size_t>(config.stop_window, 2);
    const std::size_t block = std::max<std::size_t>(window / 2, 1);
    std::vector<double> best_history;
    best_history.reserve(config.max_iters + 1);

    // Block averages of the orbiting iterate; the averaged point sits near
    // the orbit's center and keeps improving while the orbit still drifts.
    Allocation avg_sum;
    avg_sum.t.assign(alloc.t.size(), 0.0);
    avg_sum.p.assign(alloc.p.size(), 0.0);
    double lambda_sum = 0.0, mu_sum = 0.0;
    std::size_t avg_count = 0;
    DualState reported_dual = dual;
    bool have_avg_dual = false;

    auto offer = [&](const Allocation& candidate, double bits) {
        if (bits > best_bits) {
            best_bits = bits;
            best_alloc = candidate;
        }
    };

    std::size_t iter = 0;
    bool converged = false;
    for (; iter < config.max_iters; ++iter) {
        auto eval = evaluate(scenario, alloc);
        dual.active_j = eval.worst_index;

        if (config.repair_on_exit) {
            Allocation candidate = repair(scenario, alloc, mode);
            offer(candidate, evaluate(scenario, candidate).worst_bits);
        } else if (is_feasible(scenario, alloc, config.feasibility_tol).feasible) {
            offer(alloc, eval.worst_bits);
        }

        for (std::size_t l = 0; l < alloc.t.size(); ++l) {
            avg_sum.t[l] += alloc.t[l];
            avg_sum.p[l] += alloc.p[l];
        }
        lambda_sum += dual.lambda;
        mu_sum += dual.mu;
        if (++avg_count == block) {
            Allocation averaged = avg_sum;
            for (std::size_t l = 0; l < averaged.t.size(); ++l) {
                averaged.t[l] /= static_cast<double>(block);
                averaged.p[l] /= static_cast<double>(block);
            }
            averaged = repair(scenario, std::move(averaged), mode);
            if (config.repair_on_exit ||
                is_feasible(scenario, averaged, config.feasibility_tol).feasible)
                offer(averaged, evaluate(scenario, averaged).worst_bits);
            reported_dual.lambda = lambda_sum / static_cast<double>(block);
            reported_dual.mu = mu_sum / static_cast<double>(block);
            have_avg_dual = true;
            avg_sum.t.assign(alloc.t.size(), 0.0);
            avg_sum.p.assign(alloc.p.size(), 0.0);
            lambda_sum = mu_sum = 0.0;
            avg_count = 0;
        }

        best_history.push_back(best_bits);

        if (config.record_trace)
            report.trace.push_back({iter, eval.worst_bits, best_bits, dual.lambda,
                                    dual.mu, dual.active_j});

        if (best_history.size() > 2 * window) {
            double improvement = best_bits - best_history[best_history.size() - 1 - window];
            if (improvement < config.epsilon_bits &&
                is_feasible(scenario, alloc, config.feasibility_tol).feasible) {
                converged = true;
                break;
            }
        }

        // Primal first, then duals react to the point just produced.
        alloc = primal_step(scenario, alloc, dual, step_cfg);
        dual = dual_step(scenario, alloc, dual, step_cfg);
    }

    report.allocation = std::move(best_alloc);
    report.secrecy_bits = best_bits;
    if (have_avg_dual) {
        reported_dual.active_j = dual.active_j;
        report.dual = reported_dual;
    } else {
        report.dual = dual;
    }
    report.iterations = iter;
    report.converged = converged;
    report.kkt = kkt_residuals(scenario, report.allocation, report.dual);
    return report;
}

// Euclidean projection onto the probability simplex (Held et al.).
std::vector<double> project_simplex(std::vector<double> v) {
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double cumulative = 0.0;
    double tau = 0.0;
    std::size_t support = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cumulative += sorted[i];
        double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (sorted[i] - candidate > 0.0) {
            tau = candidate;
            support = i + 1;
        }
    }
    (void)support;
    for (double& x : v)
        x = std::max(0.0, x - tau);
    return v;
}

} // namespace

void SolverConfig::validate() const {
    if (!(eta_t >= 0.0) || !(eta_p >= 0.0) || !(eta_lambda > 0.0) || !(eta_mu > 0.0))
        throw std::invalid_argument("solver config: step sizes must be positive");
    if (!(epsilon_bits > 0.0))
        throw std::invalid_argument("solver config: epsilon must be positive");
    if (max_iters == 0)
        throw std::invalid_argument("solver config: max_iters must be >= 1");
    if (!(feasibility_tol >= 0.0))
        throw std::invalid_argument("solver config: feasibility tolerance must be >= 0");
    if (stop_window == 0)
        throw std::invalid_argument("solver config: stop window must be >= 1");
    if (!(init_lambda >= 0.0) || !(init_mu >= 0.0))
        throw std::invalid_argument("solver config: dual warm starts must be >= 0");
}

double KktResiduals::max_residual() const {
    return std::max(std::max(stationarity, primal_feasibility),
                    std::max(dual_feasibility, slackness));
}

Allocation primal_step(const Scenario& scenario, const Allocation& alloc,
                       const DualState& dual, const SolverConfig& config) {
    if (dual.active_j >= scenario.n_locations())
        throw std::invalid_argument("primal_step: active location index out of range");
    if (alloc.t.size() != scenario.n_beams() || alloc.p.size() != scenario.n_beams())
        throw std::invalid_argument("primal_step: allocation size mismatch");

    const auto& beta_row = scenario.beta[dual.active_j];
    Allocation next = alloc;
    for (std::size_t l = 0; l < scenario.n_beams(); ++l) {
        auto grad = beam_gradient(scenario.alpha[l], beta_row[l], alloc.p[l]);
        next.p[l] = std::max(0.0, alloc.p[l] + config.eta_p * (grad.g - dual.mu) * alloc.t[l]);
        next.t[l] = std::max(0.0, alloc.t[l] + config.eta_t *
                                                  (grad.q - dual.lambda - dual.mu * alloc.p[l]));
    }
    return next;
}

DualState dual_step(const Scenario& scenario, const Allocation& alloc,
                    const DualState& dual, const SolverConfig& config) {
    DualState next = dual;
    double time_residual = alloc.time_used() - 1.0;
    double power_residual = alloc.power_used() - scenario.p_tx_watts;
    next.lambda = std::max(0.0, dual.lambda + config.eta_lambda * time_residual);
    next.mu = std::max(0.0, dual.mu + config.eta_mu * power_residual);
    return next;
}

SolveReport solve_joint(const Scenario& scenario, const SolverConfig& config,
                        const std::optional<Allocation>& init) {
    Allocation start = init ? *init : uniform_allocation(scenario);
    if (init) {
        auto feasibility = is_feasible(scenario, start, config.feasibility_tol);
        if (!feasibility.feasible)
            throw std::invalid_argument("solve_joint: provided initial allocation is infeasible");
    }
    return run_loop(scenario, config, std::move(start), config.eta_t, config.eta_p,
                    RepairMode::joint);
}

SolveReport solve_time_only(const Scenario& scenario, const SolverConfig& config,
                            const std::vector<double>& fixed_p) {
    std::size_t L = scenario.n_beams();
    Allocation start;
    start.p = fixed_p.empty() ? std::vector<double>(L, scenario.p_tx_watts) : fixed_p;
    if (start.p.size() != L)
        throw std::invalid_argument("solve_time_only: fixed power vector has " +
                                    std::to_string(start.p.size()) + " entries for " +
                                    std::to_string(L) + " beams");
    for (double v : start.p)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("solve_time_only: fixed powers must be finite and >= 0");

    // Start from the largest uniform time vector the power budget allows.
    start.t.assign(L, 1.0 / static_cast<double>(L));
    double power_used = start.power_used();
    if (power_used > scenario.p_tx_watts) {
        double s = scenario.p_tx_watts / power_used;
        for (double& v : start.t)
            v *= s;
    }
    return run_loop(scenario, config, std::move(start), config.eta_t, 0.0,
                    RepairMode::frozen_p);
}

SolveReport solve_power_only(const Scenario& scenario, const SolverConfig& config,
                             const std::vector<double>& fixed_t) {
    std::size_t L = scenario.n_beams();
    Allocation start;
    start.t = fixed_t.empty() ? std::vector<double>(L, 1.0 / static_cast<double>(L)) : fixed_t;
    if (start.t.size() != L)
        throw std::invalid_argument("solve_power_only: fixed time vector has " +
                                    std::to_string(start.t.size()) + " entries for " +
                                    std::to_string(L) + " beams");
    double total = 0.0;
    for (double v : start.t) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("solve_power_only: time fractions must be finite and >= 0");
        total += v;
    }
    if (total > 1.0 + config.feasibility_tol)
        throw std::invalid_argument("solve_power_only: fixed time fractions sum to " +
                                    std::to_string(total) + " > 1");

    start.p.assign(L, 0.0);
    if (total > 0.0)
        for (std::size_t l = 0; l < L; ++l)
            start.p[l] = scenario.p_tx_watts; // sum p*t = P_tx * sum(t) <= P_tx
    return run_loop(scenario, config, std::move(start), 0.0, config.eta_p,
                    RepairMode::frozen_t);
}

SolveReport baseline_uniform(const Scenario& scenario) {
    scenario.validate();
    return evaluated_report(scenario, uniform_allocation(scenario));
}

SolveReport baseline_los_only(const Scenario& scenario, std::size_t los_index) {
    scenario.validate();
    if (los_index >= scenario.n_beams())
        throw std::invalid_argument("baseline_los_only: beam index " +
                                    std::to_string(los_index) + " out of range for " +
                                    std::to_string(scenario.n_beams()) + " beams");
    Allocation alloc;
    alloc.t.assign(scenario.n_beams(), 0.0);
    alloc.p.assign(scenario.n_beams(), 0.0);
    alloc.t[los_index] = 1.0;
    alloc.p[los_index] = scenario.p_tx_watts;
    return evaluated_report(scenario, std::move(alloc));
}

KktResiduals kkt_residuals(const Scenario& scenario, const Allocation& alloc,
                           const DualState& dual) {
    const std::size_t L = scenario.n_beams();
    const std::size_t J = scenario.n_locations();
    auto eval = evaluate(scenario, alloc);
    const double c_nats = eval.worst_bits * kLn2;

    // Per-location natural-log terms and derivatives for every beam.
    std::vector<std::vector<BeamGradient>> grads(J, std::vector<BeamGradient>(L));
    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t l = 0; l < L; ++l)
            grads[j][l] = beam_gradient(scenario.alpha[l], scenario.beta[j][l], alloc.p[l]);

    // Least-squares system for the location weights nu on the simplex. Rows:
    // the t- and p-stationarity equations on supported coordinates plus one
    // complementary-slackness row per location.
    struct Row {
        std::vector<double> a;
        double b;
    };
    std::vector<Row> rows;
    for (std::size_t l = 0; l < L; ++l) {
        if (alloc.t[l] > 0.0) {
            Row row{std::vector<double>(J), dual.lambda + dual.mu * alloc.p[l]};
            for (std::size_t j = 0; j < J; ++j)
                row.a[j] = grads[j][l].q;
            rows.push_back(std::move(row));
        }
        if (alloc.p[l] > 0.0) {
            Row row{std::vector<double>(J), dual.mu * alloc.t[l]};
            for (std::size_t j = 0; j < J; ++j)
                row.a[j] = alloc.t[l] * grads[j][l].g;
            rows.push_back(std::move(row));
        }
    }
    for (std::size_t j = 0; j < J; ++j) {
        Row row{std::vector<double>(J, 0.0), 0.0};
        row.a[j] = eval.f_bits[j] * kLn2 - c_nats;
        rows.push_back(std::move(row));
    }

    // Projected gradient on the simplex; the objective is a small convex QP.
    std::vector<double> nu(J, 1.0 / static_cast<double>(J));
    if (J > 1) {
        double lipschitz = 0.0;
        for (const auto& row : rows)
            for (double a : row.a)
                lipschitz += a * a;
        lipschitz *= 2.0;
        if (lipschitz > 0.0) {
            const double step = 1.0 / lipschitz;
            std::vector<double> grad(J);
            for (int it = 0; it < 4000; ++it) {
                std::fill(grad.begin(), grad.end(), 0.0);
                for (const auto& row : rows) {
                    double r = -row.b;
                    for (std::size_t j = 0; j < J; ++j)
                        r += row.a[j] * nu[j];
                    for (std::size_t j = 0; j < J; ++j)
                        grad[j] += 2.0 * r * row.a[j];
                }
                for (std::size_t j = 0; j < J; ++j)
                    nu[j] -= step * grad[j];
                nu = project_simplex(std::move(nu));
            }
        }
    } else {
        nu.assign(1, 1.0);
    }

    KktResiduals out;
    out.nu = nu;

    for (std::size_t l = 0; l < L; ++l) {
        if (alloc.t[l] > 0.0) {
            double r = -(dual.lambda + dual.mu * alloc.p[l]);
            for (std::size_t j = 0; j < J; ++j)
                r += nu[j] * grads[j][l].q;
            out.stationarity = std::max(out.stationarity, std::abs(r));
        }
        if (alloc.p[l] > 0.0) {
            double r = -dual.mu * alloc.t[l];
            for (std::size_t j = 0; j < J; ++j)
                r += nu[j] * alloc.t[l] * grads[j][l].g;
            out.stationarity = std::max(out.stationarity, std::abs(r));
        }
    }

    double time_residual = alloc.time_used() - 1.0;
    double power_residual = alloc.power_used() - scenario.p_tx_watts;
    out.primal_feasibility = std::max(0.0, time_residual);
    out.primal_feasibility = std::max(out.primal_feasibility, power_residual);
    for (std::size_t l = 0; l < L; ++l) {
        out.primal_feasibility = std::max(out.primal_feasibility, -alloc.t[l]);
        out.primal_feasibility = std::max(out.primal_feasibility, -alloc.p[l]);
    }
    out.primal_feasibility = std::max(out.primal_feasibility, 0.0);

    out.dual_feasibility = std::max(0.0, std::max(-dual.lambda, -dual.mu));

    out.slackness = std::abs(dual.lambda * time_residual);
    out.slackness = std::max(out.slackness, std::abs(dual.mu * power_residual));
    for (std::size_t j = 0; j < J; ++j)
        out.slackness = std::max(out.slackness, nu[j] * (eval.f_bits[j] * kLn2 - c_nats));

    return out;
}

} // namespace secbeam
