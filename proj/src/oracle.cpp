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

#include "secbeam/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace secbeam {

namespace {

// Budget checks are exact (tolerance zero); grid values whose float sum lands
// a few ulp over the budget are rescaled back onto it instead of dropped, so
// the tight boundary where optima live stays represented.
constexpr double kUlpBand = 1e-12;

bool fit_time_budget(std::vector<double>& t) {
    double sum = 0.0;
    for (double v : t)
        sum += v;
    if (sum <= 1.0)
        return true;
    if (sum > 1.0 + kUlpBand)
        return false;
    for (int attempt = 0; attempt < 4 && sum > 1.0; ++attempt) {
        double s = 1.0 / sum;
        sum = 0.0;
        for (double& v : t) {
            v *= s;
            sum += v;
        }
    }
    return sum <= 1.0;
}

bool fit_power_budget(Allocation& alloc, double p_tx) {
    double used = alloc.power_used();
    if (used <= p_tx)
        return true;
    if (used > p_tx * (1.0 + kUlpBand))
        return false;
    for (int attempt = 0; attempt < 4 && used > p_tx; ++attempt) {
        double s = p_tx / used;
        for (double& v : alloc.p)
            v *= s;
        used = alloc.power_used();
    }
    return used <= p_tx;
}

bool lex_less(const Allocation& a, const Allocation& b) {
    for (std::size_t l = 0; l < a.t.size(); ++l)
        if (a.t[l] != b.t[l])
            return a.t[l] < b.t[l];
    for (std::size_t l = 0; l < a.p.size(); ++l)
        if (a.p[l] != b.p[l])
            return a.p[l] < b.p[l];
    return false;
}

struct Incumbent {
    bool valid = false;
    double c_bits = 0.0;
    Allocation alloc;

    // Higher value wins; exact ties go to the lexicographically smallest
    // allocation so the result does not depend on enumeration order.
    void offer(double c, const Allocation& candidate) {
        if (!valid || c > c_bits || (c == c_bits && lex_less(candidate, alloc))) {
            valid = true;
            c_bits = c;
            alloc = candidate;
        }
    }
};

std::vector<double> make_grid(double lo, double hi, std::size_t steps) {
    std::vector<double> grid(steps);
    for (std::size_t i = 0; i < steps; ++i)
        grid[i] = lo + (static_cast<double>(i) * (hi - lo)) / static_cast<double>(steps - 1);
    return grid;
}

} // namespace

void GridSpec::validate() const {
    if (t_steps < 2 || p_steps < 2)
        throw std::invalid_argument("grid spec: t_steps and p_steps must be >= 2");
}

OracleResult grid_search(const Scenario& scenario, const GridSpec& spec) {
    scenario.validate();
    spec.validate();
    const std::size_t L = scenario.n_beams();
    const std::size_t J = scenario.n_locations();
    if (L > 3)
        throw std::invalid_argument("grid_search: supports at most 3 beams, got " +
                                    std::to_string(L));

    const double t_min = 1.0 / static_cast<double>(spec.t_steps - 1);
    const double p_max =
        std::min(scenario.p_tx_watts / std::max(t_min, 1e-3), 1e3 * scenario.p_tx_watts);

    std::vector<double> t_lo(L, 0.0), t_hi(L, 1.0);
    std::vector<double> p_lo(L, 0.0), p_hi(L, p_max);

    Incumbent best;
    std::size_t points = 0;

    for (std::size_t level = 0; level <= spec.refine_levels; ++level) {
        std::vector<std::vector<double>> t_grid(L), p_grid(L);
        for (std::size_t l = 0; l < L; ++l) {
            t_grid[l] = make_grid(t_lo[l], t_hi[l], spec.t_steps);
            p_grid[l] = make_grid(p_lo[l], p_hi[l], spec.p_steps);
        }

        // Tabulate the per-beam log terms on this level's power grid; the
        // objective at a grid point is then a handful of multiply-adds.
        // Layout: term[l][j * p_steps + ip].
        std::vector<std::vector<double>> term(L);
        for (std::size_t l = 0; l < L; ++l) {
            term[l].assign(J * spec.p_steps, 0.0);
            for (std::size_t j = 0; j < J; ++j) {
                if (scenario.alpha[l] < scenario.beta[j][l])
                    continue; // insecure pair contributes nothing
                for (std::size_t ip = 0; ip < spec.p_steps; ++ip)
                    term[l][j * spec.p_steps + ip] = secrecy_log_term_bits(
                        scenario.alpha[l], scenario.beta[j][l], p_grid[l][ip]);
            }
        }

        const double budget = scenario.p_tx_watts * (1.0 + kUlpBand);
        Allocation candidate;
        candidate.t.assign(L, 0.0);
        candidate.p.assign(L, 0.0);

        auto score = [&](double c) {
            ++points;
            if (best.valid && c < best.c_bits)
                return;
            Allocation fitted = candidate;
            if (!fit_power_budget(fitted, scenario.p_tx_watts))
                return;
            best.offer(c, fitted);
        };

        // Powers of the beams that carry time are swept with nested loops
        // (at most three); beams with zero time are pinned to the low edge
        // of their power box, where ties resolve.
        auto sweep_powers = [&](const std::vector<double>& t_fit,
                                const std::vector<std::size_t>& active,
                                const std::vector<double>& f_base) {
            if (active.empty()) {
                double c = f_base[0];
                for (std::size_t j = 1; j < J; ++j)
                    c = std::min(c, f_base[j]);
                score(c);
                return;
            }
            std::size_t a = active[0];
            if (active.size() == 1) {
                for (std::size_t ia = 0; ia < spec.p_steps; ++ia) {
                    double pa = p_grid[a][ia];
                    if (pa * t_fit[a] > budget)
                        break;
                    candidate.p[a] = pa;
                    double c = f_base[0] + t_fit[a] * term[a][ia];
                    for (std::size_t j = 1; j < J; ++j)
                        c = std::min(c, f_base[j] + t_fit[a] * term[a][j * spec.p_steps + ia]);
                    score(c);
                }
                return;
            }
            std::size_t b = active[1];
            if (active.size() == 2) {
                double min_pb = p_grid[b][0] * t_fit[b];
                std::vector<double> f_a(J);
                for (std::size_t ia = 0; ia < spec.p_steps; ++ia) {
                    double power_a = p_grid[a][ia] * t_fit[a];
                    if (power_a + min_pb > budget)
                        break;
                    candidate.p[a] = p_grid[a][ia];
                    for (std::size_t j = 0; j < J; ++j)
                        f_a[j] = f_base[j] + t_fit[a] * term[a][j * spec.p_steps + ia];
                    for (std::size_t ib = 0; ib < spec.p_steps; ++ib) {
                        double pb = p_grid[b][ib];
                        if (power_a + pb * t_fit[b] > budget)
                            break;
                        candidate.p[b] = pb;
                        double c = f_a[0] + t_fit[b] * term[b][ib];
                        for (std::size_t j = 1; j < J; ++j)
                            c = std::min(c, f_a[j] + t_fit[b] * term[b][j * spec.p_steps + ib]);
                        score(c);
                    }
                }
                return;
            }
            std::size_t cdim = active[2];
            double min_pb = p_grid[b][0] * t_fit[b];
            double min_pc = p_grid[cdim][0] * t_fit[cdim];
            std::vector<double> f_a(J), f_ab(J);
            for (std::size_t ia = 0; ia < spec.p_steps; ++ia) {
                double power_a = p_grid[a][ia] * t_fit[a];
                if (power_a + min_pb + min_pc > budget)
                    break;
                candidate.p[a] = p_grid[a][ia];
                for (std::size_t j = 0; j < J; ++j)
                    f_a[j] = f_base[j] + t_fit[a] * term[a][j * spec.p_steps + ia];
                for (std::size_t ib = 0; ib < spec.p_steps; ++ib) {
                    double power_ab = power_a + p_grid[b][ib] * t_fit[b];
                    if (power_ab + min_pc > budget)
                        break;
                    candidate.p[b] = p_grid[b][ib];
                    for (std::size_t j = 0; j < J; ++j)
                        f_ab[j] = f_a[j] + t_fit[b] * term[b][j * spec.p_steps + ib];
                    for (std::size_t ic = 0; ic < spec.p_steps; ++ic) {
                        double pc = p_grid[cdim][ic];
                        if (power_ab + pc * t_fit[cdim] > budget)
                            break;
                        candidate.p[cdim] = pc;
                        double c = f_ab[0] + t_fit[cdim] * term[cdim][ic];
                        for (std::size_t j = 1; j < J; ++j)
                            c = std::min(c,
                                         f_ab[j] + t_fit[cdim] * term[cdim][j * spec.p_steps + ic]);
                        score(c);
                    }
                }
            }
        };

        // Plain odometer over time tuples; infeasible tuples cost one sum.
        std::vector<std::size_t> t_idx(L, 0);
        std::vector<double> t_val(L, 0.0);
        while (true) {
            for (std::size_t l = 0; l < L; ++l)
                t_val[l] = t_grid[l][t_idx[l]];

            std::vector<double> t_fit = t_val;
            if (fit_time_budget(t_fit)) {
                candidate.t = t_fit;
                std::vector<std::size_t> active;
                std::vector<double> f_base(J, 0.0);
                for (std::size_t l = 0; l < L; ++l) {
                    candidate.p[l] = p_grid[l][0];
                    if (t_fit[l] > 0.0) {
                        active.push_back(l);
                    } else {
                        for (std::size_t j = 0; j < J; ++j)
                            f_base[j] += t_fit[l] * term[l][j * spec.p_steps + 0];
                    }
                }
                sweep_powers(t_fit, active, f_base);
            }

            std::size_t d = L;
            bool advanced = false;
            while (d > 0) {
                --d;
                if (t_idx[d] + 1 < spec.t_steps) {
                    ++t_idx[d];
                    advanced = true;
                    break;
                }
                t_idx[d] = 0;
            }
            if (!advanced)
                break;
        }

        // Shrink every box dimension 5x around the incumbent for the next level.
        if (level < spec.refine_levels && best.valid) {
            double t_half = 0.5 * std::pow(5.0, -static_cast<double>(level + 1));
            double p_half = 0.5 * p_max * std::pow(5.0, -static_cast<double>(level + 1));
            for (std::size_t l = 0; l < L; ++l) {
                t_lo[l] = std::max(0.0, best.alloc.t[l] - t_half);
                t_hi[l] = std::min(1.0, best.alloc.t[l] + t_half);
                p_lo[l] = std::max(0.0, best.alloc.p[l] - p_half);
                p_hi[l] = std::min(p_max, best.alloc.p[l] + p_half);
            }
        }
    }

    OracleResult result;
    result.allocation = best.alloc;
    result.secrecy_bits = evaluate(scenario, best.alloc).worst_bits;
    result.points_evaluated = points;
    return result;
}

VerifyResult verify_report(const Scenario& scenario, const SolveReport& report,
                           const GridSpec& spec, double rel_tol) {
    auto feasibility = is_feasible(scenario, report.allocation, 1e-6);
    if (!feasibility.feasible)
        throw std::invalid_argument("verify_report: report allocation is infeasible");

    auto oracle = grid_search(scenario, spec);
    VerifyResult out;
    out.oracle_bits = oracle.secrecy_bits;
    if (oracle.secrecy_bits <= 1e-12) {
        out.relative_gap = oracle.secrecy_bits - report.secrecy_bits;
        out.pass = report.secrecy_bits >= -1e-12;
    } else {
        out.relative_gap = (oracle.secrecy_bits - report.secrecy_bits) / oracle.secrecy_bits;
        out.pass = report.secrecy_bits >= oracle.secrecy_bits * (1.0 - rel_tol);
    }
    return out;
}

} // namespace secbeam
