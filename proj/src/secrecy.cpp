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

#include "secbeam/secrecy.hpp"

#include <cmath>
#include <stdexcept>

namespace secbeam {

double Allocation::time_used() const {
    double sum = 0.0;
    for (double v : t)
        sum += v;
    return sum;
}

double Allocation::power_used() const {
    double sum = 0.0;
    for (std::size_t l = 0; l < t.size(); ++l)
        sum += p[l] * t[l];
    return sum;
}

namespace {

void check_dimensions(const Scenario& scenario, const Allocation& alloc) {
    if (alloc.t.size() != scenario.n_beams() || alloc.p.size() != scenario.n_beams())
        throw std::invalid_argument("allocation has " + std::to_string(alloc.t.size()) + "/" +
                                    std::to_string(alloc.p.size()) +
                                    " time/power entries for a scenario with " +
                                    std::to_string(scenario.n_beams()) + " beams");
}

} // namespace

std::vector<std::vector<std::size_t>> secure_sets(const Scenario& scenario) {
    std::vector<std::vector<std::size_t>> sets(scenario.n_locations());
    for (std::size_t j = 0; j < scenario.n_locations(); ++j)
        for (std::size_t l = 0; l < scenario.n_beams(); ++l)
            if (scenario.alpha[l] >= scenario.beta[j][l])
                sets[j].push_back(l);
    return sets;
}

double secrecy_log_term_bits(double alpha, double beta, double power_watts) {
    return std::log2((1.0 + power_watts * alpha) / (1.0 + power_watts * beta));
}

double eval_f(const Scenario& scenario, const Allocation& alloc, std::size_t j) {
    check_dimensions(scenario, alloc);
    if (j >= scenario.n_locations())
        throw std::invalid_argument("location index " + std::to_string(j) +
                                    " out of range for " +
                                    std::to_string(scenario.n_locations()) + " locations");

    double sum_bits = 0.0;
    for (std::size_t l = 0; l < scenario.n_beams(); ++l) {
        double a = scenario.alpha[l];
        double b = scenario.beta[j][l];
        if (a >= b)
            sum_bits += alloc.t[l] * secrecy_log_term_bits(a, b, alloc.p[l]);
    }
    return sum_bits;
}

SecrecyEvaluation evaluate(const Scenario& scenario, const Allocation& alloc) {
    SecrecyEvaluation eval;
    eval.f_bits.resize(scenario.n_locations());
    for (std::size_t j = 0; j < scenario.n_locations(); ++j)
        eval.f_bits[j] = eval_f(scenario, alloc, j);

    eval.worst_index = 0;
    for (std::size_t j = 1; j < eval.f_bits.size(); ++j)
        if (eval.f_bits[j] < eval.f_bits[eval.worst_index])
            eval.worst_index = j;
    eval.worst_bits = eval.f_bits[eval.worst_index];
    return eval;
}

FeasibilityReport is_feasible(const Scenario& scenario, const Allocation& alloc,
                              double tol) {
    check_dimensions(scenario, alloc);

    FeasibilityReport report;
    auto flag = [&report](const std::string& name, double residual) {
        report.feasible = false;
        report.violations.push_back({name, residual});
    };

    double time_used = alloc.time_used();
    if (time_used > 1.0 + tol)
        flag("time_budget", time_used - 1.0);

    double power_used = alloc.power_used();
    if (power_used > scenario.p_tx_watts * (1.0 + tol))
        flag("power_budget", power_used - scenario.p_tx_watts);

    for (std::size_t l = 0; l < alloc.t.size(); ++l) {
        if (alloc.t[l] < -tol)
            flag("t[" + std::to_string(l) + "]", -alloc.t[l]);
        if (alloc.p[l] < -tol)
            flag("p[" + std::to_string(l) + "]", -alloc.p[l]);
    }
    return report;
}

} // namespace secbeam
