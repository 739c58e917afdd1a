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

#include "secbeam/ckm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "secbeam/errors.hpp"
#include "parse_util.hpp"

namespace secbeam {

SteeringVector steering_vector(double theta_rad, std::size_t n_t, double d_over_lambda) {
    if (!std::isfinite(theta_rad))
        throw std::invalid_argument("steering_vector: theta must be finite");
    if (n_t == 0)
        throw std::invalid_argument("steering_vector: n_t must be >= 1");
    if (!(d_over_lambda > 0.0) || !std::isfinite(d_over_lambda))
        throw std::invalid_argument("steering_vector: d/lambda must be positive and finite");

    SteeringVector w;
    w.theta_rad = theta_rad;
    w.element_spacing_over_lambda = d_over_lambda;
    w.entries.resize(n_t);

    const double scale = 1.0 / std::sqrt(static_cast<double>(n_t));
    const double phase_step = -2.0 * std::numbers::pi * d_over_lambda * std::sin(theta_rad);
    for (std::size_t k = 0; k < n_t; ++k) {
        double phase = phase_step * static_cast<double>(k);
        w.entries[k] = std::polar(scale, phase);
    }
    return w;
}

double beam_snr(const std::vector<std::complex<double>>& channel,
                const SteeringVector& w,
                double p_tx_watts,
                double noise_power_watts) {
    if (channel.size() != w.entries.size())
        throw std::invalid_argument("beam_snr: channel length " + std::to_string(channel.size()) +
                                    " does not match steering vector length " +
                                    std::to_string(w.entries.size()));
    if (!(noise_power_watts > 0.0))
        throw std::invalid_argument("beam_snr: noise power must be positive");
    if (p_tx_watts < 0.0)
        throw std::invalid_argument("beam_snr: transmit power must be nonnegative");

    std::complex<double> inner{0.0, 0.0};
    for (std::size_t k = 0; k < channel.size(); ++k)
        inner += std::conj(channel[k]) * w.entries[k];
    return (p_tx_watts / noise_power_watts) * std::norm(inner);
}

void Ckm::validate() const {
    const std::size_t L = n_beams();
    const std::size_t J = n_locations();
    if (L == 0)
        throw std::invalid_argument("ckm: needs at least one beam angle");
    if (J == 0)
        throw std::invalid_argument("ckm: needs at least one candidate location");
    if (!(p_tx_ref_watts > 0.0))
        throw std::invalid_argument("ckm: reference transmit power must be positive");

    for (std::size_t a = 0; a < L; ++a) {
        if (!std::isfinite(angles_rad[a]))
            throw std::invalid_argument("ckm: angle " + std::to_string(a + 1) + " is not finite");
        for (std::size_t b = a + 1; b < L; ++b)
            if (angles_rad[a] == angles_rad[b])
                throw std::invalid_argument("ckm: duplicate angle at entries " +
                                            std::to_string(a + 1) + " and " + std::to_string(b + 1));
    }

    std::size_t coord_dim = locations.empty() ? 0 : locations.front().coords_m.size();
    for (std::size_t j = 0; j < J; ++j) {
        const auto& loc = locations[j];
        if (loc.coords_m.size() != 2 && loc.coords_m.size() != 3)
            throw std::invalid_argument("ckm: location " + std::to_string(j + 1) +
                                        " must have 2 or 3 coordinates");
        if (loc.coords_m.size() != coord_dim)
            throw std::invalid_argument("ckm: location " + std::to_string(j + 1) +
                                        " mixes coordinate dimensions");
    }

    if (samples.size() != L)
        throw std::invalid_argument("ckm: sample table has " + std::to_string(samples.size()) +
                                    " beam rows, expected " + std::to_string(L));
    for (std::size_t l = 0; l < L; ++l) {
        if (samples[l].size() != J)
            throw std::invalid_argument("ckm: sample row for beam " + std::to_string(l + 1) +
                                        " has " + std::to_string(samples[l].size()) +
                                        " cells, expected " + std::to_string(J));
        for (std::size_t j = 0; j < J; ++j) {
            if (samples[l][j].empty())
                throw std::invalid_argument("ckm: cell (beam " + std::to_string(l + 1) +
                                            ", location " + std::to_string(j + 1) +
                                            ") has no samples");
            for (double s : samples[l][j])
                if (!(s >= 0.0) || !std::isfinite(s))
                    throw std::invalid_argument("ckm: cell (beam " + std::to_string(l + 1) +
                                                ", location " + std::to_string(j + 1) +
                                                ") contains a negative or non-finite sample");
        }
    }
}

void Scenario::validate() const {
    const std::size_t L = n_beams();
    const std::size_t J = n_locations();
    if (L == 0)
        throw std::invalid_argument("scenario: needs at least one beam");
    if (J == 0)
        throw std::invalid_argument("scenario: needs at least one eavesdropper location");
    if (!(p_tx_watts > 0.0))
        throw std::invalid_argument("scenario: power budget must be positive");

    for (std::size_t l = 0; l < L; ++l)
        if (!(alpha[l] >= 0.0) || !std::isfinite(alpha[l]))
            throw std::invalid_argument("scenario: alpha[" + std::to_string(l + 1) +
                                        "] must be finite and >= 0");
    for (std::size_t j = 0; j < J; ++j) {
        if (beta[j].size() != L)
            throw std::invalid_argument("scenario: beta row " + std::to_string(j + 1) + " has " +
                                        std::to_string(beta[j].size()) + " entries, expected " +
                                        std::to_string(L) + " (the alpha length)");
        for (std::size_t l = 0; l < L; ++l)
            if (!(beta[j][l] >= 0.0) || !std::isfinite(beta[j][l]))
                throw std::invalid_argument("scenario: beta[" + std::to_string(j + 1) + "][" +
                                            std::to_string(l + 1) + "] must be finite and >= 0");
    }
    if (!beam_labels.empty() && beam_labels.size() != L)
        throw std::invalid_argument("scenario: beam label count does not match beam count");
    if (!location_labels.empty() && location_labels.size() != J)
        throw std::invalid_argument("scenario: location label count does not match location count");
}

std::vector<std::vector<double>> worst_case_beta(const Ckm& ckm) {
    ckm.validate();
    const std::size_t L = ckm.n_beams();
    const std::size_t J = ckm.n_locations();

    std::vector<std::vector<double>> beta(J, std::vector<double>(L, 0.0));
    for (std::size_t j = 0; j < J; ++j)
        for (std::size_t l = 0; l < L; ++l) {
            const auto& cell = ckm.samples[l][j];
            double worst = *std::max_element(cell.begin(), cell.end());
            beta[j][l] = worst / ckm.p_tx_ref_watts;
        }
    return beta;
}

Scenario build_scenario(const Ckm& ckm,
                        const std::vector<double>& rx_gains_watts,
                        double p_tx_watts) {
    ckm.validate();
    if (rx_gains_watts.size() != ckm.n_beams())
        throw std::invalid_argument("build_scenario: " + std::to_string(rx_gains_watts.size()) +
                                    " receiver gains for " + std::to_string(ckm.n_beams()) +
                                    " beams");
    if (!(p_tx_watts > 0.0))
        throw std::invalid_argument("build_scenario: power budget must be positive");
    for (double g : rx_gains_watts)
        if (!(g >= 0.0) || !std::isfinite(g))
            throw std::invalid_argument("build_scenario: receiver gains must be finite and >= 0");

    Scenario sc;
    sc.alpha.reserve(ckm.n_beams());
    for (double g : rx_gains_watts)
        sc.alpha.push_back(g / ckm.p_tx_ref_watts);
    sc.beta = worst_case_beta(ckm);
    sc.p_tx_watts = p_tx_watts;
    for (const auto& loc : ckm.locations)
        sc.location_labels.push_back(loc.label);
    if (std::all_of(sc.location_labels.begin(), sc.location_labels.end(),
                    [](const std::string& s) { return s.empty(); }))
        sc.location_labels.clear();
    sc.validate();
    return sc;
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

} // namespace

Ckm load_ckm(std::istream& in, const std::string& origin) {
    using detail::parse_double;
    using detail::parse_index;
    using detail::tokenize;

    Ckm ckm;
    std::size_t n_angles = 0, n_locations = 0;
    bool have_n_angles = false, have_n_locations = false, have_p_ref = false, have_angles = false;
    std::vector<bool> location_seen;

    std::string line;
    std::size_t lineno = 0;
    bool in_records = false;

    while (std::getline(in, line)) {
        ++lineno;
        auto tokens = tokenize(line);
        if (tokens.empty())
            continue;

        const std::string& key = tokens[0];
        bool is_record = !key.empty() &&
                         (std::isdigit(static_cast<unsigned char>(key[0])) != 0);

        if (!is_record) {
            if (in_records)
                throw ParseError(origin, lineno, "header entry '" + key +
                                                     "' after the first sample record");
            if (key == "n_angles") {
                if (have_n_angles)
                    throw ParseError(origin, lineno, "duplicate n_angles");
                if (tokens.size() != 2)
                    throw ParseError(origin, lineno, "n_angles takes exactly one value");
                n_angles = parse_index(tokens[1], origin, lineno, "n_angles");
                have_n_angles = true;
            } else if (key == "n_locations") {
                if (have_n_locations)
                    throw ParseError(origin, lineno, "duplicate n_locations");
                if (tokens.size() != 2)
                    throw ParseError(origin, lineno, "n_locations takes exactly one value");
                n_locations = parse_index(tokens[1], origin, lineno, "n_locations");
                have_n_locations = true;
                location_seen.assign(n_locations, false);
                ckm.locations.resize(n_locations);
            } else if (key == "p_tx_ref_watts") {
                if (have_p_ref)
                    throw ParseError(origin, lineno, "duplicate p_tx_ref_watts");
                if (tokens.size() != 2)
                    throw ParseError(origin, lineno, "p_tx_ref_watts takes exactly one value");
                ckm.p_tx_ref_watts = parse_double(tokens[1], origin, lineno, "p_tx_ref_watts");
                if (!(ckm.p_tx_ref_watts > 0.0))
                    throw ParseError(origin, lineno, "p_tx_ref_watts must be positive");
                have_p_ref = true;
            } else if (key == "angles_rad" || key == "angles_deg") {
                if (have_angles)
                    throw ParseError(origin, lineno, "duplicate angle list");
                if (!have_n_angles)
                    throw ParseError(origin, lineno, "n_angles must come before the angle list");
                if (tokens.size() != n_angles + 1)
                    throw ParseError(origin, lineno, "expected " + std::to_string(n_angles) +
                                                         " angles, got " +
                                                         std::to_string(tokens.size() - 1));
                double unit = (key == "angles_deg") ? kDegToRad : 1.0;
                for (std::size_t i = 1; i < tokens.size(); ++i)
                    ckm.angles_rad.push_back(unit *
                                             parse_double(tokens[i], origin, lineno, "angle"));
                have_angles = true;
            } else if (key == "location") {
                if (!have_n_locations)
                    throw ParseError(origin, lineno, "n_locations must come before locations");
                if (tokens.size() < 4 || tokens.size() > 5)
                    throw ParseError(origin, lineno,
                                     "location takes an index and 2 or 3 coordinates");
                std::size_t idx = parse_index(tokens[1], origin, lineno, "location index");
                if (idx > n_locations)
                    throw ParseError(origin, lineno, "location index " + std::to_string(idx) +
                                                         " out of range 1.." +
                                                         std::to_string(n_locations));
                if (location_seen[idx - 1])
                    throw ParseError(origin, lineno,
                                     "duplicate location " + std::to_string(idx));
                location_seen[idx - 1] = true;
                for (std::size_t i = 2; i < tokens.size(); ++i)
                    ckm.locations[idx - 1].coords_m.push_back(
                        parse_double(tokens[i], origin, lineno, "location coordinate"));
            } else {
                throw ParseError(origin, lineno, "unknown header entry '" + key + "'");
            }
            continue;
        }

        // sample record: angle_index location_index sample_watts
        if (!in_records) {
            if (!(have_n_angles && have_n_locations && have_p_ref && have_angles))
                throw ParseError(origin, lineno, "sample record before the header is complete");
            for (std::size_t j = 0; j < n_locations; ++j)
                if (!location_seen[j])
                    throw ParseError(origin, lineno, "sample record before location " +
                                                         std::to_string(j + 1) + " was declared");
            ckm.samples.assign(n_angles,
                               std::vector<std::vector<double>>(n_locations));
            in_records = true;
        }
        if (tokens.size() != 3)
            throw ParseError(origin, lineno,
                             "sample record needs: angle_index location_index sample_watts");
        std::size_t l = parse_index(tokens[0], origin, lineno, "angle index");
        std::size_t j = parse_index(tokens[1], origin, lineno, "location index");
        double watts = parse_double(tokens[2], origin, lineno, "sample power");
        if (l > n_angles)
            throw ParseError(origin, lineno, "angle index " + std::to_string(l) +
                                                 " out of range 1.." + std::to_string(n_angles));
        if (j > n_locations)
            throw ParseError(origin, lineno, "location index " + std::to_string(j) +
                                                 " out of range 1.." + std::to_string(n_locations));
        if (!(watts >= 0.0) || !std::isfinite(watts))
            throw ParseError(origin, lineno, "sample power must be finite and >= 0");
        ckm.samples[l - 1][j - 1].push_back(watts);
    }

    if (!in_records)
        throw ParseError(origin, 0, "no sample records found");

    for (std::size_t l = 0; l < n_angles; ++l)
        for (std::size_t j = 0; j < n_locations; ++j)
            if (ckm.samples[l][j].empty())
                throw ParseError(origin, 0, "no samples for cell (beam " + std::to_string(l + 1) +
                                                ", location " + std::to_string(j + 1) + ")");

    ckm.validate();
    return ckm;
}

Ckm load_ckm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError(path, 0, "cannot open file");
    return load_ckm(in, path);
}

} // namespace secbeam
