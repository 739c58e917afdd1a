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

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace secbeam {

/*!
 * Unit-norm transmit array weights of a uniform linear array pointed at a
 * given angle of departure. Entry k is (1/sqrt(n)) * exp(-i*2*pi*(d/lambda)*k*sin(theta)).
 */
struct SteeringVector {
    std::vector<std::complex<double>> entries;
    double theta_rad = 0.0;
    double element_spacing_over_lambda = 0.5;

    std::size_t size() const { return entries.size(); }
};

/// One candidate eavesdropper location on the map (2-D or 3-D coordinates in meters).
struct CkmLocation {
    std::vector<double> coords_m;
    std::string label;
};

/*!
 * Channel knowledge map: observed expected-power samples gamma(theta_l, p_j),
 * in watts, for every beam direction l and candidate location j. Multiple
 * samples per (l, j) cell represent different fading realizations. All
 * samples were recorded at transmit power `p_tx_ref_watts`.
 *
 * Index convention: samples[l][j] is the sample list of cell (l, j).
 */
struct Ckm {
    std::vector<double> angles_rad;                       // L beam directions
    std::vector<CkmLocation> locations;                   // J candidate locations
    std::vector<std::vector<std::vector<double>>> samples; // [L][J] -> sample list (W)
    double p_tx_ref_watts = 0.0;

    std::size_t n_beams() const { return angles_rad.size(); }
    std::size_t n_locations() const { return locations.size(); }

    /// Throws std::invalid_argument on any violated structural invariant
    /// (empty cells, negative samples, duplicate angles, bad dimensions).
    void validate() const;
};

/*!
 * Normalized input to the allocation problem: per-beam receiver gains
 * alpha[l] (1/W), worst-case eavesdropper gains beta[j][l] (1/W) for each
 * candidate location j, and the total power budget.
 *
 * Beam l can carry secret bits toward location j only when
 * alpha[l] >= beta[j][l]; those index sets are fixed once the scenario exists.
 */
struct Scenario {
    std::vector<double> alpha;              // length L, 1/W
    std::vector<std::vector<double>> beta;  // [J][L], 1/W
    double p_tx_watts = 0.0;
    std::vector<std::string> beam_labels;     // optional, empty or length L
    std::vector<std::string> location_labels; // optional, empty or length J

    std::size_t n_beams() const { return alpha.size(); }
    std::size_t n_locations() const { return beta.size(); }

    void validate() const;
};

/// Array response of an n_t-element uniform linear array toward theta.
/// Throws std::invalid_argument for non-finite theta, n_t == 0 or d/lambda <= 0.
SteeringVector steering_vector(double theta_rad, std::size_t n_t, double d_over_lambda);

/// Received SNR (p_tx / noise_power) * |channel^H w|^2. Dimensionless.
double beam_snr(const std::vector<std::complex<double>>& channel,
                const SteeringVector& w,
                double p_tx_watts,
                double noise_power_watts);

/// Worst fading realization per cell, normalized by the recorded transmit
/// power: beta[j][l] = max(samples[l][j]) / p_tx_ref. Result is J x L.
std::vector<std::vector<double>> worst_case_beta(const Ckm& ckm);

/// Assembles the normalized scenario from a CKM and the measured receiver
/// SNR per beam (at the CKM reference power). `p_tx_watts` is the budget the
/// allocation will run with.
Scenario build_scenario(const Ckm& ckm,
                        const std::vector<double>& rx_gains_watts,
                        double p_tx_watts);

/// Parses the CKM text format (see docs/formats.md). `origin` is used in
/// error messages only. Throws ParseError with file/line on malformed input.
Ckm load_ckm(std::istream& in, const std::string& origin);

/// Reads and parses a CKM file from disk.
Ckm load_ckm_file(const std::string& path);

} // namespace secbeam
