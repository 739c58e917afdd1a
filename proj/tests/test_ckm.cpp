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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "secbeam/ckm.hpp"
#include "secbeam/errors.hpp"

using namespace secbeam;

namespace {

double norm2(const std::vector<std::complex<double>>& v) {
    double sum = 0.0;
    for (const auto& z : v)
        sum += std::norm(z);
    return std::sqrt(sum);
}

Ckm small_ckm() {
    Ckm ckm;
    ckm.angles_rad = {0.0, 0.61};
    ckm.locations = {{{12.5, 0.0}, ""}, {{8.1, 4.2}, ""}};
    ckm.p_tx_ref_watts = 10.0;
    ckm.samples = {{{20.0, 14.6, 18.2}, {0.0, 0.0}}, {{0.0}, {2.0, 1.3, 0.7}}};
    return ckm;
}

} // namespace

TEST_CASE("steering vector at boresight is uniform and real") {
    auto w = steering_vector(0.0, 4, 0.5);
    REQUIRE(w.size() == 4);
    for (const auto& z : w.entries) {
        CHECK(z.real() == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(z.imag() == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("steering vector at endfire flips the second element") {
    auto w = steering_vector(std::numbers::pi / 2.0, 2, 0.5);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(w.entries[0].real() == doctest::Approx(r).epsilon(1e-14));
    CHECK(std::abs(w.entries[0].imag()) < 1e-14);
    CHECK(w.entries[1].real() == doctest::Approx(-r).epsilon(1e-14));
    CHECK(std::abs(w.entries[1].imag()) < 1e-12);
}

TEST_CASE("steering vector entries match an independent per-entry evaluation") {
    const double theta = 0.3;
    const std::size_t n = 8;
    auto w = steering_vector(theta, n, 0.5);
    const double mag = 1.0 / std::sqrt(8.0);
    for (std::size_t k = 0; k < n; ++k) {
        double phase = -std::numbers::pi * static_cast<double>(k) * std::sin(theta);
        CHECK(std::abs(w.entries[k]) == doctest::Approx(mag).epsilon(1e-13));
        CHECK(w.entries[k].real() == doctest::Approx(mag * std::cos(phase)).epsilon(1e-12));
        CHECK(w.entries[k].imag() == doctest::Approx(mag * std::sin(phase)).epsilon(1e-12));
    }
}

TEST_CASE("steering vector rejects bad input") {
    CHECK_THROWS_AS(steering_vector(std::nan(""), 4, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(steering_vector(std::numeric_limits<double>::infinity(), 4, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(steering_vector(0.1, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(steering_vector(0.1, 4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(steering_vector(0.1, 4, -0.5), std::invalid_argument);
}

TEST_CASE("property: steering vector norm is 1 across a randomized sweep") {
    std::mt19937_64 rng(20240801);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> spacing(0.05, 2.0);
    std::uniform_int_distribution<std::size_t> n_t(1, 64);
    for (int i = 0; i < 1500; ++i) {
        auto w = steering_vector(angle(rng), n_t(rng), spacing(rng));
        CHECK(std::abs(norm2(w.entries) - 1.0) < 1e-12);
    }
}

TEST_CASE("beam snr of a perfectly aligned unit channel is p over noise") {
    auto w = steering_vector(0.7, 8, 0.5);
    CHECK(beam_snr(w.entries, w, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(beam_snr(w.entries, w, 4.0, 2.0) == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("beam snr of an orthogonal channel is zero") {
    auto w = steering_vector(0.4, 2, 0.5);
    // channel with conj(ch0)*w0 + conj(ch1)*w1 == 0 by construction
    std::vector<std::complex<double>> ch = {-std::conj(w.entries[1]), std::conj(w.entries[0])};
    CHECK(beam_snr(ch, w, 5.0, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("beam snr matches a scalar expansion of the inner product") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    auto w = steering_vector(-0.9, 4, 0.5);
    std::vector<std::complex<double>> ch(4);
    for (auto& z : ch)
        z = {coef(rng), coef(rng)};

    // brute-force real/imag accumulation, no complex arithmetic
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        double ar = ch[k].real(), ai = -ch[k].imag(); // conjugate
        double br = w.entries[k].real(), bi = w.entries[k].imag();
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
    }
    double expected = 3.0 / 0.5 * (re * re + im * im);
    CHECK(beam_snr(ch, w, 3.0, 0.5) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("beam snr input checking") {
    auto w = steering_vector(0.0, 4, 0.5);
    std::vector<std::complex<double>> short_ch(3, {1.0, 0.0});
    CHECK_THROWS_AS(beam_snr(short_ch, w, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(beam_snr(w.entries, w, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(beam_snr(w.entries, w, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("property: beam snr is invariant under a global channel phase") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coef(-1.5, 1.5);
    std::uniform_real_distribution<double> angle(-1.2, 1.2);
    std::uniform_real_distribution<double> phi(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < 1200; ++i) {
        std::size_t n = 1 + (rng() % 8);
        auto w = steering_vector(angle(rng), n, 0.5);
        std::vector<std::complex<double>> ch(n), rotated(n);
        auto rot = std::polar(1.0, phi(rng));
        for (std::size_t k = 0; k < n; ++k) {
            ch[k] = {coef(rng), coef(rng)};
            rotated[k] = ch[k] * rot;
        }
        double a = beam_snr(ch, w, 2.0, 1.0);
        double b = beam_snr(rotated, w, 2.0, 1.0);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("worst-case beta takes the max sample and normalizes") {
    Ckm ckm;
    ckm.angles_rad = {0.0};
    ckm.locations = {{{1.0, 2.0}, ""}};
    ckm.p_tx_ref_watts = 10.0;
    ckm.samples = {{{0.5, 2.0, 1.0}}};
    auto beta = worst_case_beta(ckm);
    REQUIRE(beta.size() == 1);
    REQUIRE(beta[0].size() == 1);
    CHECK(beta[0][0] == 0.2);
}

TEST_CASE("worst-case beta of fully shadowed cells is the zero matrix") {
    Ckm ckm;
    ckm.angles_rad = {0.0, 0.3};
    ckm.locations = {{{1.0, 0.0}, ""}, {{2.0, 0.0}, ""}};
    ckm.p_tx_ref_watts = 5.0;
    ckm.samples = {{{0.0}, {0.0}}, {{0.0}, {0.0}}};
    for (const auto& row : worst_case_beta(ckm))
        for (double v : row)
            CHECK(v == 0.0);
}

TEST_CASE("worst-case beta equals an exhaustive per-cell max") {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> watts(0.0, 30.0);
    Ckm ckm;
    ckm.angles_rad = {0.0, 0.2, 0.5};
    ckm.locations = {{{1.0, 0.0}, ""}, {{0.0, 1.0}, ""}};
    ckm.p_tx_ref_watts = 8.0;
    ckm.samples.assign(3, std::vector<std::vector<double>>(2));
    for (auto& row : ckm.samples)
        for (auto& cell : row)
            for (int s = 0; s < 5; ++s)
                cell.push_back(watts(rng));

    auto beta = worst_case_beta(ckm);
    for (std::size_t l = 0; l < 3; ++l)
        for (std::size_t j = 0; j < 2; ++j) {
            double m = ckm.samples[l][j][0];
            for (double v : ckm.samples[l][j])
                if (v > m)
                    m = v;
            CHECK(beta[j][l] == m / 8.0);
        }
}

TEST_CASE("property: adding a sample never decreases any beta entry") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> watts(0.0, 12.0);
    for (int i = 0; i < 1100; ++i) {
        Ckm ckm;
        ckm.angles_rad = {0.0, 0.4};
        ckm.locations = {{{1.0, 0.0}, ""}, {{0.0, 1.0}, ""}};
        ckm.p_tx_ref_watts = 3.0;
        ckm.samples.assign(2, std::vector<std::vector<double>>(2));
        for (auto& row : ckm.samples)
            for (auto& cell : row) {
                std::size_t n = 1 + (rng() % 4);
                for (std::size_t s = 0; s < n; ++s)
                    cell.push_back(watts(rng));
            }
        auto before = worst_case_beta(ckm);
        std::size_t l = rng() % 2, j = rng() % 2;
        ckm.samples[l][j].push_back(watts(rng));
        auto after = worst_case_beta(ckm);
        for (std::size_t jj = 0; jj < 2; ++jj)
            for (std::size_t ll = 0; ll < 2; ++ll)
                CHECK(after[jj][ll] >= before[jj][ll]);
    }
}

TEST_CASE("property: beta is invariant under sample order within a cell") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> watts(0.0, 9.0);
    for (int i = 0; i < 1000; ++i) {
        Ckm ckm = small_ckm();
        std::size_t l = rng() % 2, j = rng() % 2;
        ckm.samples[l][j].clear();
        std::size_t n = 2 + (rng() % 5);
        for (std::size_t s = 0; s < n; ++s)
            ckm.samples[l][j].push_back(watts(rng));
        auto before = worst_case_beta(ckm);
        std::shuffle(ckm.samples[l][j].begin(), ckm.samples[l][j].end(), rng);
        auto after = worst_case_beta(ckm);
        CHECK(before == after);
    }
}

TEST_CASE("build_scenario normalizes receiver gains by the reference power") {
    auto sc = build_scenario(small_ckm(), {20.0, 2.0}, 10.0);
    REQUIRE(sc.alpha.size() == 2);
    CHECK(sc.alpha[0] == 2.0);
    CHECK(sc.alpha[1] == 0.2);
    CHECK(sc.p_tx_watts == 10.0);
    // worst fading realization per cell, normalized
    CHECK(sc.beta[0][0] == 2.0);
    CHECK(sc.beta[0][1] == 0.0);
    CHECK(sc.beta[1][0] == 0.0);
    CHECK(sc.beta[1][1] == 0.2);
}

TEST_CASE("build_scenario with zero gains yields all-zero alpha") {
    auto sc = build_scenario(small_ckm(), {0.0, 0.0}, 4.0);
    for (double a : sc.alpha)
        CHECK(a == 0.0);
}

TEST_CASE("build_scenario rejects bad input") {
    CHECK_THROWS_AS(build_scenario(small_ckm(), {1.0}, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(build_scenario(small_ckm(), {1.0, 1.0, 1.0}, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(build_scenario(small_ckm(), {1.0, 1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_scenario(small_ckm(), {-1.0, 1.0}, 10.0), std::invalid_argument);
}

TEST_CASE("ckm validation names the offending cell") {
    Ckm ckm = small_ckm();
    ckm.samples[1][0].clear();
    try {
        ckm.validate();
        FAIL("expected a validation error");
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        CHECK(msg.find("beam 2") != std::string::npos);
        CHECK(msg.find("location 1") != std::string::npos);
    }
}

TEST_CASE("ckm file parsing handles the documented grammar") {
    std::istringstream in(
        "# comment\n"
        "n_angles 2\n"
        "n_locations 2\n"
        "p_tx_ref_watts 10\n"
        "angles_deg 0 35\n"
        "location 1 12.5 0.0\n"
        "location 2 8.1 4.2\n"
        "\n"
        "1 1 20.0   # worst realization on the LoS path\n"
        "1 2 0\n"
        "2 1 0\n"
        "2 2 2.0\n"
        "2 2 0.5\n");
    auto ckm = load_ckm(in, "inline");
    CHECK(ckm.n_beams() == 2);
    CHECK(ckm.n_locations() == 2);
    CHECK(ckm.angles_rad[0] == 0.0);
    CHECK(ckm.angles_rad[1] == doctest::Approx(35.0 * std::numbers::pi / 180.0));
    CHECK(ckm.samples[1][1].size() == 2);
    CHECK(ckm.p_tx_ref_watts == 10.0);
}

TEST_CASE("ckm parser reports the line of the first problem") {
    std::istringstream in(
        "n_angles 2\n"
        "n_locations 1\n"
        "p_tx_ref_watts 10\n"
        "angles_rad 0 0.5\n"
        "location 1 0 0\n"
        "1 1 nope\n");
    try {
        load_ckm(in, "bad.ckm");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 6);
        CHECK(e.origin() == "bad.ckm");
    }
}

TEST_CASE("ckm parser rejects missing cells, naming them") {
    std::istringstream in(
        "n_angles 2\n"
        "n_locations 2\n"
        "p_tx_ref_watts 10\n"
        "angles_rad 0 0.5\n"
        "location 1 0 0\n"
        "location 2 1 0\n"
        "1 1 3.0\n"
        "1 2 0.0\n"
        "2 2 1.0\n");
    try {
        load_ckm(in, "sparse.ckm");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        std::string msg = e.what();
        CHECK(msg.find("beam 2") != std::string::npos);
        CHECK(msg.find("location 1") != std::string::npos);
    }
}

TEST_CASE("ckm parser rejects duplicate angles and out-of-range indices") {
    std::istringstream dup(
        "n_angles 2\nn_locations 1\np_tx_ref_watts 1\nangles_rad 0.5 0.5\n"
        "location 1 0 0\n1 1 1\n2 1 1\n");
    CHECK_THROWS_AS(load_ckm(dup, "dup"), std::invalid_argument);

    std::istringstream range(
        "n_angles 1\nn_locations 1\np_tx_ref_watts 1\nangles_rad 0\n"
        "location 1 0 0\n3 1 1\n");
    CHECK_THROWS_AS(load_ckm(range, "range"), ParseError);
}
