// Copyright 2026 The mdf-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>

#include "mdf/states.hpp"

namespace mdf {
namespace {

TEST(TwoModeFockState, RejectsBadInput) {
    EXPECT_THROW(TwoModeFockState({{1, 0, LogAmplitude::one()}, {1, 0, LogAmplitude::one()}}, 0.0), std::invalid_argument);
    EXPECT_THROW(TwoModeFockState({{1, 0, LogAmplitude::from_real(0.5)}}, 0.0), std::invalid_argument);
    EXPECT_THROW(TwoModeFockState({{-1, 0, LogAmplitude::one()}}, 0.0), std::invalid_argument);
    EXPECT_NO_THROW(TwoModeFockState({{1, 0, LogAmplitude::from_real(-1.0)}}, 0.0));
}

TEST(TwoModeFockState, AccessorsAndBounds) {
    double a = 1.0 / std::sqrt(3.0);
    TwoModeFockState s({{3, 1, LogAmplitude::from_real(a)}, {0, 2, LogAmplitude::from_real(-a)}, {1, 1, LogAmplitude::from_real(a)}}, 0.0);
    EXPECT_EQ(s.size(), 3u);
    EXPECT_EQ(s.truncation_bound(), 4);
    EXPECT_EQ(s.max_n(), 3);
    EXPECT_EQ(s.max_m(), 2);
    EXPECT_NEAR(s.amplitude_at(0, 2).to_real(), -a, 1e-15);
    EXPECT_TRUE(s.amplitude_at(2, 2).is_zero());
    auto dist = s.total_photon_distribution();
    ASSERT_EQ(dist.size(), 5u);
    EXPECT_NEAR(dist[2], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(dist[4], 1.0 / 3.0, 1e-15);
}

TEST(TwoModeFockState, JsonRoundTrip) {
    TwoModeFockState s = macro_qubit(GainParam(0.4), Orientation::PhiPerp, 1e-6);
    nlohmann::json j = s.to_json();
    EXPECT_EQ(j.at("basis"), "fock2");
    EXPECT_EQ(j.at("trunc").get<int>(), s.truncation_bound());
    TwoModeFockState back = TwoModeFockState::from_json(j);
    ASSERT_EQ(back.size(), s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(back.n(i), s.n(i));
        EXPECT_EQ(back.m(i), s.m(i));
        EXPECT_EQ(back.amplitude(i), s.amplitude(i));
    }
    EXPECT_EQ(back.tail_mass(), s.tail_mass());
    j["basis"] = "fock3";
    EXPECT_THROW(TwoModeFockState::from_json(j), std::invalid_argument);
}

TEST(MacroQubit, ZeroGainLimitIsSinglePhoton) {
    TwoModeFockState s = macro_qubit(GainParam(1e-9), Orientation::Phi, 1e-12);
    ASSERT_GE(s.size(), 1u);
    EXPECT_NEAR(s.amplitude_at(1, 0).to_real(), 1.0, 1e-12);
    EXPECT_NEAR(s.probability(0) + s.tail_mass(), 1.0, 1e-12);
}

TEST(MacroQubit, RejectsBadTolerance) {
    EXPECT_THROW(macro_qubit(GainParam(1.0), Orientation::Phi, 0.0), std::invalid_argument);
    EXPECT_THROW(macro_qubit(GainParam(1.0), Orientation::Phi, 1.0), std::invalid_argument);
    EXPECT_THROW(GainParam(0.0), std::invalid_argument);
    EXPECT_THROW(GainParam(-1.0), std::invalid_argument);
    EXPECT_THROW(GainParam(NAN), std::invalid_argument);
}

TEST(MacroQubit, AmplitudesMatchClosedForm) {
    double g = 0.9;
    TwoModeFockState s = macro_qubit(GainParam(g), Orientation::Phi, 1e-12);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            double gamma = std::pow(std::cosh(g), -2) * std::pow(std::tanh(g) / 2, i + j) *
                           std::sqrt(std::tgamma(2 * i + 2) * std::tgamma(2 * j + 1)) / (std::tgamma(i + 1) * std::tgamma(j + 1));
            EXPECT_NEAR(s.amplitude_at(2 * i + 1, 2 * j).to_real() / gamma, 1.0, 1e-12);
        }
    }
}

TEST(MacroQubit, RetainedMassWithinTolerance) {
    // Direct high-cutoff summation of gamma^2 at g = 0.5: it converges to 1.
    double g = 0.5;
    double direct = 0.0;
    for (int i = 0; i < 400; ++i) {
        for (int j = 0; j < 400; ++j) {
            double lg = -4 * std::log(std::cosh(g)) + 2 * (i + j) * std::log(std::tanh(g) / 2) + std::lgamma(2 * i + 2) +
                        std::lgamma(2 * j + 1) - 2 * std::lgamma(i + 1) - 2 * std::lgamma(j + 1);
            direct += std::exp(lg);
        }
    }
    ASSERT_NEAR(direct, 1.0, 1e-13);
    TwoModeFockState s = macro_qubit(GainParam(g), Orientation::Phi, 1e-12);
    double kept = s.retained_probability();
    EXPECT_GE(kept, 1.0 - 1e-12 - 1e-15);
    EXPECT_LE(kept, 1.0 + 1e-15);
    EXPECT_LT(s.tail_mass(), 1e-12);
    EXPECT_NEAR(kept + s.tail_mass(), 1.0, 1e-13);
}

TEST(MacroQubit, MeanPhotonNumberAtWorkingGain) {
    double g = 1.87;
    TwoModeFockState s = macro_qubit(GainParam(g), Orientation::Phi);
    auto [n1, n2] = s.mean_photons();
    double sh2 = std::sinh(g) * std::sinh(g);
    // Exact means are 3 sinh^2 + 1 and sinh^2, total 4 sinh^2 + 1.
    EXPECT_NEAR(n1 + n2, 4 * sh2 + 1, 1e-4);
    EXPECT_NEAR(n1 + n2, 4 * sh2, 1.0 + 1e-4);
}

TEST(MacroQubit, ParitySupportAndOrthogonality) {
    for (double g : {0.3, 0.8, 1.87}) {
        TwoModeFockState phi = macro_qubit(GainParam(g), Orientation::Phi);
        TwoModeFockState perp = macro_qubit(GainParam(g), Orientation::PhiPerp);
        for (std::size_t i = 0; i < phi.size(); ++i) {
            ASSERT_EQ(phi.n(i) % 2, 1);
            ASSERT_EQ(phi.m(i) % 2, 0);
        }
        for (std::size_t i = 0; i < perp.size(); ++i) {
            ASSERT_EQ(perp.n(i) % 2, 0);
            ASSERT_EQ(perp.m(i) % 2, 1);
            ASSERT_TRUE(phi.amplitude_at(perp.n(i), perp.m(i)).is_zero());
        }
    }
}

TEST(MacroQubit, SeededModeCarriesThreeTimesTheExtraPhotons) {
    // The seed photon sits on top: <n> - 1 = 3 <m>.
    for (double g : {0.3, 0.8, 1.87}) {
        TwoModeFockState phi = macro_qubit(GainParam(g), Orientation::Phi, 1e-12);
        auto [n1, n2] = phi.mean_photons();
        double sh2 = std::sinh(g) * std::sinh(g);
        EXPECT_NEAR(n2, sh2, 1e-6 * (1 + sh2)) << g;
        EXPECT_NEAR(n1 - 1.0, 3.0 * n2, 1e-6 * (1 + sh2)) << g;
    }
}

TEST(MacroQubit, PerpIsModeSwap) {
    TwoModeFockState phi = macro_qubit(GainParam(1.1), Orientation::Phi);
    TwoModeFockState perp = macro_qubit(GainParam(1.1), Orientation::PhiPerp);
    ASSERT_EQ(phi.size(), perp.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        EXPECT_EQ(perp.amplitude_at(phi.m(i), phi.n(i)), phi.amplitude(i));
    }
}

TEST(UniformDiffState, Examples) {
    TwoModeFockState s0 = uniform_diff_state(0);
    ASSERT_EQ(s0.size(), 1u);
    EXPECT_NEAR(s0.amplitude_at(0, 0).to_real(), 1.0, 1e-15);
    TwoModeFockState s1 = uniform_diff_state(1);
    EXPECT_NEAR(s1.amplitude_at(0, 1).to_real(), 1 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s1.amplitude_at(1, 0).to_real(), 1 / std::sqrt(2.0), 1e-15);
    TwoModeFockState s200 = uniform_diff_state(200);
    ASSERT_EQ(s200.size(), 201u);
    for (std::size_t i = 0; i < s200.size(); ++i) {
        EXPECT_NEAR(s200.probability(i), 1.0 / 201.0, 1e-15);
        EXPECT_EQ(s200.n(i) + s200.m(i), 200);
    }
    EXPECT_EQ(s200.tail_mass(), 0.0);
    EXPECT_THROW(uniform_diff_state(-1), std::invalid_argument);
}

TEST(Mixture, WeightsAndMirrorMarginals) {
    StateEnsemble mix = macro_qubit_mixture(GainParam(1.87));
    ASSERT_EQ(mix.size(), 2u);
    EXPECT_EQ(mix.components()[0].weight, 0.5);
    EXPECT_EQ(mix.components()[1].weight, 0.5);
    auto [a1, a2] = mix.components()[0].state.mean_photons();
    auto [b1, b2] = mix.components()[1].state.mean_photons();
    EXPECT_DOUBLE_EQ(a1, b2);
    EXPECT_DOUBLE_EQ(a2, b1);
}

TEST(Mixture, TotalPhotonDistributionIsAverage) {
    // Expand the mixture directly: each total N gets 1/2 of each component.
    double g = 0.3;
    StateEnsemble mix = macro_qubit_mixture(GainParam(g));
    std::vector<double> mixed;
    for (const auto &c : mix.components()) {
        auto d = c.state.total_photon_distribution();
        mixed.resize(std::max(mixed.size(), d.size()), 0.0);
        for (std::size_t N = 0; N < d.size(); ++N) {
            mixed[N] += c.weight * d[N];
        }
    }
    for (std::size_t N = 1; N < 12; N += 2) {
        double direct = 0.0;
        for (int i = 0; 2 * i + 1 <= static_cast<int>(N); ++i) {
            int j = (static_cast<int>(N) - 1 - 2 * i) / 2;
            if (2 * i + 1 + 2 * j != static_cast<int>(N)) {
                continue;
            }
            double lg = -4 * std::log(std::cosh(g)) + 2 * (i + j) * std::log(std::tanh(g) / 2) + std::lgamma(2 * i + 2) +
                        std::lgamma(2 * j + 1) - 2 * std::lgamma(i + 1) - 2 * std::lgamma(j + 1);
            direct += std::exp(lg);
        }
        // Phi and Phi_perp put identical mass on every total.
        EXPECT_NEAR(mixed[N], direct, 1e-14) << N;
        EXPECT_EQ(mixed[N - 1], 0.0);
    }
}

TEST(StateEnsemble, ValidatesWeights) {
    TwoModeFockState s = uniform_diff_state(2);
    EXPECT_THROW(StateEnsemble({{0.5, s}, {0.6, s}}), std::invalid_argument);
    EXPECT_THROW(StateEnsemble({{0.0, s}, {1.0, s}}), std::invalid_argument);
    EXPECT_THROW(StateEnsemble(std::vector<StateEnsemble::Component>{}), std::invalid_argument);
    EXPECT_NO_THROW(StateEnsemble({{0.25, s}, {0.75, s}}));
}

}  // namespace
}  // namespace mdf
