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

#include "mdf/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mdf {

GainParam::GainParam(double g) : g_(g) {
    if (!std::isfinite(g) || g <= 0.0) {
        throw std::invalid_argument("gain g must be finite and positive");
    }
}

TwoModeFockState::TwoModeFockState(std::vector<FockTerm> terms, double tail_mass)
    : terms_(std::move(terms)), tail_mass_(tail_mass) {
    if (!(tail_mass >= 0.0 && tail_mass <= 1.0)) {
        throw std::invalid_argument("tail_mass must lie in [0,1]");
    }
    for (const auto &t : terms_) {
        if (t.n < 0 || t.m < 0) {
            throw std::invalid_argument("photon numbers must be non-negative");
        }
    }
    std::sort(terms_.begin(), terms_.end(), [](const FockTerm &a, const FockTerm &b) {
        return std::pair(a.n, a.m) < std::pair(b.n, b.m);
    });
    for (std::size_t i = 1; i < terms_.size(); ++i) {
        if (terms_[i].n == terms_[i - 1].n && terms_[i].m == terms_[i - 1].m) {
            throw std::invalid_argument("duplicate basis vector in state");
        }
    }
    finish_construction();
    double total = retained_probability() + tail_mass_;
    if (std::abs(total - 1.0) > 1e-10) {
        throw std::invalid_argument("state is not normalised: sum |a|^2 + tail = " + std::to_string(total));
    }
}

void TwoModeFockState::finish_construction() {
    truncation_bound_ = 0;
    max_n_ = 0;
    max_m_ = 0;
    for (const auto &t : terms_) {
        truncation_bound_ = std::max(truncation_bound_, t.n + t.m);
        max_n_ = std::max(max_n_, t.n);
        max_m_ = std::max(max_m_, t.m);
    }
}

LogAmplitude TwoModeFockState::amplitude_at(int n, int m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), std::pair(n, m), [](const FockTerm &t, const std::pair<int, int> &key) {
        return std::pair(t.n, t.m) < key;
    });
    if (it == terms_.end() || it->n != n || it->m != m) {
        return LogAmplitude::zero();
    }
    return it->amplitude.scaled(log_scale_);
}

double TwoModeFockState::retained_probability() const {
    CompensatedSum acc;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        acc.add(probability(i));
    }
    return acc.value();
}

std::pair<double, double> TwoModeFockState::mean_photons() const {
    CompensatedSum n1;
    CompensatedSum n2;
    CompensatedSum total;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        double p = probability(i);
        n1.add(p * terms_[i].n);
        n2.add(p * terms_[i].m);
        total.add(p);
    }
    return {n1.value() / total.value(), n2.value() / total.value()};
}

std::vector<double> TwoModeFockState::total_photon_distribution() const {
    std::vector<double> out(static_cast<std::size_t>(truncation_bound_) + 1, 0.0);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        out[static_cast<std::size_t>(terms_[i].n + terms_[i].m)] += probability(i);
    }
    return out;
}

TwoModeFockState TwoModeFockState::mode_swapped() const {
    std::vector<FockTerm> swapped;
    swapped.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        swapped.push_back({terms_[i].m, terms_[i].n, amplitude(i)});
    }
    return TwoModeFockState(std::move(swapped), tail_mass_);
}

nlohmann::json TwoModeFockState::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        LogAmplitude a = amplitude(i);
        terms.push_back({terms_[i].n, terms_[i].m, a.sign(), a.is_zero() ? 0.0 : a.log_mag()});
    }
    return {{"basis", "fock2"}, {"trunc", truncation_bound_}, {"tail", tail_mass_}, {"terms", std::move(terms)}};
}

TwoModeFockState TwoModeFockState::from_json(const nlohmann::json &j) {
    if (j.at("basis").get<std::string>() != "fock2") {
        throw std::invalid_argument("unsupported basis '" + j.at("basis").get<std::string>() + "'");
    }
    std::vector<FockTerm> terms;
    for (const auto &t : j.at("terms")) {
        terms.push_back({t.at(0).get<int>(), t.at(1).get<int>(), LogAmplitude(t.at(2).get<int>(), t.at(3).get<double>())});
    }
    TwoModeFockState out(std::move(terms), j.at("tail").get<double>());
    if (out.truncation_bound() > j.at("trunc").get<int>()) {
        throw std::invalid_argument("state terms exceed the declared truncation bound");
    }
    return out;
}

StateEnsemble::StateEnsemble(std::vector<Component> components) : components_(std::move(components)) {
    if (components_.empty()) {
        throw std::invalid_argument("ensemble needs at least one component");
    }
    double total = 0.0;
    for (const auto &c : components_) {
        if (!(c.weight > 0.0 && c.weight <= 1.0)) {
            throw std::invalid_argument("ensemble weights must lie in (0,1]");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("ensemble weights must sum to 1");
    }
}

StateEnsemble::StateEnsemble(TwoModeFockState state) {
    components_.push_back({1.0, std::move(state)});
}

double StateEnsemble::tail_mass() const {
    double t = 0.0;
    for (const auto &c : components_) {
        t += c.weight * c.state.tail_mass();
    }
    return t;
}

int StateEnsemble::max_n() const {
    int out = 0;
    for (const auto &c : components_) {
        out = std::max(out, c.state.max_n());
    }
    return out;
}

int StateEnsemble::max_m() const {
    int out = 0;
    for (const auto &c : components_) {
        out = std::max(out, c.state.max_m());
    }
    return out;
}

namespace {

// ln of the normalised marginal weights of |Phi>: gamma_ij^2 = a_i b_j with
//   a_i = cosh^-3 x^i (2i+1)!/(i!)^2,  b_j = cosh^-1 x^j (2j)!/(j!)^2,  x = tanh^2/4.
// sum_i a_i = sum_j b_j = 1 because sum (2i+1) C(2i,i) x^i = (1-4x)^-3/2.
std::vector<double> marginal_until_tail(double log_x, double log_norm, bool odd, double tail_goal) {
    std::vector<double> out;
    long double cumulative = 0.0L;
    for (int i = 0;; ++i) {
        double lf = odd ? log_factorial(2 * i + 1) : log_factorial(2 * i);
        double la = log_norm + i * log_x + lf - 2.0 * log_factorial(i);
        out.push_back(la);
        cumulative += std::exp(static_cast<long double>(la));
        // The weights are unimodal, so once past the mode and below the goal
        // the remaining tail is below goal as well.
        if (1.0L - cumulative < tail_goal && i > 0 && la < out[static_cast<std::size_t>(i) - 1]) {
            break;
        }
        if (i > 20000000) {
            throw std::runtime_error("macro_qubit: marginal failed to converge");
        }
    }
    return out;
}

}  // namespace

TwoModeFockState macro_qubit(GainParam g, Orientation orientation, double tail_tolerance) {
    if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
        throw std::invalid_argument("tail_tolerance must lie in (0,1)");
    }
    double t = std::tanh(g.value());
    double log_x = 2.0 * std::log(t / 2.0);
    double log_cosh = std::log(std::cosh(g.value()));
    double goal = tail_tolerance * 1e-3;
    std::vector<double> log_a = marginal_until_tail(log_x, -3.0 * log_cosh, true, goal);
    std::vector<double> log_b = marginal_until_tail(log_x, -1.0 * log_cosh, false, goal);

    struct Candidate {
        double log_p;
        int i;
        int j;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(log_a.size() * log_b.size());
    double log_floor = std::log(goal) - std::log(static_cast<double>(log_a.size() * log_b.size()));
    for (std::size_t i = 0; i < log_a.size(); ++i) {
        for (std::size_t j = 0; j < log_b.size(); ++j) {
            double lp = log_a[i] + log_b[j];
            if (lp >= log_floor) {
                candidates.push_back({lp, static_cast<int>(i), static_cast<int>(j)});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate &a, const Candidate &b) {
        if (a.log_p != b.log_p) {
            return a.log_p > b.log_p;
        }
        return std::pair(a.i, a.j) < std::pair(b.i, b.j);
    });

    std::vector<FockTerm> terms;
    long double kept = 0.0L;
    for (const auto &c : candidates) {
        if (1.0L - kept < tail_tolerance) {
            break;
        }
        kept += std::exp(static_cast<long double>(c.log_p));
        int n = 2 * c.i + 1;
        int m = 2 * c.j;
        if (orientation == Orientation::PhiPerp) {
            std::swap(n, m);
        }
        terms.push_back({n, m, LogAmplitude(1, 0.5 * c.log_p)});
    }
    double tail = std::max(0.0, static_cast<double>(1.0L - kept));
    return TwoModeFockState(std::move(terms), tail);
}

TwoModeFockState uniform_diff_state(int S0) {
    if (S0 < 0) {
        throw std::invalid_argument("S0 must be non-negative");
    }
    std::vector<FockTerm> terms;
    double la = -0.5 * std::log(static_cast<double>(S0) + 1.0);
    for (int n = 0; n <= S0; ++n) {
        terms.push_back({n, S0 - n, LogAmplitude(1, la)});
    }
    return TwoModeFockState(std::move(terms), 0.0);
}

StateEnsemble macro_qubit_mixture(GainParam g, double tail_tolerance) {
    TwoModeFockState phi = macro_qubit(g, Orientation::Phi, tail_tolerance);
    TwoModeFockState perp = phi.mode_swapped();
    return StateEnsemble({{0.5, std::move(phi)}, {0.5, std::move(perp)}});
}

}  // namespace mdf
