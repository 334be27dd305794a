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

#ifndef MDF_STATES_HPP
#define MDF_STATES_HPP

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mdf/numerics.hpp"

namespace mdf {

/// Parametric gain g of the phase-covariant amplifier (dimensionless, > 0).
class GainParam {
   public:
    explicit GainParam(double g);
    double value() const {
        return g_;
    }

   private:
    double g_;
};

enum class Orientation { Phi, PhiPerp };

/// One basis component n photons in mode 1, m photons in mode 2.
struct FockTerm {
    int n = 0;
    int m = 0;
    LogAmplitude amplitude;
};

/// Sparse pure state sum_{n,m} xi_nm |n,m>.
///
/// Terms are kept sorted by (n, m). Amplitudes are stored together with a
/// common log scale so that renormalisation (after a projection, say) does
/// not rewrite every term; amplitude(i) applies the scale.
class TwoModeFockState {
   public:
    /// Builds a state from terms; duplicate (n,m) keys are rejected.
    /// Requires sum |a|^2 + tail_mass = 1 within 1e-10.
    TwoModeFockState(std::vector<FockTerm> terms, double tail_mass);

    std::size_t size() const {
        return terms_.size();
    }
    int n(std::size_t i) const {
        return terms_[i].n;
    }
    int m(std::size_t i) const {
        return terms_[i].m;
    }
    LogAmplitude amplitude(std::size_t i) const {
        return terms_[i].amplitude.scaled(log_scale_);
    }
    double probability(std::size_t i) const {
        return std::exp(amplitude(i).log_prob());
    }
    /// Amplitude of |n,m>, zero if absent.
    LogAmplitude amplitude_at(int n, int m) const;

    double tail_mass() const {
        return tail_mass_;
    }
    /// Largest n+m over the retained terms.
    int truncation_bound() const {
        return truncation_bound_;
    }
    int max_n() const {
        return max_n_;
    }
    int max_m() const {
        return max_m_;
    }
    /// sum |a|^2 over retained terms.
    double retained_probability() const;

    /// Mean photon numbers (mode 1, mode 2) over retained terms, normalised by
    /// the retained probability.
    std::pair<double, double> mean_photons() const;

    /// Photon-number distribution of n+m over retained terms, indexed by total.
    std::vector<double> total_photon_distribution() const;

    TwoModeFockState mode_swapped() const;

    /// Returns a copy whose retained terms are those for which keep(n, m) is
    /// true, rescaled so that they carry 1 - new_tail of probability.
    template <typename Pred>
    TwoModeFockState filtered(Pred keep, double new_tail) const;

    nlohmann::json to_json() const;
    static TwoModeFockState from_json(const nlohmann::json &j);

   private:
    TwoModeFockState() = default;
    void finish_construction();

    std::vector<FockTerm> terms_;
    double tail_mass_ = 0.0;
    double log_scale_ = 0.0;
    int truncation_bound_ = 0;
    int max_n_ = 0;
    int max_m_ = 0;
};

/// Incoherent mixture sum_c w_c |psi_c><psi_c| of pure two-mode states.
class StateEnsemble {
   public:
    struct Component {
        double weight;
        TwoModeFockState state;
    };

    /// Requires weights in (0, 1] summing to 1 within 1e-12.
    explicit StateEnsemble(std::vector<Component> components);
    /// A pure state as a one-component ensemble.
    StateEnsemble(TwoModeFockState state);  // NOLINT(google-explicit-constructor)

    const std::vector<Component> &components() const {
        return components_;
    }
    std::size_t size() const {
        return components_.size();
    }
    double tail_mass() const;
    int max_n() const;
    int max_m() const;

   private:
    std::vector<Component> components_;
};

inline constexpr double kDefaultTailTolerance = 1e-9;

/// Macro-qubit |Phi> = sum_ij gamma_ij |2i+1, 2j> (or |Phi_perp> with the modes
/// swapped), where
///     gamma_ij = cosh(g)^-2 (tanh(g)/2)^(i+j) sqrt((2i+1)! (2j)!) / (i! j!).
/// Terms are retained in decreasing-probability order until the discarded
/// probability falls below tail_tolerance; the remainder is recorded as
/// tail_mass.
TwoModeFockState macro_qubit(GainParam g, Orientation orientation, double tail_tolerance = kDefaultTailTolerance);

/// (S0+1)^(-1/2) sum_{n=0}^{S0} |n, S0-n>.
TwoModeFockState uniform_diff_state(int S0);

/// (|Phi><Phi| + |Phi_perp><Phi_perp|) / 2.
StateEnsemble macro_qubit_mixture(GainParam g, double tail_tolerance = kDefaultTailTolerance);

// Template implementation.

template <typename Pred>
TwoModeFockState TwoModeFockState::filtered(Pred keep, double new_tail) const {
    TwoModeFockState out;
    std::vector<LogAmplitude> kept_probs;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (keep(terms_[i].n, terms_[i].m)) {
            out.terms_.push_back(terms_[i]);
            kept_probs.push_back(terms_[i].amplitude * terms_[i].amplitude);
        }
    }
    out.tail_mass_ = new_tail;
    LogAmplitude total = signed_logsum(kept_probs);
    out.log_scale_ = total.is_zero() ? 0.0 : 0.5 * (std::log1p(-new_tail) - total.log_mag());
    out.finish_construction();
    return out;
}

}  // namespace mdf

#endif
