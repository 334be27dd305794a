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


#ifndef MDF_IDEAL_FILTER_HPP
#define MDF_IDEAL_FILTER_HPP

#include <optional>
#include <span>
#include <vector>

#include "mdf/parallel.hpp"
#include "mdf/states.hpp"

namespace mdf {

/// Minimum |n - m| kept by the filter, in photons.
class FilterThreshold {
   public:
    explicit FilterThreshold(int delta_th);
    int value() const {
        return delta_th_;
    }
    bool passes(int n, int m) const {
        return std::abs(n - m) >= delta_th_;
    }

   private:
    int delta_th_;
};

/// Loss modelled as a beam splitter of reflectivity R in front of the
/// detector; the surviving fraction is 1 - R.
class LossChannel {
   public:
    explicit LossChannel(double R);
    double R() const {
        return R_;
    }
    double transmissivity() const {
        return 1.0 - R_;
    }

   private:
    double R_;
};

/// Dense probability table p(k, l) for 0 <= k < rows, 0 <= l < cols.
/// discarded_mass is the probability that lies outside the table, either
/// because of state truncation or because the grid was trimmed.
class JointPhotonDistribution {
   public:
    JointPhotonDistribution() = default;
    JointPhotonDistribution(int rows, int cols);

    int rows() const {
        return rows_;
    }
    int cols() const {
        return cols_;
    }
    double operator()(int k, int l) const {
        return (k < 0 || l < 0 || k >= rows_ || l >= cols_) ? 0.0 : data_[index(k, l)];
    }
    double &at(int k, int l) {
        return data_[index(k, l)];
    }
    std::span<double> row(int k) {
        return {data_.data() + index(k, 0), static_cast<std::size_t>(cols_)};
    }
    std::span<const double> row(int k) const {
        return {data_.data() + index(k, 0), static_cast<std::size_t>(cols_)};
    }

    double discarded_mass = 0.0;

    double total() const;
    /// Probability of k - l = d for d in [-(cols-1), rows-1], indexed by d + cols - 1.
    std::vector<double> difference_marginal() const;
    /// Drops trailing rows and columns while the dropped mass stays below
    /// budget (split evenly between the two axes); adds it to discarded_mass.
    void trim(double budget);

   private:
    std::size_t index(int k, int l) const {
        return static_cast<std::size_t>(k) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(l);
    }
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

/// Distinguishability of the pair p(k,l) and its mirror image p(l,k).
///
/// v = P(S1) - P_mirror(S1) with S1 = {k >= l}, S2 = {k < l}. Both mass terms
/// are renormalised to the retained probability. When the diagonal k = l is
/// empty this is P_S1 - P_S2; in general v = P_S1 - P_S2 - diagonal, so a
/// vacuum-dominated distribution has v = 0.
struct DistinguishabilityReport {
    double v = 0.0;
    double P_S1 = 0.0;
    double P_S2 = 0.0;
    double diagonal = 0.0;
    double success_prob = 1.0;
};

struct ProjectionResult {
    std::optional<TwoModeFockState> state;  // empty when nothing survives
    double success_prob = 0.0;
};

struct EnsembleProjectionResult {
    std::optional<StateEnsemble> ensemble;
    double success_prob = 0.0;
};

/// Keeps components with |n - m| >= delta_th and renormalises. success_prob
/// is the surviving retained mass; the truncation tail is carried along in
/// proportion, tail' = tail / (survivors + tail).
ProjectionResult project_mdf(const TwoModeFockState &state, FilterThreshold th);

/// Component-wise projection; new weights are w_c s_c / sum_c w_c s_c.
EnsembleProjectionResult project_mdf(const StateEnsemble &ensemble, FilterThreshold th);

/// Default mass budget for trimming the (k, l) grid.
inline constexpr double kGridTrimBudget = 1e-6;

/// Photon-number distribution of the filtered state after binomial loss on
/// each mode:
///     p(k,l) = sum_{|n-m| >= delta_th} |a~_nm|^2 B_n(k) B_m(l),
///     B_x(y) = C(x,y) (1-R)^y R^(x-y).
/// Evaluated separably: C[n][l] = sum_m W[n][m] B_m(l), then
/// p[k][l] = sum_n B_n(k) C[n][l], rows of p computed in parallel.
/// Throws std::domain_error when no component survives the filter.
JointPhotonDistribution lossy_photon_distribution(const StateEnsemble &state, LossChannel loss, FilterThreshold th,
                                                  Parallelism par = {}, double trim_budget = kGridTrimBudget);

/// Same as above, also returning the filter success probability.
JointPhotonDistribution lossy_photon_distribution(const StateEnsemble &state, LossChannel loss, FilterThreshold th,
                                                  double *success_prob, Parallelism par = {},
                                                  double trim_budget = kGridTrimBudget);

/// Binomial thinning of a table, both axes with the same channel.
JointPhotonDistribution apply_loss(const JointPhotonDistribution &p, LossChannel loss, Parallelism par = {});

DistinguishabilityReport distinguishability(const JointPhotonDistribution &p, double success_prob = 1.0);

struct LossSweepRow {
    double R;
    double v;
    double success_prob;
};

/// (R, v, p_s) for |Phi> at gain g. p_s is the filter survival probability,
/// which loss does not change.
std::vector<LossSweepRow> distinguishability_vs_loss(GainParam g, FilterThreshold th, std::span<const double> R_grid,
                                                     double tail_tolerance = kDefaultTailTolerance,
                                                     Parallelism par = {});

struct Peak {
    int k = -1;
    int l = -1;
    double value = 0.0;
};

/// Maxima of a distribution: over each half-plane, and along the first
/// occupied column (k = k_min, the left edge) and first occupied row
/// (l = l_min, the bottom edge).
struct PeakSummary {
    Peak s1;
    Peak s2;
    Peak left_edge;
    Peak bottom_edge;
};

PeakSummary peak_summary(const JointPhotonDistribution &p);

/// Depth of the near-diagonal gap opened by a filter of width delta_th:
/// the half-width of the band around k = l whose |k - l| marginal stays
/// below 1e-3 of its maximum, divided by delta_th and clamped to [0, 1].
/// A hard cut scores 1; a fully filled-in gap scores 0. Zero when
/// delta_th = 0.
double gap_depth(const JointPhotonDistribution &p, FilterThreshold th);

}  // namespace mdf

#endif
