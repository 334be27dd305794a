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


#ifndef MDF_OPERATIONAL_HPP
#define MDF_OPERATIONAL_HPP

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mdf/errors.hpp"
#include "mdf/ideal_filter.hpp"
#include "mdf/parallel.hpp"
#include "mdf/states.hpp"

// Port conventions used throughout this header.
//
// The tap sends v of the n mode-1 photons and w of the m mode-2 photons to
// the detection arm, with amplitude c_v^(n) c_w^(m) where
//     c_v^(n) = sqrt(C(n,v) r^v (1-r)^(n-v)).
// The balanced PBS then maps |v,w> onto detector counts (K, L) with
//     <K,L|U|v,w> = sqrt(K! L! / (v! w! 2^S)) * krawtchouk_sum(v, w, L),
// i.e. L counts the symmetric combination of the two reflected modes and K
// the antisymmetric one. The outcome is reported as S = K + L and
// Delta = L - K. Differences of the reflected and transmitted beams are
// Delta_r = v - w and Delta_t = k - l.

namespace mdf {

class TapSpec {
   public:
    explicit TapSpec(double r);
    double r() const {
        return r_;
    }

   private:
    double r_;
};

class DetectionOutcome {
   public:
    /// Requires |Delta| <= S and S + Delta even.
    DetectionOutcome(int S, int Delta);
    static DetectionOutcome from_counts(int K, int L) {
        return {K + L, L - K};
    }
    int S() const {
        return S_;
    }
    int Delta() const {
        return Delta_;
    }
    int K() const {
        return (S_ - Delta_) / 2;
    }
    int L() const {
        return (S_ + Delta_) / 2;
    }

   private:
    int S_;
    int Delta_;
};

/// Probability over an integer difference d in [-S_ref, S_ref].
class DiffDistribution {
   public:
    DiffDistribution() = default;
    DiffDistribution(int S_ref, std::vector<double> probs);

    int S_ref() const {
        return S_ref_;
    }
    double operator()(int d) const {
        return (d < -S_ref_ || d > S_ref_) ? 0.0 : probs_[static_cast<std::size_t>(d + S_ref_)];
    }
    /// probs()[i] is the probability of d = i - S_ref.
    const std::vector<double> &probs() const {
        return probs_;
    }
    double total() const;

   private:
    int S_ref_ = 0;
    std::vector<double> probs_;
};

struct TrustPolicy {
    TrustPolicy(int delta_th, double trust);
    int delta_th;
    double trust;
};

/// p^{S,Delta}(Delta_r): probability that a Fock input |n,m> with n + m = S
/// and n - m = Delta_r produced the outcome, i.e.
///     K! L! / (n! m! 2^S) * krawtchouk_sum(n, m, L)^2,
/// which sums to one over Delta_r by unitarity of the splitter.
DiffDistribution pbs_conditional_diff(DetectionOutcome out);

/// sum_{|d| >= delta_th} d(d).
double acceptance_probability(const DiffDistribution &d, int delta_th);

bool shutter_decision(const DiffDistribution &d, const TrustPolicy &policy);

/// Conditional transmitted distribution p(k, l) given the outcome.
struct ConditionalJoint {
    JointPhotonDistribution p;  // normalised over the retained support
    double outcome_probability = 0.0;
    std::vector<double> component_outcome_probability;
};

/// |A(k,l)|^2 for one pure component, not normalised; its total is the
/// probability of the outcome. A(k,l) sums coherently over v:
///     A(k,l) = sum_v xi(k+v, l+w) c_v^(k+v) c_w^(l+w) <K,L|U|v,w>,  w = S - v.
/// Rows are evaluated in parallel; each (k, l) is accumulated in increasing v.
JointPhotonDistribution transmitted_unnormalized(const TwoModeFockState &state, TapSpec tap, DetectionOutcome out,
                                                 Parallelism par = {});

/// Ensemble conditional: sum_c w_c |A_c|^2 / sum_c w_c P_c.
/// Throws DegenerateConditioning if the outcome has probability zero.
ConditionalJoint transmitted_joint(const StateEnsemble &state, TapSpec tap, DetectionOutcome out,
                                   Parallelism par = {});

/// p(Delta_t) = sum_{S_t} p(S_t, Delta_t) with Delta_t = k - l.
DiffDistribution transmitted_diff_marginal(const JointPhotonDistribution &joint);

/// Conditional transmitted distribution after a loss channel of reflectivity
/// R on both transmitted modes (detection arm lossless). The loss
/// beam splitter's Kronecker deltas force the environment to be traced
/// diagonally, so this is binomial thinning of transmitted_joint.
ConditionalJoint lossy_transmitted_joint(const StateEnsemble &state, TapSpec tap, DetectionOutcome out,
                                         LossChannel loss, Parallelism par = {});

/// Single-copy conditional tables for every split (K1, L1) with
/// 0 <= K1 <= K_max, 0 <= L1 <= L_max. Each table is the unnormalised
/// sum_c w_c |A_c|^2 for outcome (K1, L1). The Delta_t marginal of every table
/// is always kept; the full (k, l) tables only when store_joint is set.
class ConditionalFamily {
   public:
    ConditionalFamily(const StateEnsemble &state, TapSpec tap, int K_max, int L_max, bool store_joint,
                      Parallelism par = {});

    int K_max() const {
        return K_max_;
    }
    int L_max() const {
        return L_max_;
    }
    bool has_joint() const {
        return store_joint_;
    }
    int rows() const {
        return rows_;
    }
    int cols() const {
        return cols_;
    }
    const JointPhotonDistribution &joint(int K1, int L1) const;
    /// Unnormalised Delta_t marginal, index d + cols - 1.
    const std::vector<double> &diff(int K1, int L1) const;
    double outcome_probability(int K1, int L1) const;
    double tail_mass() const {
        return tail_mass_;
    }

   private:
    std::size_t slot(int K1, int L1) const;
    int K_max_;
    int L_max_;
    bool store_joint_;
    int rows_ = 0;
    int cols_ = 0;
    double tail_mass_ = 0.0;
    std::vector<JointPhotonDistribution> joints_;
    std::vector<std::vector<double>> diffs_;
    std::vector<double> outcome_probs_;
};

/// Two independent, identically prepared copies feeding the same detectors:
///     p2(k,l) ~ sum_{K1,L1} J^{K1,L1} (*) J^{K-K1,L-L1}  (2-D convolution)
/// normalised by the total two-copy outcome probability. Large grids are
/// convolved with FFTW, small ones directly.
ConditionalJoint two_mode_convolution(const ConditionalFamily &family, DetectionOutcome out,
                                      Parallelism par = {});

/// Delta_t marginal of two_mode_convolution, obtained by convolving the
/// single-copy marginals (Delta_t adds across copies).
DiffDistribution two_mode_diff_marginal(const ConditionalFamily &family, DetectionOutcome out,
                                        double *outcome_probability = nullptr);

enum class Weighting { Detection, Uniform };

struct ProcessedOptions {
    Weighting weighting = Weighting::Detection;
    /// Ensemble component whose distribution is reported.
    std::size_t component = 0;
    /// Photon totals S whose probability of appearing at all is below this
    /// are not examined.
    double s_tail = 1e-9;
    Parallelism par{};
};

struct ProcessedSlice {
    int S;
    double outcome_probability;  // of the reported component
    double acceptance;           // p(|Delta_t| >= delta_th), ensemble
    bool accepted;
};

struct ProcessedResult {
    JointPhotonDistribution p;
    DistinguishabilityReport report;
    std::vector<ProcessedSlice> slices;
    double accepted_weight = 0.0;
};

/// Largest reflected total S worth examining: the reflected photon number
/// exceeds it with probability below s_tail.
int reflected_total_bound(const StateEnsemble &state, TapSpec tap, double s_tail);

/// Sums the Delta = 0 conditional distributions of one component over the
/// accepted totals S, where S is accepted iff the ensemble's
/// p(|Delta_t| >= delta_th) reaches the trust level. Detection weighting uses
/// the component's outcome probability p(S, Delta = 0); uniform weighting
/// gives each accepted S equal weight. report.success_prob is the total
/// accepted detection probability. Throws EmptyAcceptedSet if nothing is
/// accepted.
ProcessedResult processed_photon_distribution(const StateEnsemble &state, TapSpec tap, const TrustPolicy &policy,
                                              const ProcessedOptions &options = {});

}  // namespace mdf

#endif
