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


#include "mdf/operational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mdf {

TapSpec::TapSpec(double r) : r_(r) {
    if (!(r >= 0.0 && r < 1.0)) {
        throw std::invalid_argument("tap reflectivity r must lie in [0,1)");
    }
}

DetectionOutcome::DetectionOutcome(int S, int Delta) : S_(S), Delta_(Delta) {
    if (S < 0 || std::abs(Delta) > S || (S + Delta) % 2 != 0) {
        throw std::invalid_argument("invalid detection outcome S=" + std::to_string(S) + " Delta=" + std::to_string(Delta));
    }
}

DiffDistribution::DiffDistribution(int S_ref, std::vector<double> probs) : S_ref_(S_ref), probs_(std::move(probs)) {
    if (S_ref < 0 || probs_.size() != static_cast<std::size_t>(2 * S_ref + 1)) {
        throw std::invalid_argument("DiffDistribution needs 2*S_ref+1 entries");
    }
}

double DiffDistribution::total() const {
    CompensatedSum acc;
    for (double p : probs_) {
        acc.add(p);
    }
    return acc.value();
}

TrustPolicy::TrustPolicy(int delta_th_, double trust_) : delta_th(delta_th_), trust(trust_) {
    if (delta_th < 0) {
        throw std::invalid_argument("delta_th must be non-negative");
    }
    if (!(trust >= 0.0 && trust <= 1.0)) {
        throw std::invalid_argument("trust must lie in [0,1]");
    }
}

namespace {

double log_pbs_prefactor(int K, int L, int v, int w) {
    return 0.5 * (log_factorial(K) + log_factorial(L) - log_factorial(v) - log_factorial(w) -
                  (v + w) * std::numbers::ln2);
}

/// <K,L|U|v,w> for v = 0..S.
std::vector<double> pbs_row(DetectionOutcome out) {
    const int S = out.S();
    std::vector<double> row(static_cast<std::size_t>(S) + 1, 0.0);
    for (int v = 0; v <= S; ++v) {
        int w = S - v;
        LogAmplitude a = to_log_amplitude(krawtchouk_sum(v, w, out.L()));
        row[static_cast<std::size_t>(v)] = a.scaled(log_pbs_prefactor(out.K(), out.L(), v, w)).to_real();
    }
    return row;
}

/// c[v][n] = c_v^(n) for v <= S, n <= n_max.
std::vector<std::vector<double>> tap_table(double r, int S, int n_max) {
    std::vector<std::vector<double>> c(static_cast<std::size_t>(S) + 1,
                                       std::vector<double>(static_cast<std::size_t>(n_max) + 1, 0.0));
    for (int v = 0; v <= S; ++v) {
        for (int n = v; n <= n_max; ++n) {
            if (r == 0.0) {
                c[static_cast<std::size_t>(v)][static_cast<std::size_t>(n)] = (v == 0) ? 1.0 : 0.0;
                continue;
            }
            double lc = 0.5 * (log_binomial(n, v) + v * std::log(r) + (n - v) * std::log1p(-r));
            c[static_cast<std::size_t>(v)][static_cast<std::size_t>(n)] = std::exp(lc);
        }
    }
    return c;
}

}  // namespace

DiffDistribution pbs_conditional_diff(DetectionOutcome out) {
    const int S = out.S();
    std::vector<double> probs(static_cast<std::size_t>(2 * S + 1), 0.0);
    for (int n = 0; n <= S; ++n) {
        int m = S - n;
        LogAmplitude a = to_log_amplitude(krawtchouk_sum(n, m, out.L()));
        if (a.is_zero()) {
            continue;
        }
        double lp = a.log_prob() + 2.0 * log_pbs_prefactor(out.K(), out.L(), n, m);
        probs[static_cast<std::size_t>(n - m + S)] = std::exp(lp);
    }
    return DiffDistribution(S, std::move(probs));
}

double acceptance_probability(const DiffDistribution &d, int delta_th) {
    CompensatedSum acc;
    for (int x = -d.S_ref(); x <= d.S_ref(); ++x) {
        if (std::abs(x) >= delta_th) {
            acc.add(d(x));
        }
    }
    return acc.value();
}

bool shutter_decision(const DiffDistribution &d, const TrustPolicy &policy) {
    return acceptance_probability(d, policy.delta_th) >= policy.trust;
}

JointPhotonDistribution transmitted_unnormalized(const TwoModeFockState &state, TapSpec tap, DetectionOutcome out,
                                                 Parallelism par) {
    const int S = out.S();
    const int rows = state.max_n() + 1;
    const int cols = state.max_m() + 1;
    JointPhotonDistribution result(rows, cols);
    if (state.size() == 0) {
        return result;
    }
    std::vector<double> M = pbs_row(out);
    auto c = tap_table(tap.r(), S, std::max(rows, cols) - 1);

    // Terms are sorted by (n, m); row_begin[n] indexes the first term with that n.
    std::vector<std::size_t> row_begin(static_cast<std::size_t>(rows) + 1, state.size());
    for (std::size_t i = state.size(); i-- > 0;) {
        row_begin[static_cast<std::size_t>(state.n(i))] = i;
    }
    for (int n = rows - 1; n >= 0; --n) {
        row_begin[static_cast<std::size_t>(n)] =
            std::min(row_begin[static_cast<std::size_t>(n)], row_begin[static_cast<std::size_t>(n) + 1]);
    }
    std::vector<double> xi(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        xi[i] = state.amplitude(i).to_real();
    }

    parallel_for(static_cast<std::size_t>(rows), par, [&](std::size_t k_idx) {
        const int k = static_cast<int>(k_idx);
        std::vector<double> amp(static_cast<std::size_t>(cols), 0.0);
        bool touched = false;
        for (int v = 0; v <= S; ++v) {
            const int n = k + v;
            const double Mv = M[static_cast<std::size_t>(v)];
            if (n >= rows || Mv == 0.0) {
                continue;
            }
            const int w = S - v;
            const double cv = c[static_cast<std::size_t>(v)][static_cast<std::size_t>(n)] * Mv;
            if (cv == 0.0) {
                continue;
            }
            const auto &cw = c[static_cast<std::size_t>(w)];
            for (std::size_t i = row_begin[static_cast<std::size_t>(n)]; i < row_begin[static_cast<std::size_t>(n) + 1]; ++i) {
                const int m = state.m(i);
                if (m < w) {
                    continue;
                }
                amp[static_cast<std::size_t>(m - w)] += xi[i] * cv * cw[static_cast<std::size_t>(m)];
                touched = true;
            }
        }
        if (!touched) {
            return;
        }
        auto dst = result.row(k);
        for (int l = 0; l < cols; ++l) {
            dst[static_cast<std::size_t>(l)] = amp[static_cast<std::size_t>(l)] * amp[static_cast<std::size_t>(l)];
        }
    });
    return result;
}

ConditionalJoint transmitted_joint(const StateEnsemble &state, TapSpec tap, DetectionOutcome out, Parallelism par) {
    ConditionalJoint result;
    result.p = JointPhotonDistribution(state.max_n() + 1, state.max_m() + 1);
    double total = 0.0;
    for (const auto &comp : state.components()) {
        JointPhotonDistribution t = transmitted_unnormalized(comp.state, tap, out, par);
        double P = t.total();
        result.component_outcome_probability.push_back(P);
        total += comp.weight * P;
        for (int k = 0; k < t.rows(); ++k) {
            auto src = t.row(k);
            auto dst = result.p.row(k);
            for (int l = 0; l < t.cols(); ++l) {
                dst[static_cast<std::size_t>(l)] += comp.weight * src[static_cast<std::size_t>(l)];
            }
        }
    }
    if (!(total > 0.0)) {
        throw DegenerateConditioning("outcome S=" + std::to_string(out.S()) + " Delta=" + std::to_string(out.Delta()) +
                                     " has zero probability for this input");
    }
    for (int k = 0; k < result.p.rows(); ++k) {
        for (double &x : result.p.row(k)) {
            x /= total;
        }
    }
    result.outcome_probability = total;
    return result;
}

DiffDistribution transmitted_diff_marginal(const JointPhotonDistribution &joint) {
    const int S_ref = std::max(joint.rows(), joint.cols()) - 1;
    if (S_ref < 0) {
        return DiffDistribution(0, {0.0});
    }
    std::vector<double> probs(static_cast<std::size_t>(2 * S_ref + 1), 0.0);
    std::vector<double> d = joint.difference_marginal();
    const int offset = joint.cols() - 1;
    for (std::size_t i = 0; i < d.size(); ++i) {
        probs[static_cast<std::size_t>(static_cast<int>(i) - offset + S_ref)] = d[i];
    }
    return DiffDistribution(S_ref, std::move(probs));
}

ConditionalJoint lossy_transmitted_joint(const StateEnsemble &state, TapSpec tap, DetectionOutcome out,
                                         LossChannel loss, Parallelism par) {
    ConditionalJoint result = transmitted_joint(state, tap, out, par);
    result.p = apply_loss(result.p, loss, par);
    return result;
}

int reflected_total_bound(const StateEnsemble &state, TapSpec tap, double s_tail) {
    std::vector<double> total;
    for (const auto &comp : state.components()) {
        std::vector<double> t = comp.state.total_photon_distribution();
        if (t.size() > total.size()) {
            total.resize(t.size(), 0.0);
        }
        for (std::size_t N = 0; N < t.size(); ++N) {
            total[N] += comp.weight * t[N];
        }
    }
    const int N_max = static_cast<int>(total.size()) - 1;
    if (N_max <= 0 || tap.r() == 0.0) {
        return 0;
    }
    BinomialKernel B(N_max, tap.r());
    std::vector<double> reflected(static_cast<std::size_t>(N_max) + 1, 0.0);
    for (int N = 0; N <= N_max; ++N) {
        for (int s = 0; s <= N; ++s) {
            reflected[static_cast<std::size_t>(s)] += total[static_cast<std::size_t>(N)] * B(N, s);
        }
    }
    double tail = 0.0;
    for (int s = N_max; s > 0; --s) {
        tail += reflected[static_cast<std::size_t>(s)];
        if (tail >= s_tail) {
            return s;
        }
    }
    return 0;
}

ProcessedResult processed_photon_distribution(const StateEnsemble &state, TapSpec tap, const TrustPolicy &policy,
                                              const ProcessedOptions &options) {
    if (options.component >= state.size()) {
        throw std::invalid_argument("processed_photon_distribution: component index out of range");
    }
    const int S_bound = reflected_total_bound(state, tap, options.s_tail);
    ProcessedResult result;
    const auto &reported = state.components()[options.component].state;
    JointPhotonDistribution acc(reported.max_n() + 1, reported.max_m() + 1);
    double weight_total = 0.0;
    double detection_total = 0.0;

    for (int S = 0; S <= S_bound; S += 2) {
        DetectionOutcome out(S, 0);
        std::vector<JointPhotonDistribution> tables;
        JointPhotonDistribution mix(state.max_n() + 1, state.max_m() + 1);
        double P_mix = 0.0;
        for (const auto &comp : state.components()) {
            tables.push_back(transmitted_unnormalized(comp.state, tap, out, options.par));
            const auto &t = tables.back();
            P_mix += comp.weight * t.total();
            for (int k = 0; k < t.rows(); ++k) {
                auto src = t.row(k);
                auto dst = mix.row(k);
                for (int l = 0; l < t.cols(); ++l) {
                    dst[static_cast<std::size_t>(l)] += comp.weight * src[static_cast<std::size_t>(l)];
                }
            }
        }
        const JointPhotonDistribution &own = tables[options.component];
        const double P_own = own.total();
        ProcessedSlice slice{S, P_own, 0.0, false};
        if (P_mix > 0.0) {
            slice.acceptance = acceptance_probability(transmitted_diff_marginal(mix), policy.delta_th) / P_mix;
            slice.accepted = slice.acceptance >= policy.trust && P_own > 0.0;
        }
        result.slices.push_back(slice);
        if (!slice.accepted) {
            continue;
        }
        // Detection weighting adds P_own * (own / P_own) = own.
        const double scale = options.weighting == Weighting::Detection ? 1.0 : 1.0 / P_own;
        for (int k = 0; k < own.rows(); ++k) {
            auto src = own.row(k);
            auto dst = acc.row(k);
            for (int l = 0; l < own.cols(); ++l) {
                dst[static_cast<std::size_t>(l)] += scale * src[static_cast<std::size_t>(l)];
            }
        }
        weight_total += options.weighting == Weighting::Detection ? P_own : 1.0;
        detection_total += P_own;
    }
    if (weight_total <= 0.0) {
        throw EmptyAcceptedSet("no photon total S passes trust " + std::to_string(policy.trust) +
                               " at delta_th = " + std::to_string(policy.delta_th));
    }
    for (int k = 0; k < acc.rows(); ++k) {
        for (double &x : acc.row(k)) {
            x /= weight_total;
        }
    }
    result.p = std::move(acc);
    result.accepted_weight = detection_total;
    result.report = distinguishability(result.p, detection_total);
    return result;
}

}  // namespace mdf
