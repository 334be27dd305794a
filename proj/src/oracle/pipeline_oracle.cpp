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


#include <stdexcept>
#include <string>

#include "mdf/oracle.hpp"

namespace mdf::oracle {

namespace {

void check_budget(const StateEnsemble &state) {
    for (const auto &c : state.components()) {
        if (c.state.truncation_bound() > kOraclePhotonBudget) {
            throw std::invalid_argument("oracle photon budget is " + std::to_string(kOraclePhotonBudget) +
                                        ", input has " + std::to_string(c.state.truncation_bound()));
        }
    }
}

/// Modes: 0, 1 transmitted; 2, 3 reflected then detector K, L.
DenseState tapped_and_split(const TwoModeFockState &state, double r) {
    const int d = state.truncation_bound() + 1;
    DenseState psi({d, d, d, d});
    for (std::size_t i = 0; i < state.size(); ++i) {
        int occ[4] = {state.n(i), state.m(i), 0, 0};
        psi.set(occ, state.amplitude(i).to_real());
    }
    Matrix2 tap = beam_splitter(r);
    psi.apply_two_mode(0, 2, tap);
    psi.apply_two_mode(1, 3, tap);
    psi.apply_two_mode(2, 3, detection_pbs());
    return psi;
}

}  // namespace

OracleResult full_pipeline_oracle(const StateEnsemble &state, double r, double R, DetectionOutcome out) {
    check_budget(state);
    int d = 1;
    for (const auto &c : state.components()) {
        d = std::max(d, c.state.truncation_bound() + 1);
    }
    JointPhotonDistribution acc(d, d);
    double total = 0.0;
    for (const auto &comp : state.components()) {
        DenseState psi = tapped_and_split(comp.state, r);
        psi.project(2, out.K());
        double P = psi.project(3, out.L());
        total += comp.weight * P;
        if (P == 0.0) {
            continue;
        }
        // Transmitted modes plus two environment modes for the loss splitters.
        const int dc = comp.state.truncation_bound() + 1;
        DenseState lossy({dc, dc, dc, dc});
        for (std::size_t i = 0; i < psi.size(); ++i) {
            double a = psi.amplitude_at(i);
            if (a == 0.0) {
                continue;
            }
            std::vector<int> occ = psi.occupation(i);
            int target[4] = {occ[0], occ[1], 0, 0};
            lossy.set(target, a);
        }
        if (R > 0.0) {
            Matrix2 loss = beam_splitter(R);
            lossy.apply_two_mode(0, 2, loss);
            lossy.apply_two_mode(1, 3, loss);
        }
        for (std::size_t i = 0; i < lossy.size(); ++i) {
            double a = lossy.amplitude_at(i);
            if (a == 0.0) {
                continue;
            }
            std::vector<int> occ = lossy.occupation(i);
            acc.at(occ[0], occ[1]) += comp.weight * a * a;
        }
    }
    if (!(total > 0.0)) {
        throw DegenerateConditioning("oracle: outcome has zero probability");
    }
    for (int k = 0; k < acc.rows(); ++k) {
        for (double &x : acc.row(k)) {
            x /= total;
        }
    }
    return {std::move(acc), total};
}

OracleResult two_copy_oracle(const StateEnsemble &state, double r, DetectionOutcome out) {
    check_budget(state);
    int d = 1;
    for (const auto &c : state.components()) {
        d = std::max(d, c.state.truncation_bound() + 1);
    }
    std::vector<DenseState> evolved;
    for (const auto &comp : state.components()) {
        evolved.push_back(tapped_and_split(comp.state, r));
    }
    JointPhotonDistribution acc(2 * d - 1, 2 * d - 1);
    double total = 0.0;
    const auto &comps = state.components();
    for (std::size_t c1 = 0; c1 < comps.size(); ++c1) {
        for (std::size_t c2 = 0; c2 < comps.size(); ++c2) {
            const double w = comps[c1].weight * comps[c2].weight;
            const DenseState &a = evolved[c1];
            const DenseState &b = evolved[c2];
            for (std::size_t i = 0; i < a.size(); ++i) {
                double x = a.amplitude_at(i);
                if (x == 0.0) {
                    continue;
                }
                std::vector<int> oa = a.occupation(i);
                if (oa[2] > out.K() || oa[3] > out.L()) {
                    continue;
                }
                for (std::size_t j = 0; j < b.size(); ++j) {
                    double y = b.amplitude_at(j);
                    if (y == 0.0) {
                        continue;
                    }
                    std::vector<int> ob = b.occupation(j);
                    if (oa[2] + ob[2] != out.K() || oa[3] + ob[3] != out.L()) {
                        continue;
                    }
                    double p = w * x * x * y * y;
                    acc.at(oa[0] + ob[0], oa[1] + ob[1]) += p;
                    total += p;
                }
            }
        }
    }
    if (!(total > 0.0)) {
        throw DegenerateConditioning("oracle: two-copy outcome has zero probability");
    }
    for (int k = 0; k < acc.rows(); ++k) {
        for (double &x : acc.row(k)) {
            x /= total;
        }
    }
    return {std::move(acc), total};
}

}  // namespace mdf::oracle
