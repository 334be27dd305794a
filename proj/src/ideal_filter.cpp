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


#include "mdf/ideal_filter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mdf {

FilterThreshold::FilterThreshold(int delta_th) : delta_th_(delta_th) {
    if (delta_th < 0) {
        throw std::invalid_argument("delta_th must be non-negative");
    }
}

LossChannel::LossChannel(double R) : R_(R) {
    if (!(R >= 0.0 && R <= 1.0)) {
        throw std::invalid_argument("loss R must lie in [0,1]");
    }
}

JointPhotonDistribution::JointPhotonDistribution(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0) {
    if (rows < 0 || cols < 0) {
        throw std::invalid_argument("negative grid size");
    }
}

double JointPhotonDistribution::total() const {
    CompensatedSum acc;
    for (double x : data_) {
        acc.add(x);
    }
    return acc.value();
}

std::vector<double> JointPhotonDistribution::difference_marginal() const {
    if (rows_ == 0 || cols_ == 0) {
        return {};
    }
    std::vector<double> out(static_cast<std::size_t>(rows_ + cols_ - 1), 0.0);
    for (int k = 0; k < rows_; ++k) {
        for (int l = 0; l < cols_; ++l) {
            out[static_cast<std::size_t>(k - l + cols_ - 1)] += data_[index(k, l)];
        }
    }
    return out;
}

void JointPhotonDistribution::trim(double budget) {
    double half = 0.5 * budget;
    std::vector<double> row_mass(static_cast<std::size_t>(rows_), 0.0);
    std::vector<double> col_mass(static_cast<std::size_t>(cols_), 0.0);
    for (int k = 0; k < rows_; ++k) {
        for (int l = 0; l < cols_; ++l) {
            row_mass[static_cast<std::size_t>(k)] += data_[index(k, l)];
            col_mass[static_cast<std::size_t>(l)] += data_[index(k, l)];
        }
    }
    int new_rows = rows_;
    double dropped_rows = 0.0;
    while (new_rows > 1 && dropped_rows + row_mass[static_cast<std::size_t>(new_rows - 1)] <= half) {
        dropped_rows += row_mass[static_cast<std::size_t>(new_rows - 1)];
        --new_rows;
    }
    int new_cols = cols_;
    double dropped_cols = 0.0;
    while (new_cols > 1 && dropped_cols + col_mass[static_cast<std::size_t>(new_cols - 1)] <= half) {
        dropped_cols += col_mass[static_cast<std::size_t>(new_cols - 1)];
        --new_cols;
    }
    if (new_rows == rows_ && new_cols == cols_) {
        return;
    }
    JointPhotonDistribution out(new_rows, new_cols);
    for (int k = 0; k < new_rows; ++k) {
        std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(index(k, 0)), new_cols, out.row(k).begin());
    }
    // Recompute the dropped mass directly; the two strips overlap in a corner.
    out.discarded_mass = discarded_mass + (total() - out.total());
    *this = std::move(out);
}

ProjectionResult project_mdf(const TwoModeFockState &state, FilterThreshold th) {
    CompensatedSum surviving;
    bool any = false;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (th.passes(state.n(i), state.m(i))) {
            surviving.add(state.probability(i));
            any = true;
        }
    }
    if (!any) {
        return {std::nullopt, 0.0};
    }
    // The truncation tail lives at large photon numbers where |n - m| is
    // almost always large, so it is counted as surviving.
    double s = surviving.value();
    double new_tail = state.tail_mass() / (s + state.tail_mass());
    return {state.filtered([&](int n, int m) { return th.passes(n, m); }, new_tail), s + state.tail_mass()};
}

EnsembleProjectionResult project_mdf(const StateEnsemble &ensemble, FilterThreshold th) {
    std::vector<StateEnsemble::Component> kept;
    std::vector<double> raw;
    double total = 0.0;
    for (const auto &c : ensemble.components()) {
        ProjectionResult r = project_mdf(c.state, th);
        if (r.state) {
            raw.push_back(c.weight * r.success_prob);
            kept.push_back({0.0, std::move(*r.state)});
            total += raw.back();
        }
    }
    if (kept.empty() || total <= 0.0) {
        return {std::nullopt, 0.0};
    }
    double assigned = 0.0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        kept[i].weight = (i + 1 == kept.size()) ? 1.0 - assigned : raw[i] / total;
        assigned += kept[i].weight;
    }
    return {StateEnsemble(std::move(kept)), total};
}

JointPhotonDistribution apply_loss(const JointPhotonDistribution &p, LossChannel loss, Parallelism par) {
    if (loss.R() == 0.0) {
        return p;
    }
    const int rows = p.rows();
    const int cols = p.cols();
    JointPhotonDistribution out(rows, cols);
    out.discarded_mass = p.discarded_mass;
    if (rows == 0 || cols == 0) {
        return out;
    }
    BinomialKernel B(std::max(rows, cols) - 1, loss.transmissivity());

    // C[n][l] = sum_m p(n,m) B_m(l)
    std::vector<double> C(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
    parallel_for(static_cast<std::size_t>(rows), par, [&](std::size_t n) {
        auto src = p.row(static_cast<int>(n));
        double *dst = C.data() + n * static_cast<std::size_t>(cols);
        for (int m = 0; m < cols; ++m) {
            double w = src[static_cast<std::size_t>(m)];
            if (w == 0.0) {
                continue;
            }
            for (int l = 0; l <= m; ++l) {
                dst[l] += w * B(m, l);
            }
        }
    });
    // p'[k][l] = sum_n B_n(k) C[n][l]
    parallel_for(static_cast<std::size_t>(rows), par, [&](std::size_t k) {
        auto dst = out.row(static_cast<int>(k));
        for (int n = static_cast<int>(k); n < rows; ++n) {
            double b = B(n, static_cast<int>(k));
            if (b == 0.0) {
                continue;
            }
            const double *src = C.data() + static_cast<std::size_t>(n) * static_cast<std::size_t>(cols);
            for (int l = 0; l < cols; ++l) {
                dst[static_cast<std::size_t>(l)] += b * src[l];
            }
        }
    });
    return out;
}

JointPhotonDistribution lossy_photon_distribution(const StateEnsemble &state, LossChannel loss, FilterThreshold th,
                                                  double *success_prob, Parallelism par, double trim_budget) {
    EnsembleProjectionResult proj = project_mdf(state, th);
    if (!proj.ensemble) {
        throw std::domain_error("no component survives the filter with delta_th = " + std::to_string(th.value()));
    }
    if (success_prob != nullptr) {
        *success_prob = proj.success_prob;
    }
    const StateEnsemble &ens = *proj.ensemble;
    JointPhotonDistribution W(ens.max_n() + 1, ens.max_m() + 1);
    for (const auto &c : ens.components()) {
        for (std::size_t i = 0; i < c.state.size(); ++i) {
            W.at(c.state.n(i), c.state.m(i)) += c.weight * c.state.probability(i);
        }
    }
    W.discarded_mass = ens.tail_mass();
    JointPhotonDistribution out = apply_loss(W, loss, par);
    out.trim(trim_budget);
    return out;
}

JointPhotonDistribution lossy_photon_distribution(const StateEnsemble &state, LossChannel loss, FilterThreshold th,
                                                  Parallelism par, double trim_budget) {
    return lossy_photon_distribution(state, loss, th, nullptr, par, trim_budget);
}

DistinguishabilityReport distinguishability(const JointPhotonDistribution &p, double success_prob) {
    CompensatedSum s1;
    CompensatedSum s2;
    CompensatedSum diag;
    for (int k = 0; k < p.rows(); ++k) {
        auto row = p.row(k);
        for (int l = 0; l < p.cols(); ++l) {
            double x = row[static_cast<std::size_t>(l)];
            if (k > l) {
                s1.add(x);
            } else if (k < l) {
                s2.add(x);
            } else {
                s1.add(x);
                diag.add(x);
            }
        }
    }
    double total = s1.value() + s2.value();
    if (!(total > 0.0)) {
        throw std::domain_error("distinguishability of an empty distribution");
    }
    DistinguishabilityReport r;
    r.P_S1 = s1.value() / total;
    r.P_S2 = s2.value() / total;
    r.diagonal = diag.value() / total;
    r.v = r.P_S1 - r.P_S2 - r.diagonal;
    r.success_prob = success_prob;
    return r;
}

std::vector<LossSweepRow> distinguishability_vs_loss(GainParam g, FilterThreshold th, std::span<const double> R_grid,
                                                     double tail_tolerance, Parallelism par) {
    StateEnsemble phi(macro_qubit(g, Orientation::Phi, tail_tolerance));
    std::vector<LossSweepRow> rows;
    for (double R : R_grid) {
        double ps = 0.0;
        JointPhotonDistribution p = lossy_photon_distribution(phi, LossChannel(R), th, &ps, par);
        rows.push_back({R, distinguishability(p, ps).v, ps});
    }
    return rows;
}

PeakSummary peak_summary(const JointPhotonDistribution &p) {
    PeakSummary out;
    int k_min = -1;
    int l_min = p.cols();
    for (int k = 0; k < p.rows(); ++k) {
        auto row = p.row(k);
        for (int l = 0; l < p.cols(); ++l) {
            double x = row[static_cast<std::size_t>(l)];
            if (x <= 0.0) {
                continue;
            }
            if (k_min < 0) {
                k_min = k;
            }
            l_min = std::min(l_min, l);
            Peak &region = (k >= l) ? out.s1 : out.s2;
            if (x > region.value) {
                region = {k, l, x};
            }
        }
    }
    if (k_min < 0) {
        return out;
    }
    for (int l = 0; l < p.cols(); ++l) {
        if (p(k_min, l) > out.left_edge.value) {
            out.left_edge = {k_min, l, p(k_min, l)};
        }
    }
    for (int k = 0; k < p.rows(); ++k) {
        if (p(k, l_min) > out.bottom_edge.value) {
            out.bottom_edge = {k, l_min, p(k, l_min)};
        }
    }
    return out;
}

double gap_depth(const JointPhotonDistribution &p, FilterThreshold th) {
    if (th.value() == 0) {
        return 0.0;
    }
    std::vector<double> diff = p.difference_marginal();
    if (diff.empty()) {
        return 0.0;
    }
    const int offset = p.cols() - 1;
    const int max_d = std::max(p.rows(), p.cols());
    std::vector<double> folded(static_cast<std::size_t>(max_d), 0.0);
    for (std::size_t i = 0; i < diff.size(); ++i) {
        int d = std::abs(static_cast<int>(i) - offset);
        folded[static_cast<std::size_t>(d)] += diff[i];
    }
    double peak = *std::max_element(folded.begin(), folded.end());
    if (!(peak > 0.0)) {
        return 0.0;
    }
    int width = 0;
    while (width < max_d && folded[static_cast<std::size_t>(width)] < 1e-3 * peak) {
        ++width;
    }
    return std::clamp(static_cast<double>(width) / th.value(), 0.0, 1.0);
}

}  // namespace mdf
