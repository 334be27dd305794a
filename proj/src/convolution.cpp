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


#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <memory>
#include <stdexcept>
#include <string>

#include "mdf/operational.hpp"

namespace mdf {

ConditionalFamily::ConditionalFamily(const StateEnsemble &state, TapSpec tap, int K_max, int L_max, bool store_joint,
                                     Parallelism par)
    : K_max_(K_max), L_max_(L_max), store_joint_(store_joint) {
    if (K_max < 0 || L_max < 0) {
        throw std::invalid_argument("ConditionalFamily: negative count bound");
    }
    rows_ = state.max_n() + 1;
    cols_ = state.max_m() + 1;
    tail_mass_ = state.tail_mass();
    const std::size_t n_slots = static_cast<std::size_t>(K_max + 1) * static_cast<std::size_t>(L_max + 1);
    if (store_joint_) {
        joints_.resize(n_slots);
    }
    diffs_.resize(n_slots);
    outcome_probs_.resize(n_slots, 0.0);
    for (int K1 = 0; K1 <= K_max; ++K1) {
        for (int L1 = 0; L1 <= L_max; ++L1) {
            DetectionOutcome out = DetectionOutcome::from_counts(K1, L1);
            JointPhotonDistribution table(rows_, cols_);
            for (const auto &comp : state.components()) {
                JointPhotonDistribution t = transmitted_unnormalized(comp.state, tap, out, par);
                for (int k = 0; k < t.rows(); ++k) {
                    auto src = t.row(k);
                    auto dst = table.row(k);
                    for (int l = 0; l < t.cols(); ++l) {
                        dst[static_cast<std::size_t>(l)] += comp.weight * src[static_cast<std::size_t>(l)];
                    }
                }
            }
            const std::size_t s = slot(K1, L1);
            outcome_probs_[s] = table.total();
            diffs_[s] = table.difference_marginal();
            if (store_joint_) {
                joints_[s] = std::move(table);
            }
        }
    }
}

std::size_t ConditionalFamily::slot(int K1, int L1) const {
    if (K1 < 0 || L1 < 0 || K1 > K_max_ || L1 > L_max_) {
        throw std::out_of_range("ConditionalFamily: split (" + std::to_string(K1) + "," + std::to_string(L1) +
                                ") outside the tabulated range");
    }
    return static_cast<std::size_t>(K1) * static_cast<std::size_t>(L_max_ + 1) + static_cast<std::size_t>(L1);
}

const JointPhotonDistribution &ConditionalFamily::joint(int K1, int L1) const {
    if (!store_joint_) {
        throw std::logic_error("ConditionalFamily was built without joint tables");
    }
    return joints_[slot(K1, L1)];
}

const std::vector<double> &ConditionalFamily::diff(int K1, int L1) const {
    return diffs_[slot(K1, L1)];
}

double ConditionalFamily::outcome_probability(int K1, int L1) const {
    return outcome_probs_[slot(K1, L1)];
}

namespace {

struct FftwFree {
    void operator()(void *p) const {
        fftw_free(p);
    }
};

using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

// Below this many output cells the direct sum is cheaper than three FFTs.
constexpr std::size_t kDirectConvolutionCells = 1 << 14;

void direct_convolve_add(const JointPhotonDistribution &a, const JointPhotonDistribution &b, double factor,
                         JointPhotonDistribution &out) {
    for (int k1 = 0; k1 < a.rows(); ++k1) {
        auto ra = a.row(k1);
        for (int l1 = 0; l1 < a.cols(); ++l1) {
            double x = factor * ra[static_cast<std::size_t>(l1)];
            if (x == 0.0) {
                continue;
            }
            for (int k2 = 0; k2 < b.rows(); ++k2) {
                auto rb = b.row(k2);
                auto dst = out.row(k1 + k2);
                for (int l2 = 0; l2 < b.cols(); ++l2) {
                    dst[static_cast<std::size_t>(l1 + l2)] += x * rb[static_cast<std::size_t>(l2)];
                }
            }
        }
    }
}

class FftConvolver {
   public:
    FftConvolver(int rows, int cols)
        : n0_(rows), n1_(cols), nc_(cols / 2 + 1),
          real_(static_cast<double *>(fftw_malloc(sizeof(double) * cells()))),
          spec_a_(static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * spectral()))),
          spec_b_(static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * spectral()))),
          acc_(static_cast<fftw_complex *>(fftw_malloc(sizeof(fftw_complex) * spectral()))) {
        if (!real_ || !spec_a_ || !spec_b_ || !acc_) {
            throw std::bad_alloc();
        }
        forward_a_ = fftw_plan_dft_r2c_2d(n0_, n1_, real_.get(), spec_a_.get(), FFTW_ESTIMATE);
        forward_b_ = fftw_plan_dft_r2c_2d(n0_, n1_, real_.get(), spec_b_.get(), FFTW_ESTIMATE);
        inverse_ = fftw_plan_dft_c2r_2d(n0_, n1_, acc_.get(), real_.get(), FFTW_ESTIMATE);
        std::fill_n(&acc_[0][0], 2 * spectral(), 0.0);
    }
    ~FftConvolver() {
        fftw_destroy_plan(forward_a_);
        fftw_destroy_plan(forward_b_);
        fftw_destroy_plan(inverse_);
    }
    FftConvolver(const FftConvolver &) = delete;
    FftConvolver &operator=(const FftConvolver &) = delete;

    void add_product(const JointPhotonDistribution &a, const JointPhotonDistribution &b, double factor) {
        load(a);
        fftw_execute(forward_a_);
        load(b);
        fftw_execute(forward_b_);
        for (std::size_t i = 0; i < spectral(); ++i) {
            std::complex<double> x(spec_a_[i][0], spec_a_[i][1]);
            std::complex<double> y(spec_b_[i][0], spec_b_[i][1]);
            std::complex<double> z = factor * x * y;
            acc_[i][0] += z.real();
            acc_[i][1] += z.imag();
        }
    }

    /// Writes the accumulated convolution into out; round-off negatives are
    /// clamped to zero.
    void finish(JointPhotonDistribution &out) {
        fftw_execute(inverse_);
        const double scale = 1.0 / static_cast<double>(cells());
        for (int k = 0; k < out.rows(); ++k) {
            auto dst = out.row(k);
            for (int l = 0; l < out.cols(); ++l) {
                double x = real_[static_cast<std::size_t>(k) * static_cast<std::size_t>(n1_) + static_cast<std::size_t>(l)] * scale;
                dst[static_cast<std::size_t>(l)] = std::max(0.0, x);
            }
        }
    }

   private:
    std::size_t cells() const {
        return static_cast<std::size_t>(n0_) * static_cast<std::size_t>(n1_);
    }
    std::size_t spectral() const {
        return static_cast<std::size_t>(n0_) * static_cast<std::size_t>(nc_);
    }
    void load(const JointPhotonDistribution &t) {
        std::fill_n(real_.get(), cells(), 0.0);
        for (int k = 0; k < t.rows(); ++k) {
            auto src = t.row(k);
            std::copy(src.begin(), src.end(), real_.get() + static_cast<std::size_t>(k) * static_cast<std::size_t>(n1_));
        }
    }

    int n0_;
    int n1_;
    int nc_;
    RealBuffer real_;
    ComplexBuffer spec_a_;
    ComplexBuffer spec_b_;
    ComplexBuffer acc_;
    fftw_plan forward_a_ = nullptr;
    fftw_plan forward_b_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

void check_split_range(const ConditionalFamily &family, DetectionOutcome out) {
    if (out.K() > family.K_max() || out.L() > family.L_max()) {
        throw std::out_of_range("two-copy outcome exceeds the tabulated single-copy family");
    }
}

}  // namespace

ConditionalJoint two_mode_convolution(const ConditionalFamily &family, DetectionOutcome out, Parallelism) {
    check_split_range(family, out);
    const int K = out.K();
    const int L = out.L();
    const int rows = 2 * family.rows() - 1;
    const int cols = 2 * family.cols() - 1;
    ConditionalJoint result;
    result.p = JointPhotonDistribution(rows, cols);

    // Each unordered split {a, b} is visited once; J_a (*) J_b = J_b (*) J_a.
    std::vector<std::pair<std::pair<int, int>, double>> pairs;
    double total = 0.0;
    for (int K1 = 0; K1 <= K; ++K1) {
        for (int L1 = 0; L1 <= L; ++L1) {
            int K2 = K - K1;
            int L2 = L - L1;
            if (std::pair(K1, L1) > std::pair(K2, L2)) {
                continue;
            }
            double factor = (K1 == K2 && L1 == L2) ? 1.0 : 2.0;
            double P = factor * family.outcome_probability(K1, L1) * family.outcome_probability(K2, L2);
            if (P == 0.0) {
                continue;
            }
            total += P;
            pairs.push_back({{K1, L1}, factor});
        }
    }
    if (!(total > 0.0)) {
        throw DegenerateConditioning("two-copy outcome S=" + std::to_string(out.S()) + " Delta=" +
                                     std::to_string(out.Delta()) + " has zero probability");
    }
    const std::size_t cells = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    if (cells <= kDirectConvolutionCells) {
        for (const auto &[split, factor] : pairs) {
            direct_convolve_add(family.joint(split.first, split.second),
                                family.joint(K - split.first, L - split.second), factor, result.p);
        }
    } else {
        FftConvolver fft(rows, cols);
        for (const auto &[split, factor] : pairs) {
            fft.add_product(family.joint(split.first, split.second), family.joint(K - split.first, L - split.second),
                            factor);
        }
        fft.finish(result.p);
    }
    for (int k = 0; k < rows; ++k) {
        for (double &x : result.p.row(k)) {
            x /= total;
        }
    }
    result.outcome_probability = total;
    return result;
}

DiffDistribution two_mode_diff_marginal(const ConditionalFamily &family, DetectionOutcome out,
                                        double *outcome_probability) {
    check_split_range(family, out);
    const int K = out.K();
    const int L = out.L();
    const int offset = family.cols() - 1;
    const int single = family.rows() + family.cols() - 1;
    std::vector<double> conv(static_cast<std::size_t>(2 * single - 1), 0.0);
    double total = 0.0;
    for (int K1 = 0; K1 <= K; ++K1) {
        for (int L1 = 0; L1 <= L; ++L1) {
            const auto &a = family.diff(K1, L1);
            const auto &b = family.diff(K - K1, L - L1);
            double P = family.outcome_probability(K1, L1) * family.outcome_probability(K - K1, L - L1);
            if (P == 0.0) {
                continue;
            }
            total += P;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] == 0.0) {
                    continue;
                }
                double x = a[i];
                double *dst = conv.data() + i;
                for (std::size_t j = 0; j < b.size(); ++j) {
                    dst[j] += x * b[j];
                }
            }
        }
    }
    if (!(total > 0.0)) {
        throw DegenerateConditioning("two-copy outcome S=" + std::to_string(out.S()) + " Delta=" +
                                     std::to_string(out.Delta()) + " has zero probability");
    }
    if (outcome_probability != nullptr) {
        *outcome_probability = total;
    }
    // conv index c corresponds to d = c - 2 * offset.
    const int S_ref = std::max(2 * (family.rows() - 1), 2 * offset);
    std::vector<double> probs(static_cast<std::size_t>(2 * S_ref + 1), 0.0);
    for (std::size_t c = 0; c < conv.size(); ++c) {
        probs[static_cast<std::size_t>(static_cast<int>(c) - 2 * offset + S_ref)] = conv[c] / total;
    }
    return DiffDistribution(S_ref, std::move(probs));
}

}  // namespace mdf
