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


#ifndef MDF_ORACLE_HPP
#define MDF_ORACLE_HPP

#include <array>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "mdf/ideal_filter.hpp"
#include "mdf/operational.hpp"
#include "mdf/states.hpp"

// Brute-force reference evolution on a truncated Fock space. Nothing here
// uses the closed-form splitter amplitudes of the main library; every matrix
// element comes from expanding products of creation operators.

namespace mdf::oracle {

using HighPrec = boost::multiprecision::cpp_bin_float_50;

/// Real 2x2 mode transformation: input a_i^dagger -> sum_j T[i][j] out_j^dagger.
using Matrix2 = std::array<std::array<HighPrec, 2>, 2>;

/// Splitter of reflectivity r: a^dagger -> sqrt(1-r) a^dagger + sqrt(r) b^dagger,
/// b^dagger -> -sqrt(r) a^dagger + sqrt(1-r) b^dagger.
Matrix2 beam_splitter(double r);

/// The balanced polarising splitter of the detection arm with outputs
/// (K, L): a^dagger -> (-K^dagger + L^dagger)/sqrt2, b^dagger -> (K^dagger + L^dagger)/sqrt2.
Matrix2 detection_pbs();

/// <K, N-K| U_T |n, m> for K = 0..N, N = n + m, by multiplying out
/// (T00 x + T01 y)^n (T10 x + T11 y)^m.
std::vector<HighPrec> two_mode_amplitudes(const Matrix2 &T, int n, int m);

/// <K,L|U(r)|n,m> for beam_splitter(r). For n + m <= 20 the expansion keeps
/// integer coefficients of sqrt(r)^a sqrt(1-r)^b exactly and only the final
/// evaluation is floating; larger inputs use two_mode_amplitudes.
LogAmplitude bs_matrix_element(int n, int m, int K, int L, double r);

/// Dense amplitude vector over all occupation tuples with occ[i] < dims[i].
class DenseState {
   public:
    explicit DenseState(std::vector<int> dims);

    std::size_t modes() const {
        return dims_.size();
    }
    const std::vector<int> &dims() const {
        return dims_;
    }
    std::size_t size() const {
        return amps_.size();
    }
    double amplitude(std::span<const int> occ) const {
        return amps_[index(occ)];
    }
    void set(std::span<const int> occ, double value) {
        amps_[index(occ)] = value;
    }
    double amplitude_at(std::size_t i) const {
        return amps_[i];
    }
    std::vector<int> occupation(std::size_t i) const;

    /// Applies T to modes a and b. Throws if the output leaves the cutoff.
    void apply_two_mode(int a, int b, const Matrix2 &T);
    /// Zeroes every amplitude whose mode has a different count and returns the
    /// remaining squared norm.
    double project(int mode, int count);
    double norm2() const;

   private:
    std::size_t index(std::span<const int> occ) const;
    std::vector<int> dims_;
    std::vector<std::size_t> strides_;
    std::vector<double> amps_;
};

/// Largest total photon number accepted by the pipeline oracles.
inline constexpr int kOraclePhotonBudget = 12;

struct OracleResult {
    JointPhotonDistribution p;  // normalised
    double outcome_probability = 0.0;
};

/// Tap (reflectivity r) on both modes, balanced PBS on the reflected pair,
/// projection on the detector counts, then loss R on both transmitted modes
/// via explicit environment modes which are traced out.
OracleResult full_pipeline_oracle(const StateEnsemble &state, double r, double R, DetectionOutcome out);

/// Two independent copies of the input, each tapped and sent through its own
/// PBS, with the detectors counting K = K1 + K2 and L = L1 + L2 over the
/// copies. Enumerates the product of the two evolved copies directly.
OracleResult two_copy_oracle(const StateEnsemble &state, double r, DetectionOutcome out);

}  // namespace mdf::oracle

#endif
