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

#ifndef MDF_NUMERICS_HPP
#define MDF_NUMERICS_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mdf {

using BigInt = boost::multiprecision::cpp_int;

/// Signed real number stored as (sign, ln|x|).
///
/// Amplitudes in this library routinely involve factorials of order 10^3, far
/// outside the range of a double. Products are exact in log space; sums go
/// through signed_logsum.
class LogAmplitude {
   public:
    constexpr LogAmplitude() = default;
    constexpr LogAmplitude(int sign, double log_mag) : sign_(sign == 0 ? 0 : (sign > 0 ? 1 : -1)), log_mag_(sign == 0 ? 0.0 : log_mag) {
    }

    static constexpr LogAmplitude zero() {
        return {};
    }
    static constexpr LogAmplitude one() {
        return {1, 0.0};
    }
    static LogAmplitude from_real(double x);

    double to_real() const;
    constexpr int sign() const {
        return sign_;
    }
    /// ln|x|; -inf for zero.
    constexpr double log_mag() const {
        return sign_ == 0 ? -std::numeric_limits<double>::infinity() : log_mag_;
    }
    constexpr bool is_zero() const {
        return sign_ == 0;
    }

    /// ln(x^2), i.e. the log-probability carried by this amplitude.
    double log_prob() const {
        return 2.0 * log_mag();
    }

    LogAmplitude operator-() const {
        return {-sign_, log_mag_};
    }
    LogAmplitude operator*(const LogAmplitude &other) const {
        if (sign_ == 0 || other.sign_ == 0) {
            return zero();
        }
        return {sign_ * other.sign_, log_mag_ + other.log_mag_};
    }
    LogAmplitude operator/(const LogAmplitude &other) const;
    LogAmplitude &operator*=(const LogAmplitude &other) {
        return *this = *this * other;
    }
    /// Multiplies the magnitude by exp(log_factor).
    LogAmplitude scaled(double log_factor) const {
        return sign_ == 0 ? zero() : LogAmplitude{sign_, log_mag_ + log_factor};
    }
    LogAmplitude sqrt() const;

    LogAmplitude operator+(const LogAmplitude &other) const;
    LogAmplitude operator-(const LogAmplitude &other) const {
        return *this + (-other);
    }

    bool operator==(const LogAmplitude &other) const {
        return sign_ == other.sign_ && (sign_ == 0 || log_mag_ == other.log_mag_);
    }

   private:
    int sign_ = 0;
    double log_mag_ = 0.0;
};

/// Number of ln(n!) values served from the exact-summation cache.
inline constexpr std::uint64_t kFactorialCacheSize = 100000;

/// ln(n!). Cached values come from compensated summation of ln(i); larger n
/// use the Stirling series for ln Gamma(n+1).
double log_factorial(std::uint64_t n);

/// ln C(n, k), or -inf when k < 0 or k > n.
double log_binomial(std::int64_t n, std::int64_t k);

/// Exact n! and C(n, k) (zero outside 0 <= k <= n).
BigInt factorial(unsigned n);
BigInt binomial(std::int64_t n, std::int64_t k);

/// Sum_{p+q=K} (-1)^(v-p) C(v,p) C(w,q), computed exactly.
///
/// This is the coefficient of x^K in (x-1)^v (x+1)^w, a Krawtchouk polynomial
/// up to normalisation. It is the interference sum that appears in the
/// amplitude <K,L|U|v,w> of a balanced splitter:
///     <K,L|U|v,w> = sqrt(K! L! / (v! w! 2^(v+w))) * krawtchouk_sum(v, w, L)
/// (with this library's port labelling, see operational.hpp). The alternating
/// (-1)^p form over the output binomials is the same quantity up to a
/// global sign, by the symmetry
///     krawtchouk_sum(v, w, v+w-K) = (-1)^v krawtchouk_sum(v, w, K).
BigInt krawtchouk_sum(unsigned v, unsigned w, std::int64_t K);

/// Converts an exact integer to (sign, ln|x|) without going through a double,
/// so values well beyond 1e308 are fine.
LogAmplitude to_log_amplitude(const BigInt &x);

struct SumOptions {
    /// 0 selects the double-precision compensated path; any other value runs
    /// the sum in MPFR with this many mantissa bits.
    unsigned precision_bits = 0;
};

/// Signed sum of log-stored terms. The running maximum ln-magnitude is
/// factored out before exponentiating and the shifted terms are accumulated
/// with Neumaier compensation.
LogAmplitude signed_logsum(std::span<const LogAmplitude> terms, SumOptions options = {});

/// Neumaier-compensated accumulator for plain doubles.
class CompensatedSum {
   public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const {
        return sum_ + comp_;
    }

   private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Binomial thinning kernel B[x][y] = C(x,y) t^y (1-t)^(x-y), 0 <= y <= x <= x_max:
/// the probability that y of x photons survive a channel of transmissivity t.
class BinomialKernel {
   public:
    BinomialKernel(int x_max, double transmissivity);

    double operator()(int x, int y) const {
        return (y < 0 || y > x) ? 0.0 : rows_[offset(x) + static_cast<std::size_t>(y)];
    }
    int x_max() const {
        return x_max_;
    }

   private:
    static std::size_t offset(int x) {
        return static_cast<std::size_t>(x) * static_cast<std::size_t>(x + 1) / 2;
    }
    int x_max_;
    std::vector<double> rows_;
};

}  // namespace mdf

#endif
