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

#include "mdf/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <mpfr.h>

namespace mdf {

namespace {

const std::vector<double> &factorial_cache() {
    static const std::vector<double> cache = [] {
        std::vector<double> out(kFactorialCacheSize);
        // Two-level compensated accumulation in long double keeps the
        // relative error at the ulp level all the way to 1e5.
        long double sum = 0.0L;
        long double comp = 0.0L;
        out[0] = 0.0;
        for (std::uint64_t i = 1; i < kFactorialCacheSize; ++i) {
            long double x = std::log(static_cast<long double>(i));
            long double t = sum + x;
            if (std::fabs(sum) >= std::fabs(x)) {
                comp += (sum - t) + x;
            } else {
                comp += (x - t) + sum;
            }
            sum = t;
            out[i] = static_cast<double>(sum + comp);
        }
        return out;
    }();
    return cache;
}

double stirling_log_factorial(double n) {
    // ln Gamma(n+1) = (n+1/2) ln(n+1) - (n+1) + ln(2 pi)/2 + sum B_2k / (2k(2k-1) z^(2k-1)), z = n+1.
    double z = n + 1.0;
    double inv = 1.0 / z;
    double inv2 = inv * inv;
    double series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

}  // namespace

LogAmplitude LogAmplitude::from_real(double x) {
    if (x == 0.0) {
        return zero();
    }
    return {x > 0 ? 1 : -1, std::log(std::abs(x))};
}

double LogAmplitude::to_real() const {
    return sign_ == 0 ? 0.0 : sign_ * std::exp(log_mag_);
}

LogAmplitude LogAmplitude::operator/(const LogAmplitude &other) const {
    if (other.sign_ == 0) {
        throw std::domain_error("LogAmplitude: division by zero");
    }
    if (sign_ == 0) {
        return zero();
    }
    return {sign_ * other.sign_, log_mag_ - other.log_mag_};
}

LogAmplitude LogAmplitude::sqrt() const {
    if (sign_ < 0) {
        throw std::domain_error("LogAmplitude: sqrt of negative value");
    }
    return sign_ == 0 ? zero() : LogAmplitude{1, 0.5 * log_mag_};
}

LogAmplitude LogAmplitude::operator+(const LogAmplitude &other) const {
    std::array<LogAmplitude, 2> pair{*this, other};
    return signed_logsum(pair);
}

double log_factorial(std::uint64_t n) {
    if (n < kFactorialCacheSize) {
        return factorial_cache()[n];
    }
    return stirling_log_factorial(static_cast<double>(n));
}

double log_binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) {
        return -std::numeric_limits<double>::infinity();
    }
    return log_factorial(static_cast<std::uint64_t>(n)) - log_factorial(static_cast<std::uint64_t>(k)) -
           log_factorial(static_cast<std::uint64_t>(n - k));
}

BigInt factorial(unsigned n) {
    BigInt out = 1;
    for (unsigned i = 2; i <= n; ++i) {
        out *= i;
    }
    return out;
}

BigInt binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    BigInt out = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        out *= n - k + i;
        out /= i;
    }
    return out;
}

BigInt krawtchouk_sum(unsigned v, unsigned w, std::int64_t K) {
    if (K < 0 || K > static_cast<std::int64_t>(v) + w) {
        return 0;
    }
    auto p_lo = static_cast<unsigned>(std::max<std::int64_t>(0, K - w));
    auto p_hi = static_cast<unsigned>(std::min<std::int64_t>(v, K));
    // Walk p upward, updating C(v,p) and C(w,K-p) by exact ratios.
    BigInt cv = binomial(v, p_lo);
    BigInt cw = binomial(w, K - p_lo);
    BigInt sum = 0;
    for (unsigned p = p_lo;; ++p) {
        BigInt term = cv * cw;
        if ((v - p) % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
        if (p == p_hi) {
            break;
        }
        auto q = static_cast<unsigned>(K - p);
        cv *= v - p;
        cv /= p + 1;
        cw *= q;
        cw /= w - q + 1;
    }
    return sum;
}

LogAmplitude to_log_amplitude(const BigInt &x) {
    if (x == 0) {
        return LogAmplitude::zero();
    }
    int sign = x < 0 ? -1 : 1;
    BigInt mag = abs(x);
    std::size_t bits = msb(mag) + 1;
    if (bits <= 62) {
        return {sign, std::log(static_cast<double>(mag.convert_to<std::uint64_t>()))};
    }
    std::size_t shift = bits - 62;
    BigInt top = mag >> shift;
    double lead = static_cast<double>(top.convert_to<std::uint64_t>());
    return {sign, std::log(lead) + static_cast<double>(shift) * std::numbers::ln2};
}

LogAmplitude signed_logsum(std::span<const LogAmplitude> terms, SumOptions options) {
    double max_log = -std::numeric_limits<double>::infinity();
    for (const auto &t : terms) {
        if (!t.is_zero()) {
            max_log = std::max(max_log, t.log_mag());
        }
    }
    if (max_log == -std::numeric_limits<double>::infinity()) {
        return LogAmplitude::zero();
    }

    if (options.precision_bits == 0) {
        CompensatedSum acc;
        for (const auto &t : terms) {
            if (!t.is_zero()) {
                acc.add(t.sign() * std::exp(t.log_mag() - max_log));
            }
        }
        double s = acc.value();
        if (s == 0.0) {
            return LogAmplitude::zero();
        }
        return {s > 0 ? 1 : -1, std::log(std::abs(s)) + max_log};
    }

    mpfr_t acc;
    mpfr_t x;
    auto prec = static_cast<mpfr_prec_t>(options.precision_bits);
    mpfr_init2(acc, prec);
    mpfr_init2(x, prec);
    mpfr_set_zero(acc, 1);
    for (const auto &t : terms) {
        if (t.is_zero()) {
            continue;
        }
        mpfr_set_d(x, t.log_mag() - max_log, MPFR_RNDN);
        mpfr_exp(x, x, MPFR_RNDN);
        if (t.sign() > 0) {
            mpfr_add(acc, acc, x, MPFR_RNDN);
        } else {
            mpfr_sub(acc, acc, x, MPFR_RNDN);
        }
    }
    LogAmplitude out;
    if (mpfr_zero_p(acc) == 0) {
        int sign = mpfr_sgn(acc) > 0 ? 1 : -1;
        mpfr_abs(acc, acc, MPFR_RNDN);
        mpfr_log(acc, acc, MPFR_RNDN);
        out = LogAmplitude{sign, mpfr_get_d(acc, MPFR_RNDN) + max_log};
    }
    mpfr_clear(acc);
    mpfr_clear(x);
    return out;
}

BinomialKernel::BinomialKernel(int x_max, double transmissivity) : x_max_(x_max) {
    if (x_max < 0) {
        throw std::invalid_argument("BinomialKernel: x_max must be non-negative");
    }
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        throw std::invalid_argument("BinomialKernel: transmissivity must lie in [0,1]");
    }
    rows_.assign(offset(x_max + 1), 0.0);
    double lt = std::log(transmissivity);
    double ll = std::log1p(-transmissivity);
    for (int x = 0; x <= x_max; ++x) {
        for (int y = 0; y <= x; ++y) {
            double v;
            if (transmissivity == 1.0) {
                v = (y == x) ? 1.0 : 0.0;
            } else if (transmissivity == 0.0) {
                v = (y == 0) ? 1.0 : 0.0;
            } else {
                v = std::exp(log_binomial(x, y) + y * lt + (x - y) * ll);
            }
            rows_[offset(x) + static_cast<std::size_t>(y)] = v;
        }
    }
}

}  // namespace mdf
