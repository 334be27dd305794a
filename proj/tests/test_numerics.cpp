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


#include <gtest/gtest.h>
#include <mpfr.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <random>

#include "mdf/numerics.hpp"

namespace mdf {
namespace {

using boost::multiprecision::cpp_rational;

TEST(LogAmplitude, RoundTripAcrossRange) {
    for (double e = -300; e <= 300; e += 7.3) {
        for (double sgn : {1.0, -1.0}) {
            double x = sgn * std::pow(10.0, e) * 1.2345;
            if (std::abs(x) > 1e300 || std::abs(x) < 1e-300) {
                continue;
            }
            EXPECT_NEAR(LogAmplitude::from_real(x).to_real() / x, 1.0, 1e-12) << x;
        }
    }
}

TEST(LogAmplitude, ZeroFollowsFieldAxioms) {
    LogAmplitude z = LogAmplitude::zero();
    LogAmplitude a = LogAmplitude::from_real(-3.5);
    EXPECT_TRUE((z * a).is_zero());
    EXPECT_EQ((z + a).to_real(), -3.5);
    EXPECT_TRUE((a - a).is_zero());
    EXPECT_EQ(z.to_real(), 0.0);
    EXPECT_TRUE(std::isinf(z.log_mag()));
}

TEST(LogAmplitude, ArithmeticMatchesDoubles) {
    LogAmplitude a = LogAmplitude::from_real(2.5);
    LogAmplitude b = LogAmplitude::from_real(-0.75);
    EXPECT_NEAR((a * b).to_real(), -1.875, 1e-15);
    EXPECT_NEAR((a / b).to_real(), 2.5 / -0.75, 1e-14);
    EXPECT_NEAR((a + b).to_real(), 1.75, 1e-15);
    EXPECT_NEAR((b - a).to_real(), -3.25, 1e-15);
    EXPECT_NEAR(a.sqrt().to_real(), std::sqrt(2.5), 1e-15);
}

TEST(LogFactorial, SmallValues) {
    EXPECT_EQ(log_factorial(0), 0.0);
    EXPECT_EQ(log_factorial(1), 0.0);
    EXPECT_NEAR(log_factorial(5), std::log(120.0), 1e-15);
}

TEST(LogFactorial, MatchesBigIntOracle) {
    // ln(170!) from a 40-digit evaluation.
    EXPECT_NEAR(log_factorial(170) / 706.5730622457873471107223, 1.0, 1e-13);
    for (unsigned n : {20u, 100u, 170u, 500u, 2000u}) {
        LogAmplitude exact = to_log_amplitude(factorial(n));
        EXPECT_NEAR(log_factorial(n) / exact.log_mag(), 1.0, 1e-13) << n;
    }
}

TEST(LogFactorial, SeriesBeyondCacheIsContinuous) {
    // Compare the asymptotic branch against the cache through ln(n+1) steps.
    std::uint64_t n = kFactorialCacheSize - 1;
    double direct = log_factorial(n) + std::log(static_cast<double>(n + 1)) + std::log(static_cast<double>(n + 2));
    EXPECT_NEAR(log_factorial(n + 2) / direct, 1.0, 1e-13);
    double x = 1e7;
    double stirling = x * std::log(x) - x + 0.5 * std::log(2 * M_PI * x) + 1.0 / (12 * x);
    EXPECT_NEAR(log_factorial(10000000) / stirling, 1.0, 1e-13);
}

TEST(LogBinomial, Examples) {
    EXPECT_EQ(log_binomial(10, 0), 0.0);
    EXPECT_NEAR(log_binomial(4, 2), std::log(6.0), 1e-15);
    EXPECT_NEAR(log_binomial(200, 100) / 135.7532360812784932075466, 1.0, 1e-13);
    EXPECT_TRUE(std::isinf(log_binomial(5, -1)) && log_binomial(5, -1) < 0);
    EXPECT_TRUE(std::isinf(log_binomial(5, 6)) && log_binomial(5, 6) < 0);
}

TEST(LogBinomial, ConsistentWithFactorials) {
    for (int n = 0; n <= 500; ++n) {
        for (int k = 0; k <= n; k += 7) {
            double expected = log_factorial(n) - log_factorial(k) - log_factorial(n - k);
            ASSERT_NEAR(log_binomial(n, k), expected, 1e-12) << n << " " << k;
        }
    }
}

TEST(Krawtchouk, Examples) {
    EXPECT_EQ(krawtchouk_sum(0, 0, 0), 1);
    EXPECT_EQ(krawtchouk_sum(1, 1, 1), 0);
    EXPECT_EQ(krawtchouk_sum(2, 0, 1), -2);
    EXPECT_EQ(krawtchouk_sum(3, 2, 9), 0);
    EXPECT_EQ(krawtchouk_sum(3, 2, -1), 0);
}

BigInt naive_kraw(unsigned v, unsigned w, int K) {
    BigInt s = 0;
    for (int p = 0; p <= static_cast<int>(v); ++p) {
        for (int q = 0; q <= static_cast<int>(w); ++q) {
            if (p + q == K) {
                BigInt term = binomial(v, p) * binomial(w, q);
                s += ((v - p) % 2 == 0) ? term : BigInt(-term);
            }
        }
    }
    return s;
}

TEST(Krawtchouk, MatchesNaiveDoubleSum) {
    for (unsigned v = 0; v <= 25; ++v) {
        for (unsigned w = 0; w <= 25; w += 3) {
            for (int K = 0; K <= static_cast<int>(v + w); ++K) {
                ASSERT_EQ(krawtchouk_sum(v, w, K), naive_kraw(v, w, K)) << v << " " << w << " " << K;
            }
        }
    }
}

TEST(Krawtchouk, GeneratingPolynomialSymmetry) {
    for (unsigned v = 0; v <= 40; ++v) {
        for (unsigned w = 0; w <= 40; ++w) {
            for (int K = 0; K <= static_cast<int>(v + w); ++K) {
                BigInt rhs = krawtchouk_sum(w, v, K);
                if ((v + w + static_cast<unsigned>(K)) % 2 != 0) {
                    rhs = -rhs;
                }
                ASSERT_EQ(krawtchouk_sum(v, w, K), rhs) << v << " " << w << " " << K;
            }
        }
    }
}

TEST(Krawtchouk, ReflectionSymmetry) {
    for (unsigned v = 0; v <= 30; ++v) {
        for (unsigned w = 0; w <= 30; ++w) {
            for (int K = 0; K <= static_cast<int>(v + w); ++K) {
                BigInt mirrored = krawtchouk_sum(v, w, static_cast<int>(v + w) - K);
                ASSERT_EQ(krawtchouk_sum(v, w, K), (v % 2 == 0) ? mirrored : BigInt(-mirrored));
            }
        }
    }
}

TEST(Krawtchouk, BalancedSplitterRowsAreUnitExactly) {
    for (unsigned N = 0; N <= 60; ++N) {
        for (unsigned v = 0; v <= N; ++v) {
            unsigned w = N - v;
            cpp_rational total = 0;
            for (unsigned K = 0; K <= N; ++K) {
                BigInt k = krawtchouk_sum(v, w, K);
                total += cpp_rational(k * k * factorial(K) * factorial(N - K),
                                      (BigInt(1) << N) * factorial(v) * factorial(w));
            }
            ASSERT_EQ(total, 1) << v << " " << w;
        }
    }
}

TEST(SignedLogsum, Examples) {
    EXPECT_TRUE(signed_logsum({}).is_zero());
    LogAmplitude x(1, 12.5);
    std::vector<LogAmplitude> pair{x, -x};
    EXPECT_EQ(signed_logsum(pair).sign(), 0);
    std::vector<LogAmplitude> big{LogAmplitude(1, 1000.0), LogAmplitude(1, 1000.0)};
    EXPECT_NEAR(signed_logsum(big).log_mag(), 1000.0 + std::log(2.0), 1e-12);
}

// Independent re-summation with MPFR at 400 bits, term by term.
LogAmplitude mpfr_reference(const std::vector<LogAmplitude> &terms) {
    mpfr_t acc, t;
    mpfr_init2(acc, 400);
    mpfr_init2(t, 400);
    mpfr_set_zero(acc, 1);
    for (const auto &x : terms) {
        if (x.is_zero()) {
            continue;
        }
        mpfr_set_d(t, x.log_mag(), MPFR_RNDN);
        mpfr_exp(t, t, MPFR_RNDN);
        if (x.sign() < 0) {
            mpfr_neg(t, t, MPFR_RNDN);
        }
        mpfr_add(acc, acc, t, MPFR_RNDN);
    }
    LogAmplitude out;
    if (!mpfr_zero_p(acc)) {
        int sign = mpfr_sgn(acc);
        mpfr_abs(acc, acc, MPFR_RNDN);
        mpfr_log(acc, acc, MPFR_RNDN);
        out = LogAmplitude(sign, mpfr_get_d(acc, MPFR_RNDN));
    }
    mpfr_clear(acc);
    mpfr_clear(t);
    return out;
}

TEST(SignedLogsum, RandomTermsMatchHighPrecisionOracle) {
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> mag(-40.0, 0.0);
    std::bernoulli_distribution coin(0.5);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<LogAmplitude> terms;
        for (int i = 0; i < 10000; ++i) {
            terms.emplace_back(coin(rng) ? 1 : -1, mag(rng) + 500.0);
        }
        LogAmplitude ref = mpfr_reference(terms);
        double largest = 500.0;
        if (ref.is_zero() || ref.log_mag() < largest + std::log(1e-6)) {
            continue;
        }
        ++checked;
        for (unsigned bits : {0u, 256u}) {
            LogAmplitude got = signed_logsum(terms, SumOptions{bits});
            ASSERT_EQ(got.sign(), ref.sign());
            EXPECT_NEAR(got.log_mag() - ref.log_mag(), 0.0, 1e-9) << "bits " << bits;
        }
    }
    EXPECT_GT(checked, 5);
}

TEST(SignedLogsum, HighPrecisionModeResolvesCancellation) {
    // 1e20 + 1 - 1e20 loses the 1 in doubles but not at 200 bits.
    std::vector<LogAmplitude> terms{LogAmplitude(1, std::log(1e20)), LogAmplitude::one(), LogAmplitude(-1, std::log(1e20))};
    LogAmplitude hp = signed_logsum(terms, SumOptions{200});
    EXPECT_NEAR(hp.to_real(), 1.0, 1e-12);
}

TEST(CompensatedSum, RecoversSmallAddends) {
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i) {
        s.add(1e-17);
    }
    s.add(-1.0);
    EXPECT_NEAR(s.value(), 1e-14, 1e-20);
}

TEST(BinomialKernel, RowsSumToOneAndMatchFormula) {
    BinomialKernel B(300, 0.37);
    for (int x = 0; x <= 300; x += 13) {
        double total = 0.0;
        for (int y = 0; y <= x; ++y) {
            total += B(x, y);
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
    EXPECT_NEAR(B(10, 3), 120 * std::pow(0.37, 3) * std::pow(0.63, 7), 1e-15);
    BinomialKernel zero(5, 0.0);
    EXPECT_EQ(zero(5, 0), 1.0);
    EXPECT_EQ(zero(5, 1), 0.0);
    BinomialKernel one(5, 1.0);
    EXPECT_EQ(one(5, 5), 1.0);
    EXPECT_EQ(one(5, 4), 0.0);
}

}  // namespace
}  // namespace mdf
