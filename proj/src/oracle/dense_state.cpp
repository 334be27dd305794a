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


#include <map>
#include <stdexcept>
#include <utility>

#include "mdf/oracle.hpp"

namespace mdf::oracle {

namespace {

HighPrec factorial_hp(int n) {
    HighPrec f = 1;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

HighPrec norm_factor(int K, int L, int n, int m) {
    return boost::multiprecision::sqrt(factorial_hp(K) * factorial_hp(L) / (factorial_hp(n) * factorial_hp(m)));
}

LogAmplitude to_log(const HighPrec &x) {
    if (x == 0) {
        return LogAmplitude::zero();
    }
    return {x > 0 ? 1 : -1, static_cast<double>(boost::multiprecision::log(boost::multiprecision::abs(x)))};
}

}  // namespace

Matrix2 beam_splitter(double r) {
    HighPrec s = boost::multiprecision::sqrt(HighPrec(r));
    HighPrec c = boost::multiprecision::sqrt(HighPrec(1) - HighPrec(r));
    return {{{c, s}, {-s, c}}};
}

Matrix2 detection_pbs() {
    HighPrec h = 1 / boost::multiprecision::sqrt(HighPrec(2));
    return {{{-h, h}, {h, h}}};
}

std::vector<HighPrec> two_mode_amplitudes(const Matrix2 &T, int n, int m) {
    // poly[L] is the coefficient of x^(N-L) y^L.
    std::vector<HighPrec> poly{HighPrec(1)};
    auto multiply = [&poly](const HighPrec &cx, const HighPrec &cy) {
        std::vector<HighPrec> next(poly.size() + 1, HighPrec(0));
        for (std::size_t L = 0; L < poly.size(); ++L) {
            next[L] += poly[L] * cx;
            next[L + 1] += poly[L] * cy;
        }
        poly = std::move(next);
    };
    for (int i = 0; i < n; ++i) {
        multiply(T[0][0], T[0][1]);
    }
    for (int i = 0; i < m; ++i) {
        multiply(T[1][0], T[1][1]);
    }
    const int N = n + m;
    std::vector<HighPrec> out(static_cast<std::size_t>(N) + 1);
    for (int K = 0; K <= N; ++K) {
        int L = N - K;
        out[static_cast<std::size_t>(K)] = poly[static_cast<std::size_t>(L)] * norm_factor(K, L, n, m);
    }
    return out;
}

LogAmplitude bs_matrix_element(int n, int m, int K, int L, double r) {
    if (n < 0 || m < 0 || K < 0 || L < 0 || n + m != K + L) {
        return LogAmplitude::zero();
    }
    if (!(r >= 0.0 && r <= 1.0)) {
        throw std::invalid_argument("bs_matrix_element: r must lie in [0,1]");
    }
    const int N = n + m;
    if (N > 20) {
        return to_log(two_mode_amplitudes(beam_splitter(r), n, m)[static_cast<std::size_t>(K)]);
    }
    // Exact expansion: key (power of y, power of s), s = sqrt(r), c = sqrt(1-r),
    // and the power of c is whatever remains of the degree.
    using Poly = std::map<std::pair<int, int>, BigInt>;
    Poly poly{{{0, 0}, BigInt(1)}};
    auto multiply = [&poly](int sx, int x_s_pow, int sy, int y_s_pow) {
        Poly next;
        for (const auto &[key, coef] : poly) {
            next[{key.first, key.second + x_s_pow}] += coef * sx;
            next[{key.first + 1, key.second + y_s_pow}] += coef * sy;
        }
        poly = std::move(next);
    };
    for (int i = 0; i < n; ++i) {
        multiply(1, 0, 1, 1);  // c x + s y
    }
    for (int i = 0; i < m; ++i) {
        multiply(-1, 1, 1, 0);  // -s x + c y
    }
    HighPrec s = boost::multiprecision::sqrt(HighPrec(r));
    HighPrec c = boost::multiprecision::sqrt(HighPrec(1) - HighPrec(r));
    HighPrec sum = 0;
    for (const auto &[key, coef] : poly) {
        if (key.first != L || coef == 0) {
            continue;
        }
        sum += HighPrec(coef) * boost::multiprecision::pow(s, key.second) * boost::multiprecision::pow(c, N - key.second);
    }
    return to_log(sum * norm_factor(K, L, n, m));
}

DenseState::DenseState(std::vector<int> dims) : dims_(std::move(dims)), strides_(dims_.size()) {
    std::size_t total = 1;
    for (std::size_t i = dims_.size(); i-- > 0;) {
        if (dims_[i] <= 0) {
            throw std::invalid_argument("DenseState: mode dimensions must be positive");
        }
        strides_[i] = total;
        total *= static_cast<std::size_t>(dims_[i]);
    }
    amps_.assign(total, 0.0);
}

std::size_t DenseState::index(std::span<const int> occ) const {
    if (occ.size() != dims_.size()) {
        throw std::invalid_argument("DenseState: wrong number of modes");
    }
    std::size_t i = 0;
    for (std::size_t j = 0; j < occ.size(); ++j) {
        if (occ[j] < 0 || occ[j] >= dims_[j]) {
            throw std::out_of_range("DenseState: occupation beyond cutoff");
        }
        i += static_cast<std::size_t>(occ[j]) * strides_[j];
    }
    return i;
}

std::vector<int> DenseState::occupation(std::size_t i) const {
    std::vector<int> occ(dims_.size());
    for (std::size_t j = 0; j < dims_.size(); ++j) {
        occ[j] = static_cast<int>(i / strides_[j]);
        i %= strides_[j];
    }
    return occ;
}

void DenseState::apply_two_mode(int a, int b, const Matrix2 &T) {
    std::map<std::pair<int, int>, std::vector<double>> cache;
    std::vector<double> out(amps_.size(), 0.0);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (amps_[i] == 0.0) {
            continue;
        }
        std::vector<int> occ = occupation(i);
        const int n = occ[static_cast<std::size_t>(a)];
        const int m = occ[static_cast<std::size_t>(b)];
        auto it = cache.find({n, m});
        if (it == cache.end()) {
            std::vector<HighPrec> hp = two_mode_amplitudes(T, n, m);
            std::vector<double> row(hp.size());
            for (std::size_t K = 0; K < hp.size(); ++K) {
                row[K] = static_cast<double>(hp[K]);
            }
            it = cache.emplace(std::pair(n, m), std::move(row)).first;
        }
        for (int K = 0; K <= n + m; ++K) {
            double e = it->second[static_cast<std::size_t>(K)];
            if (e == 0.0) {
                continue;
            }
            occ[static_cast<std::size_t>(a)] = K;
            occ[static_cast<std::size_t>(b)] = n + m - K;
            out[index(occ)] += e * amps_[i];
        }
    }
    amps_ = std::move(out);
}

double DenseState::project(int mode, int count) {
    double kept = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (amps_[i] == 0.0) {
            continue;
        }
        if (static_cast<int>((i / strides_[static_cast<std::size_t>(mode)]) % static_cast<std::size_t>(dims_[static_cast<std::size_t>(mode)])) != count) {
            amps_[i] = 0.0;
        } else {
            kept += amps_[i] * amps_[i];
        }
    }
    return kept;
}

double DenseState::norm2() const {
    double s = 0.0;
    for (double x : amps_) {
        s += x * x;
    }
    return s;
}

}  // namespace mdf::oracle
