// Copyright 2026 The mzi-herald Authors
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

#ifndef MZI_COMPONENT_MOMENTS_HPP
#define MZI_COMPONENT_MOMENTS_HPP

// Normally ordered moments on the operators a+^hl |b><b| a^hr, where |b> is a
// normalized coherent state:
//
//   Tr(a+^k a^l a+^hl |b><b| a^hr)
//     = d_s^hl d_t^hr d_mu^k d_nu^l
//       exp(s nu + t mu + s t + (nu + t) b + (s + mu) conj(b)) |_0
//
// The exponent is a polynomial without constant term, so all derivatives come
// from one truncated series.

#include <complex>
#include <vector>

#include "mzi/error.hpp"
#include "mzi/genfunc.hpp"

namespace mzi {

namespace detail {

inline FormalSeries component_generating_function(cplx seed, int h_left, int h_right, int k_max, int l_max) {
    FormalSeries exponent({"s", "t", "mu", "nu"}, {h_left, h_right, k_max, l_max});
    constexpr std::size_t s = 0, t = 1, mu = 2, nu = 3;
    exponent.add_product(s, nu, 1.0);
    exponent.add_product(t, mu, 1.0);
    exponent.add_product(s, t, 1.0);
    exponent.add_power(nu, 1, seed);
    exponent.add_power(t, 1, seed);
    exponent.add_power(s, 1, std::conj(seed));
    exponent.add_power(mu, 1, std::conj(seed));
    return series_exp(exponent);
}

}  // namespace detail

/// <a+^k a^l> on a+^hl |seed><seed| a^hr (coherent state normalized).
inline cplx moment_component(int h_left, int h_right, int k, int l, cplx seed) {
    if (h_left < 0 || h_right < 0 || k < 0 || l < 0)
        throw Error(ErrorCode::InvalidArgument, "component and moment orders must be non-negative");
    const FormalSeries g = detail::component_generating_function(seed, h_left, h_right, k, l);
    return extract_derivative(g, {h_left, h_right, k, l});
}

/// Every moment_component with hl, hr <= h_max and k, l <= kl_max for one
/// seed, from a single series expansion.
class ComponentTable {
public:
    ComponentTable(cplx seed, int h_max, int kl_max) : seed_(seed), h_max_(h_max), kl_max_(kl_max) {
        if (h_max < 0 || kl_max < 0) throw Error(ErrorCode::InvalidArgument, "table orders must be non-negative");
        const FormalSeries g = detail::component_generating_function(seed, h_max, h_max, kl_max, kl_max);
        values_.assign(static_cast<std::size_t>((h_max + 1) * (h_max + 1) * (kl_max + 1) * (kl_max + 1)), cplx{});
        g.for_each_term([&](const MultiIndex& e, cplx c) {
            double scale = 1.0;
            for (int n : e)
                for (int f = 2; f <= n; ++f) scale *= f;
            values_[slot(e[0], e[1], e[2], e[3])] = c * scale;
        });
    }

    cplx seed() const { return seed_; }
    int h_max() const { return h_max_; }
    int kl_max() const { return kl_max_; }

    cplx operator()(int h_left, int h_right, int k, int l) const {
        if (h_left < 0 || h_right < 0 || k < 0 || l < 0 || h_left > h_max_ || h_right > h_max_ || k > kl_max_ ||
            l > kl_max_)
            throw Error(ErrorCode::OrderOverflow, "component table queried beyond its orders");
        return values_[slot(h_left, h_right, k, l)];
    }

private:
    std::size_t slot(int hl, int hr, int k, int l) const {
        const int kn = kl_max_ + 1;
        const int hn = h_max_ + 1;
        return static_cast<std::size_t>(((hl * hn + hr) * kn + k) * kn + l);
    }

    cplx seed_;
    int h_max_;
    int kl_max_;
    std::vector<cplx> values_;
};

/// <a+^k a^l> on the unnormalized state sum_h c_h a+^h |seed>, with
/// k = l = 0 giving its squared norm.
inline cplx polynomial_state_moment(const std::vector<cplx>& coeffs, const ComponentTable& table, int k, int l) {
    cplx acc = 0.0;
    const int deg = static_cast<int>(coeffs.size()) - 1;
    for (int hl = 0; hl <= deg; ++hl) {
        if (coeffs[static_cast<std::size_t>(hl)] == cplx{}) continue;
        for (int hr = 0; hr <= deg; ++hr) {
            if (coeffs[static_cast<std::size_t>(hr)] == cplx{}) continue;
            acc += coeffs[static_cast<std::size_t>(hl)] * std::conj(coeffs[static_cast<std::size_t>(hr)]) *
                   table(hl, hr, k, l);
        }
    }
    return acc;
}

}  // namespace mzi

#endif  // MZI_COMPONENT_MOMENTS_HPP
