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

#ifndef MZI_MOMENTS_HPP
#define MZI_MOMENTS_HPP

// Normally ordered moments <a+^k a^l> of heralded states, two ways:
//  - from the density decomposition over a+^hl |seed><seed| a^hr (canonical),
//  - from the full ten-variable generating function of the heralded density
//    operator (s2, s3, t2, t3, f2, f3, g2, g3, mu, nu).
// Quadrature variances and dB squeezing are assembled from moments k + l <= 2.

#include <cmath>
#include <complex>
#include <vector>

#include "mzi/component_moments.hpp"
#include "mzi/error.hpp"
#include "mzi/fock.hpp"
#include "mzi/genfunc.hpp"
#include "mzi/states.hpp"
#include "mzi/unitary.hpp"

namespace mzi {

inline constexpr int kMaxMomentOrder = 8;

struct MomentQuery {
    int k = 0;
    int l = 0;

    void validate() const {
        if (k < 0 || l < 0 || k > kMaxMomentOrder || l > kMaxMomentOrder)
            throw Error(ErrorCode::InvalidArgument, "moment orders must lie in 0..8");
    }
};

inline cplx moment_component(int h_left, int h_right, const MomentQuery& q, cplx seed) {
    q.validate();
    return moment_component(h_left, h_right, q.k, q.l, seed);
}

/// Square table of moments <a+^k a^l>, k, l = 0..order.
class MomentMatrix {
public:
    MomentMatrix(int order, std::vector<cplx> values) : order_(order), values_(std::move(values)) {}
    int order() const { return order_; }
    cplx operator()(int k, int l) const {
        if (k < 0 || l < 0 || k > order_ || l > order_)
            throw Error(ErrorCode::OrderOverflow, "moment matrix queried beyond its order");
        return values_[static_cast<std::size_t>(k * (order_ + 1) + l)];
    }

private:
    int order_;
    std::vector<cplx> values_;
};

/// Moments of sum_h c_h a+^h |seed> / sqrt(norm) up to `order` in k and l.
inline MomentMatrix polynomial_state_moments(const std::vector<cplx>& coeffs, cplx seed, double norm, int order) {
    const ComponentTable table(seed, static_cast<int>(coeffs.size()) - 1, order);
    std::vector<cplx> values;
    values.reserve(static_cast<std::size_t>((order + 1) * (order + 1)));
    for (int k = 0; k <= order; ++k)
        for (int l = 0; l <= order; ++l) values.push_back(polynomial_state_moment(coeffs, table, k, l) / norm);
    return MomentMatrix(order, std::move(values));
}

/// All moments up to `order` via the density decomposition.
inline MomentMatrix moment_table(const ClosedFormState& state, int order) {
    MomentQuery{order, order}.validate();
    return polynomial_state_moments(state.coefficients(), state.seed, state.norm, order);
}

/// <a+^k a^l> as sum over density components of weight * moment_component.
inline cplx moment(const ClosedFormState& state, const MomentQuery& q) {
    q.validate();
    cplx acc = 0.0;
    for (const DensityComponent& c : density_components(state))
        acc += c.weight * moment_component(c.h_left, c.h_right, q.k, q.l, state.seed);
    return acc;
}

/// All moments up to `order` from the ten-variable generating function of
/// the heralded density operator. The Gaussian prefactor and the success
/// probability cancel in the ratio D(k, l) / D(0, 0).
inline MomentMatrix moment_way1_table(const HeraldSpec& spec, int order) {
    spec.validate();
    MomentQuery{order, order}.validate();
    if (spec.n2 + spec.n3 + spec.m2 + spec.m3 > kMaxGeneralPhotons)
        throw Error(ErrorCode::SeriesOrderTooLarge, "n2+n3+m2+m3 must not exceed 12");
    const TransferMatrix m = compose(spec.phi);
    auto u = [&](int i, int j) { return m.u(i, j); };
    const cplx a = spec.alpha();
    const cplx ac = std::conj(a);

    constexpr std::size_t s2 = 0, s3 = 1, t2 = 2, t3 = 3, f2 = 4, f3 = 5, g2 = 6, g3 = 7, mu = 8, nu = 9;
    FormalSeries e({"s2", "s3", "t2", "t3", "f2", "f3", "g2", "g3", "mu", "nu"},
                   {spec.n2, spec.n3, spec.m2, spec.m3, spec.n2, spec.n3, spec.m2, spec.m3, order, order});
    e.add_power(t2, 1, a * u(1, 2));
    e.add_product(t2, s2, u(2, 2));
    e.add_product(t2, s3, u(3, 2));
    e.add_power(t3, 1, a * u(1, 3));
    e.add_product(t3, s2, u(2, 3));
    e.add_product(t3, s3, u(3, 3));
    e.add_power(g2, 1, ac * std::conj(u(1, 2)));
    e.add_product(g2, f2, std::conj(u(2, 2)));
    e.add_product(g2, f3, std::conj(u(3, 2)));
    e.add_power(g3, 1, ac * std::conj(u(1, 3)));
    e.add_product(g3, f2, std::conj(u(2, 3)));
    e.add_product(g3, f3, std::conj(u(3, 3)));

    const cplx au11 = a * u(1, 1);
    const cplx au11c = std::conj(au11);
    const cplx u21 = u(2, 1), u31 = u(3, 1);
    const cplx u21c = std::conj(u21), u31c = std::conj(u31);
    // (nu + f2 u21*) a u11 + (mu + s2 u21) a* u11* + (nu + f3 u31*) s2 u21
    // + (mu + s3 u31) f2 u21* + (nu + a* u11*) s3 u31 + (mu + a u11) f3 u31*
    // + f2 s2 |u21|^2 + f3 s3 |u31|^2
    e.add_power(nu, 1, au11);
    e.add_power(f2, 1, u21c * au11);
    e.add_power(mu, 1, au11c);
    e.add_power(s2, 1, u21 * au11c);
    e.add_product(nu, s2, u21);
    e.add_product(f3, s2, u31c * u21);
    e.add_product(mu, f2, u21c);
    e.add_product(s3, f2, u31 * u21c);
    e.add_product(nu, s3, u31);
    e.add_power(s3, 1, au11c * u31);
    e.add_product(mu, f3, u31c);
    e.add_power(f3, 1, au11 * u31c);
    e.add_product(f2, s2, std::norm(u21));
    e.add_product(f3, s3, std::norm(u31));

    const FormalSeries g = series_exp(e);
    MultiIndex idx = {spec.n2, spec.n3, spec.m2, spec.m3, spec.n2, spec.n3, spec.m2, spec.m3, 0, 0};
    const cplx trace = extract_derivative(g, idx);
    if (!(std::abs(trace) > 0.0)) throw Error(ErrorCode::HeraldImpossible, "herald forbidden at these parameters");
    std::vector<cplx> values;
    for (int k = 0; k <= order; ++k)
        for (int l = 0; l <= order; ++l) {
            idx[mu] = k;
            idx[nu] = l;
            values.push_back(extract_derivative(g, idx) / trace);
        }
    return MomentMatrix(order, std::move(values));
}

inline cplx moment_way1(const HeraldSpec& spec, const MomentQuery& q) {
    q.validate();
    return moment_way1_table(spec, std::max(q.k, q.l))(q.k, q.l);
}

struct QuadratureReport {
    double var_x = 0.0;
    double var_p = 0.0;
    double squeeze_db_x = 0.0;
};

/// -10 log10(variance / 0.5); positive below the vacuum level.
inline double squeeze_db(double variance) {
    if (!(variance > 0.0)) throw Error(ErrorCode::NonpositiveVariance, "variance must be positive");
    return -10.0 * std::log10(variance / 0.5);
}

/// x = (a + a+)/sqrt2, p = (a - a+)/(i sqrt2) from <a>, <a^2>, <a+ a>.
inline QuadratureReport quadratures_from_moments(cplx mean_a, cplx mean_a2, double mean_n) {
    QuadratureReport r;
    const double re_a = mean_a.real(), im_a = mean_a.imag();
    r.var_x = 0.5 * (2.0 * mean_a2.real() + 2.0 * mean_n + 1.0) - 2.0 * re_a * re_a;
    r.var_p = 0.5 * (-2.0 * mean_a2.real() + 2.0 * mean_n + 1.0) - 2.0 * im_a * im_a;
    r.squeeze_db_x = squeeze_db(r.var_x);
    return r;
}

inline QuadratureReport quadratures(const MomentMatrix& m) {
    return quadratures_from_moments(m(0, 1), m(0, 2), m(1, 1).real());
}

/// Quadratures of sum_h c_h a+^h |seed>. In the frame displaced by seed the
/// state is sum_j d_j a+^j |0> (a+ -> a+ + conj(seed)), a finite number-basis
/// vector; its moments give the same variances without the cancellation of
/// raw moments at large |seed|.
inline QuadratureReport polynomial_state_quadratures(const std::vector<cplx>& coeffs, cplx seed) {
    const std::size_t n = coeffs.size();
    const cplx sc = std::conj(seed);
    std::vector<cplx> v(n, cplx{});
    for (std::size_t h = 0; h < n; ++h) {
        cplx power = 1.0;
        double binom = 1.0;
        for (std::size_t j = h + 1; j-- > 0;) {
            v[j] += coeffs[h] * binom * power;
            binom = binom * static_cast<double>(j) / static_cast<double>(h - j + 1);
            power *= sc;
        }
    }
    double norm = 0.0, mean_n = 0.0, fact = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) fact *= static_cast<double>(j);
        v[j] *= std::sqrt(fact);
        norm += std::norm(v[j]);
        mean_n += static_cast<double>(j) * std::norm(v[j]);
    }
    if (!(norm > 0.0)) throw Error(ErrorCode::HeraldImpossible, "state has zero norm");
    cplx mean_b = 0.0, mean_b2 = 0.0;
    for (std::size_t j = 1; j < n; ++j) mean_b += std::conj(v[j - 1]) * v[j] * std::sqrt(double(j));
    for (std::size_t j = 2; j < n; ++j) mean_b2 += std::conj(v[j - 2]) * v[j] * std::sqrt(double(j * (j - 1)));
    return quadratures_from_moments(mean_b / norm, mean_b2 / norm, mean_n / norm);
}

inline QuadratureReport quadratures(const ClosedFormState& state) {
    return polynomial_state_quadratures(state.coefficients(), state.seed);
}

}  // namespace mzi

#endif  // MZI_MOMENTS_HPP
