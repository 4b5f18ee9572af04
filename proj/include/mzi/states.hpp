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

#ifndef MZI_STATES_HPP
#define MZI_STATES_HPP

// Closed-form heralded states. With at most one photon in every ancilla
// port the heralded output is
//
//   |psi> = (c0 + c1 a+ + c2 a+^2) |u11 alpha> / sqrt(N),
//
// with p = N exp((|u11|^2 - 1) |alpha|^2). The sixteen herald patterns are
// numbered psi1..psi16 in the order of kTableRows. Larger photon numbers go
// through general_heralded, which expands the generating functions directly.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mzi/component_moments.hpp"
#include "mzi/error.hpp"
#include "mzi/fock.hpp"
#include "mzi/genfunc.hpp"
#include "mzi/unitary.hpp"

namespace mzi {

struct HeraldPattern {
    int n2, n3, m2, m3;
    friend bool operator==(const HeraldPattern&, const HeraldPattern&) = default;
};

/// Row i-1 holds the herald pattern of psi_i.
inline constexpr std::array<HeraldPattern, 16> kTableRows = {{
    {0, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 1, 1},
    {1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0},
    {0, 1, 0, 1}, {0, 1, 1, 0}, {1, 0, 0, 1}, {1, 0, 1, 1},
    {0, 1, 1, 1}, {1, 1, 1, 0}, {1, 1, 0, 1}, {1, 1, 1, 1},
}};

inline constexpr int kFamilyCount = 16;

inline void check_family(int family) {
    if (family < 1 || family > kFamilyCount)
        throw Error(ErrorCode::InvalidArgument, "family index must be in 1..16, got " + std::to_string(family));
}

inline HeraldPattern family_pattern(int family) {
    check_family(family);
    return kTableRows[static_cast<std::size_t>(family - 1)];
}

inline int family_of(const HeraldPattern& p) {
    for (std::size_t i = 0; i < kTableRows.size(); ++i)
        if (kTableRows[i] == p) return static_cast<int>(i) + 1;
    throw Error(ErrorCode::OutOfTableRange, "herald pattern outside {0,1}^4");
}

inline int family_of(const HeraldSpec& s) { return family_of(HeraldPattern{s.n2, s.n3, s.m2, s.m3}); }

inline std::string family_label(int family) {
    check_family(family);
    return "psi" + std::to_string(family);
}

/// Accepts "psi7" or "7".
inline int parse_family(std::string_view text) {
    if (text.starts_with("psi")) text.remove_prefix(3);
    int value = 0;
    if (text.empty() || text.size() > 2) throw Error(ErrorCode::InvalidArgument, "bad family name");
    for (char ch : text) {
        if (ch < '0' || ch > '9') throw Error(ErrorCode::InvalidArgument, "bad family name");
        value = value * 10 + (ch - '0');
    }
    check_family(value);
    return value;
}

inline HeraldSpec family_spec(int family, double alpha_mag, double phi, double theta = 0.0) {
    const HeraldPattern p = family_pattern(family);
    return HeraldSpec{p.n2, p.n3, p.m2, p.m3, alpha_mag, theta, phi};
}

struct ClosedFormState {
    cplx c0, c1, c2;
    cplx seed;  ///< u11 * alpha
    double norm = 0.0;
    double probability = 0.0;
    std::string label;

    std::vector<cplx> coefficients() const { return {c0, c1, c2}; }
};

/// Squared norm of (c0 + c1 a+ + c2 a+^2)|seed>.
inline double normalization(cplx c0, cplx c1, cplx c2, cplx seed) {
    const double b2 = std::norm(seed);
    const double n0 = std::norm(c0), n1 = std::norm(c1), n2 = std::norm(c2);
    return n0 + n1 + 2.0 * n2 + (n1 + 4.0 * n2) * b2 + n2 * b2 * b2 + 2.0 * std::real(c0 * std::conj(c2) * seed * seed) +
           2.0 * std::real((c0 * std::conj(c1) + 2.0 * c1 * std::conj(c2)) * seed) +
           2.0 * std::real(c1 * std::conj(c2) * b2 * seed);
}

/// p = N exp((|u11|^2 - 1) |alpha|^2)
inline double success_probability(const ClosedFormState& state, double alpha_mag, cplx u11) {
    return state.norm * std::exp((std::norm(u11) - 1.0) * alpha_mag * alpha_mag);
}

/// Coefficients of the table row matching spec's herald pattern.
inline ClosedFormState table1_coeffs(const HeraldSpec& spec, const TransferMatrix& m, const DerivedCoeffs& d) {
    const int family = family_of(spec);
    const cplx a = spec.alpha();
    const cplx a2 = a * a;
    auto u = [&](int i, int j) { return m.u(i, j); };
    ClosedFormState s;
    switch (family) {
        case 1: s.c0 = 1.0; break;
        case 2: s.c0 = u(1, 2) * a; break;
        case 3: s.c0 = u(1, 3) * a; break;
        case 4: s.c0 = u(1, 2) * u(1, 3) * a2; break;
        case 5: s.c1 = u(2, 1); break;
        case 6: s.c1 = u(3, 1); break;
        case 7: s.c2 = u(2, 1) * u(3, 1); break;
        case 8:
            s.c0 = u(2, 2);
            s.c1 = u(1, 2) * u(2, 1) * a;
            break;
        case 9:
            s.c0 = u(3, 3);
            s.c1 = u(1, 3) * u(3, 1) * a;
            break;
        case 10:
            s.c0 = u(3, 2);
            s.c1 = u(1, 2) * u(3, 1) * a;
            break;
        case 11:
            s.c0 = u(2, 3);
            s.c1 = u(1, 3) * u(2, 1) * a;
            break;
        case 12:
            s.c0 = d.tau1 * a;
            s.c1 = u(1, 2) * u(1, 3) * u(2, 1) * a2;
            break;
        case 13:
            s.c0 = d.tau2 * a;
            s.c1 = u(1, 2) * u(1, 3) * u(3, 1) * a2;
            break;
        case 14:
            s.c1 = d.tau3;
            s.c2 = u(1, 2) * u(2, 1) * u(3, 1) * a;
            break;
        case 15:
            s.c1 = d.tau4;
            s.c2 = u(1, 3) * u(2, 1) * u(3, 1) * a;
            break;
        case 16:
            s.c0 = d.tau5;
            s.c1 = d.kappa * a;
            s.c2 = u(1, 2) * u(1, 3) * u(2, 1) * u(3, 1) * a2;
            break;
    }
    s.seed = u(1, 1) * a;
    s.norm = normalization(s.c0, s.c1, s.c2, s.seed);
    s.probability = success_probability(s, spec.alpha_mag, u(1, 1));
    s.label = family_label(family);
    return s;
}

inline constexpr double kImpossibleNorm = 1e-28;

/// Table state for spec; throws HeraldImpossible on selection-rule zeros.
inline ClosedFormState closed_form_state(const HeraldSpec& spec) {
    spec.validate();
    const TransferMatrix m = compose(spec.phi);
    ClosedFormState s = table1_coeffs(spec, m, derived_coeffs(m));
    if (!(s.norm >= kImpossibleNorm))
        throw Error(ErrorCode::HeraldImpossible, s.label + " is forbidden at these parameters");
    return s;
}

namespace detail {

/// Number-basis amplitudes of sum_h c_h a+^h |seed>, unnormalized.
inline std::vector<cplx> polynomial_state_amplitudes(const std::vector<cplx>& coeffs, cplx seed, int cutoff) {
    std::vector<cplx> coherent(static_cast<std::size_t>(cutoff) + 1);
    coherent[0] = std::exp(-0.5 * std::norm(seed));
    for (int n = 1; n <= cutoff; ++n)
        coherent[static_cast<std::size_t>(n)] = coherent[static_cast<std::size_t>(n - 1)] * seed / std::sqrt(double(n));
    std::vector<cplx> out(coherent.size(), cplx{});
    for (std::size_t h = 0; h < coeffs.size(); ++h) {
        if (coeffs[h] == cplx{}) continue;
        for (int n = static_cast<int>(h); n <= cutoff; ++n) {
            // a+^h |n-h> = sqrt(n!/(n-h)!) |n>
            double raise = 1.0;
            for (int i = 0; i < static_cast<int>(h); ++i) raise *= n - i;
            out[static_cast<std::size_t>(n)] +=
                coeffs[h] * std::sqrt(raise) * coherent[static_cast<std::size_t>(n) - h];
        }
    }
    return out;
}

inline FockVector polynomial_state_vector(const std::vector<cplx>& coeffs, cplx seed, double norm, int cutoff) {
    if (cutoff < static_cast<int>(coeffs.size()) - 1)
        throw Error(ErrorCode::InvalidArgument, "cutoff below the polynomial degree");
    std::vector<cplx> amps = polynomial_state_amplitudes(coeffs, seed, cutoff);
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : amps) a *= scale;
    FockVector v(std::move(amps));
    if (v.tail_mass() >= kMaxTailMass)
        throw Error(ErrorCode::CutoffInadequate, "tail mass " + std::to_string(v.tail_mass()) + " at cutoff " +
                                                     std::to_string(cutoff));
    return v.phase_fixed();
}

}  // namespace detail

/// Normalized, phase-fixed number-basis vector of the closed-form state.
inline FockVector state_fock_vector(const ClosedFormState& state, int cutoff) {
    if (cutoff < 2) throw Error(ErrorCode::InvalidArgument, "cutoff must be >= 2");
    if (!(state.norm >= kImpossibleNorm)) throw Error(ErrorCode::HeraldImpossible, "state has zero norm");
    return detail::polynomial_state_vector(state.coefficients(), state.seed, state.norm, cutoff);
}

struct DensityComponent {
    int h_left = 0;
    int h_right = 0;
    cplx weight;
};

/// rho = sum weight * a+^hl |seed><seed| a^hr, weight = c_hl conj(c_hr) / N.
inline std::vector<DensityComponent> density_components(const ClosedFormState& state) {
    const std::array<cplx, 3> c = {state.c0, state.c1, state.c2};
    std::vector<DensityComponent> out;
    for (int hl = 0; hl < 3; ++hl)
        for (int hr = 0; hr < 3; ++hr) {
            const cplx w = c[static_cast<std::size_t>(hl)] * std::conj(c[static_cast<std::size_t>(hr)]) / state.norm;
            if (w != cplx{}) out.push_back({hl, hr, w});
        }
    return out;
}

inline constexpr int kMaxGeneralPhotons = 12;

struct GeneralState {
    std::vector<cplx> coefficients;  ///< c_d of a+^d, d = 0..n2+n3
    cplx seed;
    double norm = 0.0;
    double probability = 0.0;             ///< from the norm of the coefficient polynomial
    double probability_generating = 0.0;  ///< eight-variable extraction on the trace
    std::string label = "general";

    FockVector fock_vector(int cutoff) const {
        return detail::polynomial_state_vector(coefficients, seed, norm, cutoff);
    }
};

namespace detail {

inline double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace detail

/// Heralded state for arbitrary (n2, n3, m2, m3) by coefficient extraction
/// from the generating function
///   e^{-|a|^2/2} d_s2^n2 d_s3^n3 d_t2^m2 d_t3^m3
///   e^{t2(a u12 + s2 u22 + s3 u32) + t3(a u13 + s2 u23 + s3 u33)}
///   e^{(a u11 + s2 u21 + s3 u31) a+} |0>  / sqrt(n2! n3! m2! m3!).
/// The probability is computed both from the resulting polynomial and from
/// the trace formula over (s2, s3, t2, t3, f2, f3, g2, g3).
inline GeneralState general_heralded(const HeraldSpec& spec, const TransferMatrix& m) {
    spec.validate();
    if (spec.n2 + spec.n3 + spec.m2 + spec.m3 > kMaxGeneralPhotons)
        throw Error(ErrorCode::SeriesOrderTooLarge, "n2+n3+m2+m3 must not exceed 12");
    auto u = [&](int i, int j) { return m.u(i, j); };
    const cplx a = spec.alpha();
    const cplx ac = std::conj(a);
    const double fact = detail::factorial(spec.n2) * detail::factorial(spec.n3) * detail::factorial(spec.m2) *
                        detail::factorial(spec.m3);

    // State vector.
    constexpr std::size_t s2 = 0, s3 = 1, t2 = 2, t3 = 3;
    FormalSeries exponent({"s2", "s3", "t2", "t3"}, {spec.n2, spec.n3, spec.m2, spec.m3});
    exponent.add_power(t2, 1, a * u(1, 2));
    exponent.add_product(t2, s2, u(2, 2));
    exponent.add_product(t2, s3, u(3, 2));
    exponent.add_power(t3, 1, a * u(1, 3));
    exponent.add_product(t3, s2, u(2, 3));
    exponent.add_product(t3, s3, u(3, 3));
    const FormalSeries ancilla = series_exp(exponent);

    FormalSeries linear = FormalSeries::zero_like(exponent);
    linear.add_power(s2, 1, u(2, 1));
    linear.add_power(s3, 1, u(3, 1));

    const MultiIndex target = {spec.n2, spec.n3, spec.m2, spec.m3};
    const int degree = spec.n2 + spec.n3;
    GeneralState out;
    out.seed = u(1, 1) * a;
    FormalSeries power = FormalSeries::constant_like(exponent, 1.0);  // linear^d / d!
    for (int d = 0; d <= degree; ++d) {
        if (d > 0) power = series_mul(power, linear) * cplx(1.0 / d);
        out.coefficients.push_back(extract_derivative(series_mul(ancilla, power), target) / std::sqrt(fact));
    }
    const ComponentTable table(out.seed, degree, 0);
    out.norm = std::real(polynomial_state_moment(out.coefficients, table, 0, 0));
    const double gaussian = std::exp((std::norm(u(1, 1)) - 1.0) * spec.alpha_mag * spec.alpha_mag);
    out.probability = out.norm * gaussian;

    // Trace route.
    constexpr std::size_t f2 = 4, f3 = 5, g2 = 6, g3 = 7;
    FormalSeries trace({"s2", "s3", "t2", "t3", "f2", "f3", "g2", "g3"},
                       {spec.n2, spec.n3, spec.m2, spec.m3, spec.n2, spec.n3, spec.m2, spec.m3});
    trace.add_power(t2, 1, a * u(1, 2));
    trace.add_product(t2, s2, u(2, 2));
    trace.add_product(t2, s3, u(3, 2));
    trace.add_power(t3, 1, a * u(1, 3));
    trace.add_product(t3, s2, u(2, 3));
    trace.add_product(t3, s3, u(3, 3));
    trace.add_power(g2, 1, ac * std::conj(u(1, 2)));
    trace.add_product(g2, f2, std::conj(u(2, 2)));
    trace.add_product(g2, f3, std::conj(u(3, 2)));
    trace.add_power(g3, 1, ac * std::conj(u(1, 3)));
    trace.add_product(g3, f2, std::conj(u(2, 3)));
    trace.add_product(g3, f3, std::conj(u(3, 3)));
    // (conj(a u11) + f2 conj(u21) + f3 conj(u31)) (a u11 + s2 u21 + s3 u31) minus its constant term
    const cplx left[3] = {ac * std::conj(u(1, 1)), std::conj(u(2, 1)), std::conj(u(3, 1))};
    const cplx right[3] = {a * u(1, 1), u(2, 1), u(3, 1)};
    const std::size_t left_var[3] = {0, f2, f3};
    const std::size_t right_var[3] = {0, s2, s3};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const cplx c = left[i] * right[j];
            if (i == 0 && j == 0) continue;
            if (i == 0) trace.add_power(right_var[j], 1, c);
            else if (j == 0) trace.add_power(left_var[i], 1, c);
            else trace.add_product(left_var[i], right_var[j], c);
        }
    const FormalSeries expanded = series_exp(trace);
    const cplx d8 = extract_derivative(expanded, {spec.n2, spec.n3, spec.m2, spec.m3, spec.n2, spec.n3, spec.m2, spec.m3});
    out.probability_generating = std::real(d8) * gaussian / fact;

    if (!(out.norm >= kImpossibleNorm))
        throw Error(ErrorCode::HeraldImpossible, "herald forbidden at these parameters");
    return out;
}

inline GeneralState general_heralded(const HeraldSpec& spec) { return general_heralded(spec, compose(spec.phi)); }

}  // namespace mzi

#endif  // MZI_STATES_HPP
