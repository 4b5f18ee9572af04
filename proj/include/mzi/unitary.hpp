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

#ifndef MZI_UNITARY_HPP
#define MZI_UNITARY_HPP

// Transfer matrices of the six-port Mach-Zehnder interferometer: two
// symmetric tritters enclosing a phase shifter on the first arm.
//
// Convention: T (a1+, a2+, a3+)^T T^+ = U (a1+, a2+, a3+)^T. Entry (r, c)
// is stored at entries[r][c]; the composed device matrix is symmetric so
// the row/column reading of the mode map does not matter for it.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "mzi/error.hpp"

namespace mzi {

using cplx = std::complex<double>;

struct TransferMatrix {
    std::array<std::array<cplx, 3>, 3> entries{};

    static TransferMatrix identity() {
        TransferMatrix m;
        for (int i = 0; i < 3; ++i) m.entries[i][i] = 1.0;
        return m;
    }

    /// Zero-based access.
    cplx operator()(int row, int col) const { return entries[row][col]; }
    cplx& operator()(int row, int col) { return entries[row][col]; }

    /// One-based access matching the u_ij labels of the device formulas.
    cplx u(int i, int j) const { return entries[i - 1][j - 1]; }

    TransferMatrix adjoint() const {
        TransferMatrix m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m.entries[r][c] = std::conj(entries[c][r]);
        return m;
    }

    TransferMatrix transpose() const {
        TransferMatrix m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m.entries[r][c] = entries[c][r];
        return m;
    }

    friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
        TransferMatrix m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                cplx acc = 0.0;
                for (int k = 0; k < 3; ++k) acc += a.entries[r][k] * b.entries[k][c];
                m.entries[r][c] = acc;
            }
        return m;
    }
};

/// Largest entry-wise modulus of the difference.
inline double max_abs_diff(const TransferMatrix& a, const TransferMatrix& b) {
    double d = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) d = std::max(d, std::abs(a(r, c) - b(r, c)));
    return d;
}

/// max |(U U^+ - I)_rc|
inline double unitarity_defect(const TransferMatrix& m) {
    return max_abs_diff(m * m.adjoint(), TransferMatrix::identity());
}

namespace detail {

inline cplx unit_phase(double angle) { return std::polar(1.0, angle); }

inline TransferMatrix tritter(int swap_phases) {
    const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
    const cplx w1 = unit_phase(2.0 * std::numbers::pi / 3.0);
    const cplx w2 = unit_phase(4.0 * std::numbers::pi / 3.0);
    const cplx a = swap_phases ? w2 : w1;
    const cplx b = swap_phases ? w1 : w2;
    TransferMatrix m;
    m.entries = {{{1.0, 1.0, 1.0}, {1.0, a, b}, {1.0, b, a}}};
    for (auto& row : m.entries)
        for (auto& e : row) e *= inv_sqrt3;
    return m;
}

}  // namespace detail

/// First tritter: (1/sqrt3) [[1,1,1],[1,w,w^2],[1,w^2,w]], w = exp(2 pi i / 3).
inline TransferMatrix tritter1_matrix() { return detail::tritter(0); }

/// Second tritter: the first one with w and w^2 exchanged.
inline TransferMatrix tritter2_matrix() { return detail::tritter(1); }

/// Phase shifter on the first arm: diag(exp(-i phi), 1, 1).
inline TransferMatrix phase_matrix(double phi) {
    TransferMatrix m = TransferMatrix::identity();
    m(0, 0) = detail::unit_phase(-phi);
    return m;
}

/// Explicit product T2 * P(phi) * T1.
inline TransferMatrix compose_product(double phi) {
    return tritter2_matrix() * phase_matrix(phi) * tritter1_matrix();
}

/// Closed-form entries of the composed device: diagonal (e^{-i phi} + 2)/3,
/// every off-diagonal entry (e^{-i phi} - 1)/3.
inline TransferMatrix compose_closed_form(double phi) {
    const cplx e = detail::unit_phase(-phi);
    const cplx diag = (e + 2.0) / 3.0;
    const cplx off = (e - 1.0) / 3.0;
    TransferMatrix m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = (r == c) ? diag : off;
    return m;
}

inline constexpr double kClosedFormTolerance = 1e-12;

/// Composed 6p-MZI matrix. The closed form is returned; the factor product
/// is evaluated alongside it as a self-check.
inline TransferMatrix compose(double phi) {
    if (!std::isfinite(phi)) throw Error(ErrorCode::InvalidArgument, "phase must be finite");
    TransferMatrix closed = compose_closed_form(phi);
    const double dev = max_abs_diff(closed, compose_product(phi));
    if (dev > kClosedFormTolerance)
        throw Error(ErrorCode::ClosedFormMismatch,
                    "factor product deviates from closed form by " + std::to_string(dev));
    return closed;
}

/// Bilinear and trilinear entry combinations that appear in the heralded
/// state coefficients.
struct DerivedCoeffs {
    cplx tau1, tau2, tau3, tau4, tau5;
    cplx kappa;
};

inline DerivedCoeffs derived_coeffs(const TransferMatrix& m) {
    auto u = [&](int i, int j) { return m.u(i, j); };
    DerivedCoeffs d;
    d.tau1 = u(1, 2) * u(2, 3) + u(1, 3) * u(2, 2);
    d.tau2 = u(1, 2) * u(3, 3) + u(1, 3) * u(3, 2);
    d.tau3 = u(2, 1) * u(3, 2) + u(2, 2) * u(3, 1);
    d.tau4 = u(2, 1) * u(3, 3) + u(2, 3) * u(3, 1);
    d.tau5 = u(2, 3) * u(3, 2) + u(2, 2) * u(3, 3);
    d.kappa = u(1, 2) * u(2, 3) * u(3, 1) + u(1, 3) * u(2, 2) * u(3, 1) + u(1, 3) * u(2, 1) * u(3, 2) +
              u(1, 2) * u(2, 1) * u(3, 3);
    return d;
}

}  // namespace mzi

#endif  // MZI_UNITARY_HPP
