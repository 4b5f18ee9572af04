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
#include <cmath>
#include <numbers>
#include <random>

#include "mzi/unitary.hpp"
#include "testing.hpp"

using namespace mzi;
using mzi::testing::near;

namespace {

const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
const double inv_sqrt3 = 1.0 / std::sqrt(3.0);

}  // namespace

TEST(unitary, tritter1_entries) {
    TransferMatrix t = tritter1_matrix();
    EXPECT_TRUE(near(t(0, 0), inv_sqrt3, 1e-15));
    EXPECT_TRUE(near(t(1, 1), omega * inv_sqrt3, 1e-15));
    EXPECT_TRUE(near(t(1, 2), omega * omega * inv_sqrt3, 1e-15));
    EXPECT_TRUE(near(t(2, 1), omega * omega * inv_sqrt3, 1e-15));
    EXPECT_TRUE(near(t(2, 2), omega * inv_sqrt3, 1e-15));
    EXPECT_LT(unitarity_defect(t), 1e-12);
}

TEST(unitary, tritter2_entries) {
    TransferMatrix t1 = tritter1_matrix();
    TransferMatrix t2 = tritter2_matrix();
    EXPECT_TRUE(near(t2(1, 1), std::polar(1.0, 4.0 * std::numbers::pi / 3.0) * inv_sqrt3, 1e-15));
    EXPECT_LT(unitarity_defect(t2), 1e-12);
    for (int c = 0; c < 3; ++c) {
        EXPECT_EQ(t2(0, c), t1(0, c));
        EXPECT_EQ(t2(1, c), t1(2, c));
        EXPECT_EQ(t2(2, c), t1(1, c));
    }
}

TEST(unitary, phase_matrix) {
    EXPECT_EQ(max_abs_diff(phase_matrix(0.0), TransferMatrix::identity()), 0.0);
    TransferMatrix p = phase_matrix(std::numbers::pi);
    EXPECT_TRUE(near(p(0, 0), -1.0, 1e-15));
    EXPECT_EQ(p(1, 1), cplx(1.0));
    EXPECT_EQ(p(2, 2), cplx(1.0));
    EXPECT_EQ(p(0, 1), cplx{});
    EXPECT_TRUE(near(phase_matrix(std::numbers::pi / 2)(0, 0), cplx(0, -1), 1e-15));
}

TEST(unitary, compose_identity_at_zero) {
    EXPECT_LT(max_abs_diff(compose(0.0), TransferMatrix::identity()), 1e-14);
    EXPECT_LT(max_abs_diff(compose_product(0.0), TransferMatrix::identity()), 1e-14);
}

TEST(unitary, compose_at_pi) {
    TransferMatrix m = compose(std::numbers::pi);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_TRUE(near(m(i, j), i == j ? 1.0 / 3.0 : -2.0 / 3.0, 1e-15));
}

TEST(unitary, product_matches_closed_form) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> phi(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < 1000; ++i) {
        double p = phi(rng);
        TransferMatrix c = compose_closed_form(p);
        EXPECT_LT(max_abs_diff(compose_product(p), c), 1e-14);
        EXPECT_LT(unitarity_defect(c), 1e-12);
        EXPECT_LT(unitarity_defect(phase_matrix(p)), 1e-12);
        EXPECT_NEAR(std::norm(c(0, 0)) + 2.0 * std::norm(c(0, 1)), 1.0, 1e-14);
        EXPECT_LT(max_abs_diff(compose(p), compose(p + 2.0 * std::numbers::pi)), 1e-12);
    }
}

TEST(unitary, closed_form_entry_symmetry) {
    for (double p : {0.3, 1.7, 2.0, 4.4, 6.1}) {
        TransferMatrix m = compose(p);
        EXPECT_EQ(m.u(1, 1), m.u(2, 2));
        EXPECT_EQ(m.u(1, 1), m.u(3, 3));
        const cplx off = m.u(1, 2);
        EXPECT_EQ(m.u(2, 1), off);
        EXPECT_EQ(m.u(1, 3), off);
        EXPECT_EQ(m.u(3, 1), off);
        EXPECT_EQ(m.u(2, 3), off);
        EXPECT_EQ(m.u(3, 2), off);
        EXPECT_TRUE(near(m.u(1, 1), (std::polar(1.0, -p) + 2.0) / 3.0, 1e-15));
        EXPECT_TRUE(near(off, (std::polar(1.0, -p) - 1.0) / 3.0, 1e-15));
    }
}

TEST(unitary, compose_rejects_nonfinite) {
    EXPECT_MZI_ERROR(compose(std::nan("")), ErrorCode::InvalidArgument);
    EXPECT_MZI_ERROR(compose(INFINITY), ErrorCode::InvalidArgument);
}

TEST(unitary, adjoint_and_transpose) {
    TransferMatrix t = tritter1_matrix();
    EXPECT_LT(max_abs_diff(t * t.adjoint(), TransferMatrix::identity()), 1e-15);
    EXPECT_EQ(max_abs_diff(t.transpose().transpose(), t), 0.0);
    EXPECT_EQ(t.transpose()(0, 2), t(2, 0));
}

TEST(unitary, derived_coeffs_at_identity) {
    DerivedCoeffs d = derived_coeffs(compose(0.0));
    EXPECT_TRUE(near(d.tau1, 0.0, 1e-15));
    EXPECT_TRUE(near(d.tau5, 1.0, 1e-15));
    EXPECT_TRUE(near(d.kappa, 0.0, 1e-15));
}

TEST(unitary, derived_coeffs_term_by_term) {
    for (double p : {std::numbers::pi, 0.9, 5.2}) {
        TransferMatrix m = compose(p);
        auto u = [&](int i, int j) { return m.u(i, j); };
        DerivedCoeffs d = derived_coeffs(m);
        EXPECT_TRUE(near(d.tau1, u(1, 2) * u(2, 3) + u(1, 3) * u(2, 2), 1e-14));
        cplx kappa = u(1, 2) * u(2, 3) * u(3, 1) + u(1, 3) * u(2, 2) * u(3, 1) + u(1, 3) * u(2, 1) * u(3, 2) +
                     u(1, 2) * u(2, 1) * u(3, 3);
        EXPECT_TRUE(near(d.kappa, kappa, 1e-14));
        EXPECT_TRUE(near(d.tau5, u(2, 2) * u(3, 3) + u(2, 3) * u(3, 2), 1e-14));
    }
}
