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

#include "mzi/states.hpp"
#include "testing.hpp"

using namespace mzi;
using mzi::testing::near;

namespace {

constexpr std::array<double, 5> kPhis = {0.7, 2.0, std::numbers::pi, 4.1, 5.0};
constexpr std::array<double, 3> kAlphas = {0.5, 2.0, 4.0};

ClosedFormState table_state(int family, double alpha, double phi) {
    const TransferMatrix m = compose(phi);
    return table1_coeffs(family_spec(family, alpha, phi), m, derived_coeffs(m));
}

}  // namespace

TEST(states, family_mapping) {
    EXPECT_EQ(family_of(HeraldPattern{0, 0, 0, 0}), 1);
    EXPECT_EQ(family_of(HeraldPattern{1, 0, 0, 0}), 5);
    EXPECT_EQ(family_of(HeraldPattern{1, 1, 0, 0}), 7);
    EXPECT_EQ(family_of(HeraldPattern{1, 1, 1, 1}), 16);
    for (int f = 1; f <= kFamilyCount; ++f) EXPECT_EQ(family_of(family_pattern(f)), f);
    EXPECT_MZI_ERROR(family_of(HeraldPattern{2, 0, 0, 0}), ErrorCode::OutOfTableRange);
    EXPECT_MZI_ERROR(family_pattern(17), ErrorCode::InvalidArgument);
}

TEST(states, parse_family_names) {
    EXPECT_EQ(parse_family("psi7"), 7);
    EXPECT_EQ(parse_family("16"), 16);
    EXPECT_EQ(family_label(3), "psi3");
    EXPECT_MZI_ERROR(parse_family("psi0"), ErrorCode::InvalidArgument);
    EXPECT_MZI_ERROR(parse_family("psi"), ErrorCode::InvalidArgument);
    EXPECT_MZI_ERROR(parse_family("phi3"), ErrorCode::InvalidArgument);
}

TEST(states, table_rows) {
    const double alpha = 1.3, phi = 2.2;
    const TransferMatrix m = compose(phi);
    const DerivedCoeffs d = derived_coeffs(m);

    ClosedFormState s1 = table_state(1, alpha, phi);
    EXPECT_EQ(s1.label, "psi1");
    EXPECT_EQ(s1.c0, cplx(1.0));
    EXPECT_EQ(s1.c1, cplx{});
    EXPECT_EQ(s1.c2, cplx{});

    ClosedFormState s5 = table_state(5, alpha, phi);
    EXPECT_EQ(s5.label, "psi5");
    EXPECT_EQ(s5.c0, cplx{});
    EXPECT_EQ(s5.c1, m.u(2, 1));
    EXPECT_EQ(s5.c2, cplx{});

    ClosedFormState s16 = table_state(16, alpha, phi);
    EXPECT_EQ(s16.c0, d.tau5);
    EXPECT_TRUE(near(s16.c1, d.kappa * alpha, 1e-15));
    EXPECT_TRUE(near(s16.c2, m.u(1, 2) * m.u(1, 3) * m.u(2, 1) * m.u(3, 1) * alpha * alpha, 1e-15));
    EXPECT_EQ(s16.seed, m.u(1, 1) * alpha);
}

TEST(states, table_rejects_large_photon_numbers) {
    const TransferMatrix m = compose(1.0);
    EXPECT_MZI_ERROR(table1_coeffs(HeraldSpec{2, 0, 1, 0, 1.0, 0.0, 1.0}, m, derived_coeffs(m)),
                     ErrorCode::OutOfTableRange);
}

TEST(states, normalization_examples) {
    EXPECT_NEAR(normalization(1.0, 0.0, 0.0, cplx(1.7, -0.3)), 1.0, 1e-15);
    EXPECT_NEAR(normalization(0.0, 1.0, 0.0, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(normalization(0.0, 0.0, 1.0, 0.0), 2.0, 1e-15);
}

TEST(states, normalization_matches_fock_sum) {
    const cplx c0(0.3, 0.1), c1(-0.4, 0.9), c2(0.2, -0.6), seed(1.1, 0.7);
    double direct = 0.0;
    for (const cplx& a : detail::polynomial_state_amplitudes({c0, c1, c2}, seed, 80)) direct += std::norm(a);
    EXPECT_NEAR(normalization(c0, c1, c2, seed), direct, 1e-13);
}

TEST(states, probability_examples) {
    EXPECT_NEAR(closed_form_state(family_spec(1, 2.0, 0.0)).probability, 1.0, 1e-15);
    for (double phi : {0.5, std::numbers::pi, 4.0}) {
        ClosedFormState s = closed_form_state(family_spec(5, 0.0, phi));
        EXPECT_NEAR(s.probability, (2.0 - 2.0 * std::cos(phi)) / 9.0, 1e-15);
    }
    EXPECT_NEAR(closed_form_state(family_spec(5, 0.0, std::numbers::pi)).probability, 4.0 / 9.0, 1e-15);
}

TEST(states, invariants_hold) {
    for (int f = 1; f <= kFamilyCount; ++f)
        for (double a : kAlphas)
            for (double phi : kPhis) {
                ClosedFormState s = closed_form_state(family_spec(f, a, phi));
                EXPECT_NEAR(s.norm, normalization(s.c0, s.c1, s.c2, s.seed), 1e-13);
                EXPECT_NEAR(s.probability, success_probability(s, a, compose(phi)(0, 0)), 1e-13);
                EXPECT_GT(s.probability, 0.0);
                EXPECT_LE(s.probability, 1.0 + 1e-12);
            }
}

TEST(states, pairing_identities) {
    const std::array<std::pair<int, int>, 6> pairs = {{{2, 3}, {5, 6}, {8, 9}, {10, 11}, {12, 13}, {14, 15}}};
    for (double a : {0.0, 0.5, 2.0, 4.0, 7.5})
        for (double phi : {0.1, 1.0, 2.0, std::numbers::pi, 4.0, 6.0})
            for (const auto& [x, y] : pairs)
                EXPECT_NEAR(table_state(x, a, phi).probability, table_state(y, a, phi).probability, 1e-12)
                    << x << "," << y << " at " << a << "," << phi;
}

TEST(states, phi_mirror_symmetry) {
    for (int f = 1; f <= kFamilyCount; ++f)
        for (double phi : {0.3, 1.4, 2.9})
            EXPECT_NEAR(table_state(f, 2.0, phi).probability, table_state(f, 2.0, 2.0 * std::numbers::pi - phi).probability,
                        1e-12);
}

TEST(states, impossible_herald) {
    EXPECT_MZI_ERROR(closed_form_state(family_spec(5, 1.0, 0.0)), ErrorCode::HeraldImpossible);
    EXPECT_MZI_ERROR(closed_form_state(family_spec(2, 1.0, 0.0)), ErrorCode::HeraldImpossible);
    EXPECT_NEAR(closed_form_state(family_spec(16, 1.0, 0.0)).probability, 1.0, 1e-12);
}

TEST(states, fock_vector_examples) {
    const cplx beta(0.8, 0.4);
    ClosedFormState coh;
    coh.c0 = 1.0;
    coh.seed = beta;
    coh.norm = 1.0;
    FockVector v = state_fock_vector(coh, 30);
    double fact = 1.0;
    for (int n = 0; n <= 8; ++n) {
        if (n > 0) fact *= n;
        const cplx expected = std::exp(-0.5 * std::norm(beta)) * std::pow(beta, n) / std::sqrt(fact);
        EXPECT_TRUE(near(v[static_cast<std::size_t>(n)], expected, 1e-14)) << n;
    }

    ClosedFormState one = closed_form_state(family_spec(5, 0.0, 1.0));
    FockVector w = state_fock_vector(one, 5);
    EXPECT_TRUE(near(w[1], 1.0, 1e-15));
    EXPECT_NEAR(w.norm_sq(), 1.0, 1e-15);

    EXPECT_MZI_ERROR(state_fock_vector(one, 1), ErrorCode::InvalidArgument);
    EXPECT_MZI_ERROR(state_fock_vector(closed_form_state(family_spec(16, 3.0, 1.0)), 4), ErrorCode::CutoffInadequate);
}

TEST(states, closed_form_matches_oracle) {
    for (int f = 1; f <= kFamilyCount; ++f)
        for (double a : kAlphas)
            for (double phi : {0.7, std::numbers::pi, 5.0}) {
                const HeraldSpec spec = family_spec(f, a, phi);
                const HeraldResult r = herald_state(spec);
                const ClosedFormState s = closed_form_state(spec);
                EXPECT_NEAR(s.probability, r.probability, 1e-9) << f;
                EXPECT_LT(max_amplitude_diff(state_fock_vector(s, r.cutoff_used), r.state), 1e-9) << f;
            }
    const HeraldSpec psi16 = family_spec(16, 2.0, 2.0);
    EXPECT_NEAR(closed_form_state(psi16).probability, herald_state(psi16).probability, 1e-10);
}

TEST(states, density_components_structure) {
    const auto c1 = density_components(closed_form_state(family_spec(1, 1.0, 1.0)));
    ASSERT_EQ(c1.size(), 1u);
    EXPECT_EQ(c1[0].h_left, 0);
    EXPECT_TRUE(near(c1[0].weight, 1.0, 1e-15));

    const ClosedFormState s5 = closed_form_state(family_spec(5, 1.0, 1.0));
    const auto c5 = density_components(s5);
    ASSERT_EQ(c5.size(), 1u);
    EXPECT_EQ(c5[0].h_left, 1);
    EXPECT_EQ(c5[0].h_right, 1);
    EXPECT_TRUE(near(c5[0].weight, std::norm(s5.c1) / s5.norm, 1e-15));

    const auto c8 = density_components(closed_form_state(family_spec(8, 1.0, 1.0)));
    ASSERT_EQ(c8.size(), 4u);
    for (const auto& a : c8)
        for (const auto& b : c8)
            if (a.h_left == b.h_right && a.h_right == b.h_left) {
                EXPECT_TRUE(near(a.weight, std::conj(b.weight), 1e-15));
            }
}

TEST(states, general_examples) {
    const GeneralState g1 = general_heralded(family_spec(1, 1.2, 0.8));
    ASSERT_EQ(g1.coefficients.size(), 1u);
    EXPECT_TRUE(near(g1.coefficients[0], 1.0, 1e-14));
    EXPECT_NEAR(g1.probability, closed_form_state(family_spec(1, 1.2, 0.8)).probability, 1e-13);

    const TransferMatrix m = compose(0.8);
    const GeneralState g7 = general_heralded(family_spec(7, 1.2, 0.8));
    ASSERT_EQ(g7.coefficients.size(), 3u);
    EXPECT_TRUE(near(g7.coefficients[2], m.u(2, 1) * m.u(3, 1), 1e-14));
}

TEST(states, general_reproduces_table) {
    for (int f = 1; f <= kFamilyCount; ++f)
        for (double a : kAlphas)
            for (double phi : kPhis) {
                const HeraldSpec spec = family_spec(f, a, phi);
                const ClosedFormState s = closed_form_state(spec);
                const GeneralState g = general_heralded(spec);
                const std::vector<cplx> c = s.coefficients();
                for (std::size_t h = 0; h < 3; ++h) {
                    const cplx gh = h < g.coefficients.size() ? g.coefficients[h] : cplx{};
                    EXPECT_TRUE(near(gh, c[h], 1e-12)) << "psi" << f << " h=" << h;
                }
                EXPECT_NEAR(g.probability, s.probability, 1e-12);
                EXPECT_NEAR(g.probability_generating, s.probability, 1e-12);
            }
}

TEST(states, general_beyond_table_matches_oracle) {
    const std::array<HeraldSpec, 4> cases = {{
        {2, 0, 1, 0, 1.5, 0.0, 1.0},
        {0, 2, 1, 1, 1.0, 0.0, 2.5},
        {1, 1, 2, 0, 2.0, 0.0, 4.0},
        {2, 1, 0, 2, 0.8, 0.0, 5.5},
    }};
    for (const HeraldSpec& spec : cases) {
        const GeneralState g = general_heralded(spec);
        const HeraldResult r = herald_state(spec);
        EXPECT_NEAR(g.probability, r.probability, 1e-9);
        EXPECT_NEAR(g.probability_generating, r.probability, 1e-9);
        EXPECT_LT(max_amplitude_diff(g.fock_vector(r.cutoff_used), r.state), 1e-9);
    }
    const HeraldDistribution d = herald_distribution(2, 0, 1.5, 1.0, 20);
    EXPECT_NEAR(general_heralded(cases[0]).probability, d.at({1, 0}), 1e-9);
}

TEST(states, general_order_guard) {
    EXPECT_MZI_ERROR(general_heralded(HeraldSpec{4, 4, 3, 2, 1.0, 0.0, 1.0}), ErrorCode::SeriesOrderTooLarge);
}

TEST(states, complex_alpha_matches_oracle) {
    const HeraldSpec spec{1, 1, 1, 0, 1.4, 0.9, 2.6};
    const ClosedFormState s = closed_form_state(spec);
    const HeraldResult r = herald_state(spec);
    EXPECT_NEAR(s.probability, r.probability, 1e-10);
    EXPECT_LT(max_amplitude_diff(state_fock_vector(s, r.cutoff_used), r.state), 1e-9);
}
