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
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "mzi/fock.hpp"
#include "testing.hpp"

using namespace mzi;
using mzi::testing::near;

namespace {

SquareMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    SquareMatrix m(n);
    for (auto& x : m.data) x = cplx(g(rng), g(rng));
    return m;
}

// Permanent by summing over all permutations.
cplx permanent_by_permutations(const SquareMatrix& m) {
    std::vector<std::size_t> perm(m.n);
    for (std::size_t i = 0; i < m.n; ++i) perm[i] = i;
    cplx total = 0.0;
    do {
        cplx prod = 1.0;
        for (std::size_t r = 0; r < m.n; ++r) prod *= m(r, perm[r]);
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

FockVector coherent(cplx beta, int cutoff) {
    std::vector<cplx> a(static_cast<std::size_t>(cutoff) + 1);
    double fact = 1.0;
    for (int n = 0; n <= cutoff; ++n) {
        if (n > 0) fact *= n;
        a[static_cast<std::size_t>(n)] = std::exp(-0.5 * std::norm(beta)) * std::pow(beta, n) / std::sqrt(fact);
    }
    return FockVector(a);
}

}  // namespace

TEST(fock, permanent_small_cases) {
    SquareMatrix one(1);
    one(0, 0) = cplx(2, -1);
    EXPECT_EQ(permanent(one), cplx(2, -1));
    SquareMatrix two(2);
    two(0, 0) = 1.0;
    two(0, 1) = 2.0;
    two(1, 0) = 3.0;
    two(1, 1) = 4.0;
    EXPECT_TRUE(near(permanent(two), 1.0 * 4.0 + 2.0 * 3.0, 1e-14));
    SquareMatrix id(3);
    for (std::size_t i = 0; i < 3; ++i) id(i, i) = 1.0;
    EXPECT_TRUE(near(permanent(id), 1.0, 1e-15));
    EXPECT_EQ(permanent(SquareMatrix(0)), cplx(1.0));
}

TEST(fock, permanent_matches_permutation_sum) {
    std::mt19937_64 rng(2);
    for (std::size_t n = 1; n <= 7; ++n) {
        SquareMatrix m = random_matrix(rng, n);
        cplx expected = permanent_by_permutations(m);
        EXPECT_TRUE(near(permanent(m), expected, 1e-11 * std::max(1.0, std::abs(expected)))) << "n=" << n;
    }
}

TEST(fock, permanent_dimension_guard) {
    EXPECT_MZI_ERROR(permanent(SquareMatrix(21)), ErrorCode::DimensionTooLarge);
}

TEST(fock, amplitude_identity_device) {
    const TransferMatrix id = TransferMatrix::identity();
    EXPECT_TRUE(near(fock_amplitude(id, {1, 0, 0}, {1, 0, 0}), 1.0, 1e-15));
    EXPECT_TRUE(near(fock_amplitude(id, {1, 0, 0}, {0, 1, 0}), 0.0, 1e-15));
    EXPECT_TRUE(near(fock_amplitude(id, {3, 2, 1}, {3, 2, 1}), 1.0, 1e-13));
}

TEST(fock, single_photon_amplitude_is_matrix_entry) {
    for (double phi : {std::numbers::pi, 0.4, 2.0}) {
        const TransferMatrix u = compose(phi);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Occupation in{0, 0, 0}, out{0, 0, 0};
                in[static_cast<std::size_t>(j)] = 1;
                out[static_cast<std::size_t>(i)] = 1;
                EXPECT_EQ(fock_amplitude(u, in, out), u(i, j));
            }
    }
    EXPECT_TRUE(near(fock_amplitude(compose(std::numbers::pi), {1, 0, 0}, {1, 0, 0}), 1.0 / 3.0, 1e-15));
}

TEST(fock, amplitude_photon_number_mismatch) {
    EXPECT_MZI_ERROR(fock_amplitude(compose(1.0), {1, 0, 0}, {1, 1, 0}), ErrorCode::PhotonNumberMismatch);
    EXPECT_MZI_ERROR(fock_amplitude(compose(1.0), {-1, 1, 0}, {0, 0, 0}), ErrorCode::InvalidArgument);
}

TEST(fock, routing_matches_permanent) {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> occ(0, 3);
    const TransferMatrix u = compose(2.3);
    for (int trial = 0; trial < 200; ++trial) {
        Occupation in{occ(rng), occ(rng), occ(rng)};
        Occupation out{occ(rng), occ(rng), 0};
        const int missing = in[0] + in[1] + in[2] - out[0] - out[1];
        if (missing < 0) continue;
        out[2] = missing;
        EXPECT_TRUE(near(fock_amplitude_routing(u, in, out), fock_amplitude_permanent(u, in, out), 1e-12));
    }
}

TEST(fock, transpose_symmetry) {
    const TransferMatrix u = tritter1_matrix() * phase_matrix(0.8);
    const std::array<std::pair<Occupation, Occupation>, 4> cases = {{
        {{2, 1, 0}, {0, 1, 2}},
        {{1, 1, 1}, {3, 0, 0}},
        {{0, 2, 2}, {1, 2, 1}},
        {{4, 0, 1}, {2, 2, 1}},
    }};
    for (const auto& [in, out] : cases) {
        EXPECT_TRUE(near(fock_amplitude(u, in, out), fock_amplitude(u.transpose(), out, in), 1e-13));
        EXPECT_TRUE(near(fock_amplitude_permanent(u, in, out), fock_amplitude_permanent(u.transpose(), out, in), 1e-13));
    }
}

TEST(fock, transition_rows_are_normalized) {
    const TransferMatrix u = compose(1.3);
    const Occupation in{2, 1, 1};
    double total = 0.0;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; a + b <= 4; ++b) total += std::norm(fock_amplitude(u, in, {a, b, 4 - a - b}));
    EXPECT_NEAR(total, 1.0, 1e-13);
}

TEST(fock, norm_and_tail) {
    FockVector v({cplx(3, 0), cplx(0, 4)});
    EXPECT_NEAR(v.norm_sq(), 25.0, 1e-14);
    EXPECT_NEAR(v.tail_mass(), 16.0 / 25.0, 1e-15);
    EXPECT_NEAR(v.normalized().norm_sq(), 1.0, 1e-15);
    FockVector f = FockVector({cplx(0, 0), cplx(0, -2)}).phase_fixed();
    EXPECT_TRUE(near(f[1], 2.0, 1e-15));
    EXPECT_EQ(f[7], cplx{});
}

TEST(fock, herald_identity_passes_coherent_state) {
    const HeraldResult r = herald_state(HeraldSpec{0, 0, 0, 0, 2.0, 0.0, 0.0});
    EXPECT_NEAR(r.probability, 1.0, 1e-12);
    EXPECT_LT(max_amplitude_diff(r.state, coherent(2.0, r.cutoff_used)), 1e-12);
    for (double a : {0.0, 0.7, 3.5}) {
        const HeraldResult s = herald_state(HeraldSpec{1, 0, 1, 0, a, 0.0, 0.0});
        EXPECT_NEAR(s.probability, 1.0, 1e-12);
        EXPECT_LT(max_amplitude_diff(s.state, coherent(a, s.cutoff_used)), 1e-12);
    }
}

TEST(fock, herald_impossible_at_identity) {
    EXPECT_MZI_ERROR(herald_state(HeraldSpec{1, 0, 0, 1, 1.0, 0.0, 0.0}), ErrorCode::HeraldImpossible);
    EXPECT_MZI_ERROR(herald_state(HeraldSpec{0, 0, 1, 0, 2.0, 0.0, 0.0}), ErrorCode::HeraldImpossible);
}

TEST(fock, herald_cutoff_inadequate) {
    EXPECT_MZI_ERROR(herald_state(HeraldSpec{0, 0, 0, 0, 3.0, 0.0, 1.0}, 5), ErrorCode::CutoffInadequate);
}

TEST(fock, herald_rejects_bad_spec) {
    EXPECT_MZI_ERROR(herald_state(HeraldSpec{-1, 0, 0, 0, 1.0, 0.0, 1.0}), ErrorCode::InvalidArgument);
    EXPECT_MZI_ERROR(herald_state(HeraldSpec{0, 0, 0, 0, -1.0, 0.0, 1.0}), ErrorCode::InvalidArgument);
    EXPECT_MZI_ERROR(herald_state(HeraldSpec{0, 0, 0, 0, 1.0, 0.0, NAN}), ErrorCode::InvalidArgument);
}

TEST(fock, herald_golden_values) {
    const HeraldResult r = herald_state(HeraldSpec{1, 1, 1, 1, 2.0, 0.0, 2.0}, 40);
    EXPECT_EQ(r.cutoff_used, 40);
    EXPECT_NEAR(r.probability, 0.063451286420019168, 1e-12);
    const std::array<cplx, 6> golden = {{
        {0.17172468811606559, 0},
        {0.58210441718224648, -0.19837191043006888},
        {0.38863019613705996, -0.43415966815052642},
        {0.033971855230004538, -0.23433384354529796},
        {-0.0010162539502601552, 0.094867218716625679},
        {0.15942127808142009, 0.19059756725729537},
    }};
    for (std::size_t n = 0; n < golden.size(); ++n) EXPECT_TRUE(near(r.state[n], golden[n], 1e-12)) << "n=" << n;
    EXPECT_EQ(r.state[0].imag(), 0.0);
    EXPECT_LT(r.state.tail_mass(), 1e-10);
}

TEST(fock, herald_converges_with_cutoff) {
    for (const HeraldSpec& s : {HeraldSpec{1, 1, 1, 1, 2.0, 0.0, 2.0}, HeraldSpec{1, 0, 0, 1, 4.0, 0.0, 5.0},
                                HeraldSpec{2, 1, 1, 0, 1.5, 0.0, 0.9}}) {
        const HeraldResult a = herald_state(s);
        const HeraldResult b = herald_state(s, a.cutoff_used + 10);
        EXPECT_NEAR(a.probability, b.probability, 1e-9);
        EXPECT_LT(max_amplitude_diff(a.state, b.state), 1e-9);
    }
}

TEST(fock, default_cutoff_clamped) {
    EXPECT_EQ(default_cutoff(HeraldSpec{0, 0, 0, 0, 0.0, 0.0, 1.0}), kMinCutoff);
    EXPECT_EQ(default_cutoff(HeraldSpec{0, 0, 0, 0, 50.0, 0.0, 0.0}), kMaxCutoff);
    EXPECT_EQ(default_cutoff(HeraldSpec{1, 1, 0, 0, 2.0, 0.0, 0.0}), 4 + 20 + 20 + 2);
}

TEST(fock, expectation_examples) {
    FockVector one({0.0, 1.0});
    EXPECT_TRUE(near(expectation(one, 1, 1), 1.0, 1e-15));
    EXPECT_TRUE(near(expectation(one, 0, 1), 0.0, 1e-15));
    FockVector beta = coherent(1.3, 40);
    EXPECT_TRUE(near(expectation(beta, 0, 1), 1.3, 1e-10));
    EXPECT_TRUE(near(expectation(beta, 2, 1), 1.3 * 1.3 * 1.3, 1e-10));
    EXPECT_TRUE(near(expectation(beta, 0, 0), 1.0, 1e-14));
    EXPECT_TRUE(near(expectation(one, 5, 0), 0.0, 1e-15));
}

TEST(fock, distribution_identity_device) {
    const HeraldDistribution d = herald_distribution(0, 0, 2.0, 0.0, 4);
    for (const auto& [key, p] : d) EXPECT_NEAR(p, (key == std::pair{0, 0}) ? 1.0 : 0.0, 1e-14);
}

TEST(fock, distribution_completeness) {
    for (int n2 : {0, 1})
        for (int n3 : {0, 1})
            for (double a : {0.5, 2.0, 4.0})
                for (double phi : {0.5, std::numbers::pi, 5.0}) {
                    const int herald_max = a > 3.0 ? 32 : 20;
                    const HeraldDistribution d = herald_distribution(n2, n3, a, phi, herald_max);
                    EXPECT_NEAR(total_probability(d), 1.0, 1e-8) << n2 << n3 << " " << a << " " << phi;
                }
}

TEST(fock, distribution_residual_mass) {
    EXPECT_MZI_ERROR(herald_distribution(1, 0, 2.0, std::numbers::pi, 2), ErrorCode::ResidualMassTooLarge);
    EXPECT_MZI_ERROR(herald_distribution(0, 0, 1.0, 1.0, -1), ErrorCode::InvalidArgument);
}

TEST(fock, distribution_is_deterministic) {
    const HeraldDistribution a = herald_distribution(1, 1, 1.5, 2.5, 16);
    const HeraldDistribution b = herald_distribution(1, 1, 1.5, 2.5, 16);
    EXPECT_EQ(a, b);
}
