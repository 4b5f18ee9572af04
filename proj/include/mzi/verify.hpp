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

#ifndef MZI_VERIFY_HPP
#define MZI_VERIFY_HPP

// Seeded cross-path consistency checks: closed form vs generating function vs
// number-basis simulation, the two moment routes, outcome completeness and
// device unitarity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mzi/error.hpp"
#include "mzi/fock.hpp"
#include "mzi/moments.hpp"
#include "mzi/states.hpp"
#include "mzi/unitary.hpp"

namespace mzi {

struct CheckResult {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    bool passed = true;
};

struct VerifyReport {
    std::uint64_t seed = 0;
    int samples = 0;
    std::vector<CheckResult> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }

    std::string failed_names() const {
        std::string out;
        for (const auto& c : checks)
            if (!c.passed) out += (out.empty() ? "" : ", ") + c.name;
        return out;
    }
};

struct VerifyOptions {
    int samples = 10;
    std::uint64_t seed = 0;
    double alpha_max = 3.0;
    int herald_max = 24;
    /// Multiplies every tolerance; tests set it to 0 to force failures.
    double tolerance_scale = 1.0;
};

namespace detail {

/// Relative deviation with unit floor: |a - b| / max(1, |b|).
inline double scaled_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace detail

/// Runs every check on `samples` points drawn from a mt19937_64 seeded with
/// `seed`: |alpha| uniform in [0, alpha_max], phi uniform in [0, 2 pi).
inline VerifyReport run_checks(const VerifyOptions& opt) {
    if (opt.samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
    if (!(opt.alpha_max >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha_max must be >= 0");
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> alpha_dist(0.0, opt.alpha_max);
    std::uniform_real_distribution<double> phi_dist(0.0, 2.0 * std::numbers::pi);

    VerifyReport report;
    report.seed = opt.seed;
    report.samples = opt.samples;
    report.checks = {
        {"unitarity", 0.0, 1e-12},
        {"closed_vs_oracle_probability", 0.0, 1e-9},
        {"closed_vs_oracle_amplitudes", 0.0, 1e-9},
        {"closed_vs_general_coefficients", 0.0, 1e-12},
        {"closed_vs_general_probability", 0.0, 1e-12},
        {"general_trace_probability", 0.0, 1e-12},
        {"moment_way1_vs_way2", 0.0, 1e-11},
        {"moment_way2_vs_oracle", 0.0, 1e-9},
        {"herald_completeness", 0.0, 1e-8},
    };
    auto record = [&](std::size_t i, double dev) {
        auto& c = report.checks[i];
        c.max_deviation = std::max(c.max_deviation, std::isnan(dev) ? INFINITY : dev);
    };

    for (int sample = 0; sample < opt.samples; ++sample) {
        const double alpha = alpha_dist(rng);
        const double phi = phi_dist(rng);
        const TransferMatrix m = compose(phi);
        record(0, unitarity_defect(m));
        record(0, unitarity_defect(tritter1_matrix()));
        record(0, unitarity_defect(tritter2_matrix()));
        record(0, unitarity_defect(phase_matrix(phi)));
        const DerivedCoeffs d = derived_coeffs(m);

        for (int family = 1; family <= kFamilyCount; ++family) {
            const HeraldSpec spec = family_spec(family, alpha, phi);
            const ClosedFormState closed = table1_coeffs(spec, m, d);
            if (!(closed.norm >= kImpossibleNorm) || closed.probability < 1e-24) continue;

            const HeraldResult oracle = herald_state(spec);
            record(1, std::abs(oracle.probability - closed.probability));
            record(2, max_amplitude_diff(oracle.state, state_fock_vector(closed, oracle.cutoff_used)));

            const GeneralState general = general_heralded(spec, m);
            const std::vector<cplx> cc = closed.coefficients();
            double coeff_dev = 0.0;
            for (std::size_t h = 0; h < std::max(cc.size(), general.coefficients.size()); ++h) {
                const cplx a = h < general.coefficients.size() ? general.coefficients[h] : cplx{};
                const cplx b = h < cc.size() ? cc[h] : cplx{};
                coeff_dev = std::max(coeff_dev, detail::scaled_diff(a, b));
            }
            record(3, coeff_dev);
            record(4, std::abs(general.probability - closed.probability));
            record(5, std::abs(general.probability_generating - closed.probability));

            const MomentMatrix way2 = moment_table(closed, 3);
            const MomentMatrix way1 = moment_way1_table(spec, 3);
            double way_dev = 0.0, oracle_dev = 0.0;
            for (int k = 0; k <= 3; ++k)
                for (int l = 0; l <= 3; ++l) {
                    way_dev = std::max(way_dev, detail::scaled_diff(way1(k, l), way2(k, l)));
                    oracle_dev = std::max(oracle_dev, detail::scaled_diff(expectation(oracle.state, k, l), way2(k, l)));
                }
            record(6, way_dev);
            record(7, oracle_dev);
        }

        for (int n2 = 0; n2 <= 1; ++n2)
            for (int n3 = 0; n3 <= 1; ++n3) {
                const double total = total_probability(
                    detail::herald_distribution_unchecked(n2, n3, alpha, phi, opt.herald_max, 0, 0.0));
                record(8, std::abs(1.0 - total));
            }
    }
    for (auto& c : report.checks) {
        c.tolerance *= opt.tolerance_scale;
        c.passed = c.max_deviation <= c.tolerance;
    }
    return report;
}

/// run_checks, throwing VerificationFailed naming the failing checks.
inline VerifyReport verify(const VerifyOptions& opt) {
    VerifyReport r = run_checks(opt);
    if (!r.passed()) throw Error(ErrorCode::VerificationFailed, "failed checks: " + r.failed_names());
    return r;
}

}  // namespace mzi

#endif  // MZI_VERIFY_HPP
