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

#ifndef MZI_SCAN_HPP
#define MZI_SCAN_HPP

// Landscapes of success probability and quadrature variance over
// (|alpha|, phi), squeezing masks, and the variance minimizer over the box
// 0 <= |alpha| <= 10, 0 <= phi <= 2 pi.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "mzi/error.hpp"
#include "mzi/moments.hpp"
#include "mzi/states.hpp"
#include "mzi/unitary.hpp"

namespace mzi {

enum class Quantity { probability, var_x, var_p };

inline std::string_view to_string(Quantity q) {
    switch (q) {
        case Quantity::probability: return "prob";
        case Quantity::var_x: return "varx";
        case Quantity::var_p: return "varp";
    }
    return "?";
}

inline Quantity parse_quantity(std::string_view s) {
    if (s == "prob" || s == "probability") return Quantity::probability;
    if (s == "varx" || s == "var_x") return Quantity::var_x;
    if (s == "varp" || s == "var_p") return Quantity::var_p;
    throw Error(ErrorCode::InvalidArgument, "quantity must be one of prob, varx, varp");
}

/// Marks variances of heralds that are forbidden at a grid point.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

struct PointValues {
    bool allowed = false;
    double probability = 0.0;
    double var_x = kMissing;
    double var_p = kMissing;
};

namespace detail {

inline PointValues point_values(int family, double alpha_mag, double phi, const TransferMatrix& m,
                                const DerivedCoeffs& d) {
    const ClosedFormState s = table1_coeffs(family_spec(family, alpha_mag, phi), m, d);
    PointValues v;
    if (!(s.norm >= kImpossibleNorm)) return v;
    v.allowed = true;
    v.probability = s.probability;
    const QuadratureReport q = quadratures(s);
    v.var_x = q.var_x;
    v.var_p = q.var_p;
    return v;
}

}  // namespace detail

/// Success probability and quadrature variances of one family at one point.
inline PointValues evaluate_point(int family, double alpha_mag, double phi) {
    check_family(family);
    const TransferMatrix m = compose_closed_form(phi);
    return detail::point_values(family, alpha_mag, phi, m, derived_coeffs(m));
}

/// Every family at one point, sharing the matrix and derived coefficients.
inline std::array<PointValues, kFamilyCount> evaluate_families(double alpha_mag, double phi) {
    const TransferMatrix m = compose_closed_form(phi);
    const DerivedCoeffs d = derived_coeffs(m);
    std::array<PointValues, kFamilyCount> out;
    for (int f = 1; f <= kFamilyCount; ++f)
        out[static_cast<std::size_t>(f - 1)] = detail::point_values(f, alpha_mag, phi, m, d);
    return out;
}

inline double evaluate_quantity(int family, Quantity quantity, double alpha_mag, double phi) {
    const PointValues v = evaluate_point(family, alpha_mag, phi);
    switch (quantity) {
        case Quantity::probability: return v.probability;
        case Quantity::var_x: return v.var_x;
        case Quantity::var_p: return v.var_p;
    }
    return kMissing;
}

struct Range {
    double min = 0.0;
    double max = 0.0;
};

inline constexpr Range kAlphaBox{0.0, 10.0};
inline constexpr Range kPhiBox{0.0, 2.0 * std::numbers::pi};

/// n samples from r.min to r.max inclusive. Sample i is
/// min + span * (i / (n - 1)), so refined axes reproduce shared points exactly.
inline std::vector<double> linear_axis(Range r, int n) {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "axis resolution must be >= 2");
    if (!(r.max > r.min) || !std::isfinite(r.min) || !std::isfinite(r.max))
        throw Error(ErrorCode::InvalidArgument, "axis range must be finite and increasing");
    std::vector<double> axis(static_cast<std::size_t>(n));
    const double span = r.max - r.min;
    for (int i = 0; i < n; ++i)
        axis[static_cast<std::size_t>(i)] = r.min + span * (static_cast<double>(i) / static_cast<double>(n - 1));
    axis.back() = r.max;
    return axis;
}

struct ScanGrid {
    std::vector<double> alpha_axis;
    std::vector<double> phi_axis;
    std::vector<double> values;  ///< row-major, alpha index outer
    Quantity quantity = Quantity::probability;
    int family = 1;

    double at(std::size_t ia, std::size_t ip) const { return values[ia * phi_axis.size() + ip]; }
    double& at(std::size_t ia, std::size_t ip) { return values[ia * phi_axis.size() + ip]; }
};

inline ScanGrid scan(int family, Quantity quantity, Range alpha_range, Range phi_range, int alpha_res, int phi_res) {
    check_family(family);
    ScanGrid g;
    g.family = family;
    g.quantity = quantity;
    g.alpha_axis = linear_axis(alpha_range, alpha_res);
    g.phi_axis = linear_axis(phi_range, phi_res);
    g.values.resize(g.alpha_axis.size() * g.phi_axis.size());
    for (std::size_t i = 0; i < g.alpha_axis.size(); ++i)
        for (std::size_t j = 0; j < g.phi_axis.size(); ++j)
            g.at(i, j) = evaluate_quantity(family, quantity, g.alpha_axis[i], g.phi_axis[j]);
    return g;
}

inline ScanGrid scan(int family, Quantity quantity, Range alpha_range, Range phi_range, int resolution) {
    return scan(family, quantity, alpha_range, phi_range, resolution, resolution);
}

/// True where var_x < 0.5; missing values are false.
inline std::vector<bool> feasibility_mask(const ScanGrid& grid) {
    if (grid.quantity != Quantity::var_x)
        throw Error(ErrorCode::QuantityMismatch, "feasibility mask needs a var_x grid");
    std::vector<bool> mask(grid.values.size());
    for (std::size_t i = 0; i < grid.values.size(); ++i) mask[i] = grid.values[i] < 0.5;
    return mask;
}

/// max |value(phi) - value(2 pi - phi)|. A value missing on exactly one side
/// counts as infinite asymmetry.
inline double symmetry_report(const ScanGrid& grid) {
    const std::size_t np = grid.phi_axis.size();
    for (std::size_t j = 0; j < np; ++j)
        if (std::abs(grid.phi_axis[j] + grid.phi_axis[np - 1 - j] - 2.0 * std::numbers::pi) > 1e-9)
            throw Error(ErrorCode::AxisNotSymmetric, "phi axis is not mirror-symmetric about pi");
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.alpha_axis.size(); ++i)
        for (std::size_t j = 0; j < np; ++j) {
            const double a = grid.at(i, j);
            const double b = grid.at(i, np - 1 - j);
            if (std::isnan(a) && std::isnan(b)) continue;
            if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, std::abs(a - b));
        }
    return worst;
}

struct OptResult {
    double alpha_opt = 0.0;
    double phi_opt = 0.0;
    double var_min = 0.0;
    double squeeze_db = 0.0;
    double probability_at_opt = 0.0;
    int evaluations = 0;
};

struct OptOptions {
    int coarse_resolution = 400;
    double tolerance = 1e-10;  ///< spread of simplex values at convergence
    int max_evaluations = 5000;  ///< refinement budget
};

namespace detail {

/// Nelder-Mead on a box, vertices projected into it; `f` may return +inf.
template <typename F>
std::array<double, 3> nelder_mead_box(F&& f, std::array<double, 2> start, std::array<double, 2> step,
                                      std::array<Range, 2> box, double tol, int max_evals, int& evals) {
    using Point = std::array<double, 2>;
    auto project = [&](Point p) {
        for (int d = 0; d < 2; ++d) p[d] = std::clamp(p[d], box[d].min, box[d].max);
        return p;
    };
    auto eval = [&](const Point& p) {
        ++evals;
        const double v = f(p[0], p[1]);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };
    std::array<Point, 3> x;
    std::array<double, 3> fx;
    x[0] = project(start);
    for (int d = 0; d < 2; ++d) {
        Point p = x[0];
        p[d] += step[d];
        if (p[d] > box[d].max) p[d] = x[0][d] - step[d];
        x[d + 1] = project(p);
    }
    for (int i = 0; i < 3; ++i) fx[i] = eval(x[i]);
    const std::array<double, 2> scale = {box[0].max - box[0].min, box[1].max - box[1].min};

    while (evals < max_evals) {
        std::array<int, 3> order = {0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
        std::array<Point, 3> xs = {x[order[0]], x[order[1]], x[order[2]]};
        std::array<double, 3> fs = {fx[order[0]], fx[order[1]], fx[order[2]]};
        x = xs;
        fx = fs;

        double size = 0.0;
        for (int i = 1; i < 3; ++i)
            for (int d = 0; d < 2; ++d) size = std::max(size, std::abs(x[i][d] - x[0][d]) / scale[d]);
        if (std::isfinite(fx[2]) && fx[2] - fx[0] <= tol && size <= 1e-9) break;
        if (size <= 1e-15) break;

        const Point centroid = {(x[0][0] + x[1][0]) / 2.0, (x[0][1] + x[1][1]) / 2.0};
        auto along = [&](double t) {
            return project({centroid[0] + t * (x[2][0] - centroid[0]), centroid[1] + t * (x[2][1] - centroid[1])});
        };
        const Point xr = along(-1.0);
        const double fr = eval(xr);
        if (fr < fx[0]) {
            const Point xe = along(-2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                x[2] = xe;
                fx[2] = fe;
            } else {
                x[2] = xr;
                fx[2] = fr;
            }
            continue;
        }
        if (fr < fx[1]) {
            x[2] = xr;
            fx[2] = fr;
            continue;
        }
        const bool outside = fr < fx[2];
        const Point xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < (outside ? fr : fx[2])) {
            x[2] = xc;
            fx[2] = fc;
            continue;
        }
        for (int i = 1; i < 3; ++i) {
            x[i] = project({x[0][0] + 0.5 * (x[i][0] - x[0][0]), x[0][1] + 0.5 * (x[i][1] - x[0][1])});
            fx[i] = eval(x[i]);
        }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (fx[i] < fx[best]) best = i;
    return {x[best][0], x[best][1], fx[best]};
}

}  // namespace detail

/// Minimum of var_x over the box: coarse grid (ties to smaller |alpha|, then
/// smaller phi), then Nelder-Mead from the best grid point.
inline OptResult minimize_variance(int family, const OptOptions& options = {}) {
    check_family(family);
    if (options.coarse_resolution < 2) throw Error(ErrorCode::InvalidArgument, "coarse resolution must be >= 2");
    const std::vector<double> alphas = linear_axis(kAlphaBox, options.coarse_resolution);
    const std::vector<double> phis = linear_axis(kPhiBox, options.coarse_resolution);
    auto objective = [family](double a, double p) { return evaluate_point(family, a, p).var_x; };

    int evaluations = 0;
    double best = std::numeric_limits<double>::infinity();
    std::array<double, 2> start = {alphas[0], phis[0]};
    for (double a : alphas)
        for (double p : phis) {
            const double v = objective(a, p);
            ++evaluations;
            if (v < best) {
                best = v;
                start = {a, p};
            }
        }
    if (!std::isfinite(best)) throw Error(ErrorCode::HeraldImpossible, "family forbidden on the whole grid");

    const std::array<double, 2> step = {alphas[1] - alphas[0], phis[1] - phis[0]};
    int refine_evals = 0;
    const auto r = detail::nelder_mead_box(objective, start, step, {kAlphaBox, kPhiBox}, options.tolerance,
                                           options.max_evaluations, refine_evals);
    OptResult out;
    if (r[2] <= best) {
        out.alpha_opt = r[0];
        out.phi_opt = r[1];
        out.var_min = r[2];
    } else {
        out.alpha_opt = start[0];
        out.phi_opt = start[1];
        out.var_min = best;
    }
    out.evaluations = evaluations + refine_evals;
    out.squeeze_db = squeeze_db(out.var_min);
    out.probability_at_opt = evaluate_point(family, out.alpha_opt, out.phi_opt).probability;
    return out;
}

}  // namespace mzi

#endif  // MZI_SCAN_HPP
