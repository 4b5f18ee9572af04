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

#ifndef MZI_FOCK_HPP
#define MZI_FOCK_HPP

// Brute-force number-basis simulation of the heralded interferometer.
//
// The input |alpha>|n2>|n3> is expanded in mode 1, every term is sent
// through the device with multiphoton transition amplitudes, and the ancilla
// modes are projected on <m2|<m3|. Nothing here uses the generating-function
// machinery, so it serves as an independent reference for it.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mzi/error.hpp"
#include "mzi/unitary.hpp"

namespace mzi {

/// Single-mode pure state over |0>..|cutoff>.
class FockVector {
public:
    FockVector() = default;
    explicit FockVector(std::vector<cplx> amplitudes) : amplitudes_(std::move(amplitudes)) { refresh(); }

    std::span<const cplx> amplitudes() const { return amplitudes_; }
    cplx operator[](std::size_t n) const { return n < amplitudes_.size() ? amplitudes_[n] : cplx{}; }
    int cutoff() const { return static_cast<int>(amplitudes_.size()) - 1; }
    double norm_sq() const { return norm_sq_; }

    /// |amplitude_cutoff|^2 / norm_sq.
    double tail_mass() const {
        if (amplitudes_.empty() || norm_sq_ == 0.0) return 0.0;
        return std::norm(amplitudes_.back()) / norm_sq_;
    }

    FockVector normalized() const {
        FockVector out = *this;
        const double s = 1.0 / std::sqrt(norm_sq_);
        for (auto& a : out.amplitudes_) a *= s;
        out.refresh();
        return out;
    }

    /// Rotates the global phase so the first amplitude with modulus above
    /// kPhaseReference * max|amplitude| is real and positive.
    FockVector phase_fixed() const {
        FockVector out = *this;
        double peak = 0.0;
        for (const auto& a : amplitudes_) peak = std::max(peak, std::abs(a));
        for (const auto& a : amplitudes_) {
            if (std::abs(a) > kPhaseReference * peak) {
                const cplx rot = std::conj(a) / std::abs(a);
                for (auto& b : out.amplitudes_) b *= rot;
                break;
            }
        }
        out.refresh();
        return out;
    }

    static constexpr double kPhaseReference = 1e-6;

private:
    void refresh() {
        norm_sq_ = 0.0;
        for (const auto& a : amplitudes_) norm_sq_ += std::norm(a);
    }

    std::vector<cplx> amplitudes_;
    double norm_sq_ = 0.0;
};

/// max_n |a_n - b_n| over the union of both supports.
inline double max_amplitude_diff(const FockVector& a, const FockVector& b) {
    const std::size_t n = static_cast<std::size_t>(std::max(a.cutoff(), b.cutoff()) + 1);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

/// Photon numbers and interaction parameters of one heralding experiment.
struct HeraldSpec {
    int n2 = 0;
    int n3 = 0;
    int m2 = 0;
    int m3 = 0;
    double alpha_mag = 0.0;
    double theta = 0.0;
    double phi = 0.0;

    cplx alpha() const { return std::polar(alpha_mag, theta); }

    void validate() const {
        if (n2 < 0 || n3 < 0 || m2 < 0 || m3 < 0)
            throw Error(ErrorCode::InvalidArgument, "photon numbers must be non-negative");
        if (!(alpha_mag >= 0.0) || !std::isfinite(alpha_mag))
            throw Error(ErrorCode::InvalidArgument, "|alpha| must be finite and non-negative");
        if (!std::isfinite(theta) || !std::isfinite(phi))
            throw Error(ErrorCode::InvalidArgument, "phases must be finite");
    }
};

/// Dense square complex matrix, row-major.
struct SquareMatrix {
    std::size_t n = 0;
    std::vector<cplx> data;

    explicit SquareMatrix(std::size_t size = 0) : n(size), data(size * size) {}
    cplx& operator()(std::size_t r, std::size_t c) { return data[r * n + c]; }
    cplx operator()(std::size_t r, std::size_t c) const { return data[r * n + c]; }
};

inline constexpr std::size_t kMaxPermanentDimension = 20;

/// Permanent by Ryser's formula with Gray-code subset updates, O(2^n n).
inline cplx permanent(const SquareMatrix& m) {
    const std::size_t n = m.n;
    if (n > kMaxPermanentDimension)
        throw Error(ErrorCode::DimensionTooLarge, "permanent limited to " + std::to_string(kMaxPermanentDimension) +
                                                      " rows, got " + std::to_string(n));
    if (n == 0) return 1.0;
    std::vector<cplx> row_sums(n, cplx{});
    cplx total = 0.0;
    std::uint64_t gray = 0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        const std::uint64_t next = k ^ (k >> 1);
        const std::uint64_t flipped = next ^ gray;
        const std::size_t col = static_cast<std::size_t>(std::countr_zero(flipped));
        const double sign = (next & flipped) ? 1.0 : -1.0;
        for (std::size_t r = 0; r < n; ++r) row_sums[r] += sign * m(r, col);
        gray = next;
        cplx prod = 1.0;
        for (std::size_t r = 0; r < n; ++r) prod *= row_sums[r];
        const int popcount = std::popcount(next);
        total += ((static_cast<int>(n) - popcount) % 2 == 0) ? prod : -prod;
    }
    return total;
}

using Occupation = std::array<int, 3>;

namespace detail {

inline int total_photons(const Occupation& o) { return o[0] + o[1] + o[2]; }

inline double log_factorial(int n) {
    static const std::vector<double> table = [] {
        std::vector<double> t(1024);
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::lgamma(static_cast<double>(i) + 1.0);
        return t;
    }();
    if (n >= 0 && static_cast<std::size_t>(n) < table.size()) return table[static_cast<std::size_t>(n)];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

inline void check_occupations(const Occupation& in, const Occupation& out) {
    for (int k = 0; k < 3; ++k)
        if (in[k] < 0 || out[k] < 0) throw Error(ErrorCode::InvalidArgument, "occupations must be non-negative");
    if (total_photons(in) != total_photons(out))
        throw Error(ErrorCode::PhotonNumberMismatch, "input and output photon numbers differ");
}

}  // namespace detail

/// <n_out| U |n_in> through the permanent of the submatrix that repeats
/// column j n_in[j] times and row i n_out[i] times.
inline cplx fock_amplitude_permanent(const TransferMatrix& u, const Occupation& n_in, const Occupation& n_out) {
    detail::check_occupations(n_in, n_out);
    const std::size_t n = static_cast<std::size_t>(detail::total_photons(n_in));
    std::vector<int> rows, cols;
    for (int i = 0; i < 3; ++i) rows.insert(rows.end(), static_cast<std::size_t>(n_out[i]), i);
    for (int j = 0; j < 3; ++j) cols.insert(cols.end(), static_cast<std::size_t>(n_in[j]), j);
    SquareMatrix sub(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) sub(r, c) = u(rows[r], cols[c]);
    double log_norm = 0.0;
    for (int k = 0; k < 3; ++k) log_norm += detail::log_factorial(n_in[k]) + detail::log_factorial(n_out[k]);
    return permanent(sub) * std::exp(-0.5 * log_norm);
}

/// Same amplitude as a sum over photon-routing tables X (X[j][i] photons
/// from input j to output i, row sums n_in, column sums n_out):
///   sqrt(prod n_in! prod n_out!) * sum_X prod_ij u(i,j)^X[j][i] / X[j][i]!
/// This is the permanent of a matrix with repeated rows and columns, and it
/// stays cheap when one mode carries many photons.
inline cplx fock_amplitude_routing(const TransferMatrix& u, const Occupation& n_in, const Occupation& n_out) {
    detail::check_occupations(n_in, n_out);
    double log_pref = 0.0;
    for (int k = 0; k < 3; ++k) log_pref += detail::log_factorial(n_in[k]) + detail::log_factorial(n_out[k]);
    log_pref *= 0.5;

    std::array<std::array<double, 3>, 3> log_mod{};
    std::array<std::array<double, 3>, 3> arg{};
    std::array<std::array<bool, 3>, 3> is_zero{};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            const cplx e = u(i, j);
            is_zero[j][i] = (e == cplx{});
            log_mod[j][i] = is_zero[j][i] ? 0.0 : std::log(std::abs(e));
            arg[j][i] = std::arg(e);
        }

    const auto& r = n_in;
    const auto& c = n_out;
    cplx total = 0.0;
    auto add_cell = [&](int j, int i, int x, double& lm, double& ph) -> bool {
        if (x == 0) return true;
        if (is_zero[j][i]) return false;
        lm += x * log_mod[j][i] - detail::log_factorial(x);
        ph += x * arg[j][i];
        return true;
    };

    // Row 0 split (x00, x01, x02), row 1 split (x10, x11, x12), row 2 fixed by
    // the column sums.
    const int x00_lo = std::max(0, r[0] - c[1] - c[2]);
    const int x00_hi = std::min(r[0], c[0]);
    for (int x00 = x00_lo; x00 <= x00_hi; ++x00) {
        const int rem0 = r[0] - x00;
        const int x01_lo = std::max(0, rem0 - c[2]);
        const int x01_hi = std::min(rem0, c[1]);
        for (int x01 = x01_lo; x01 <= x01_hi; ++x01) {
            const int x02 = rem0 - x01;
            const int x10_hi = std::min(r[1], c[0] - x00);
            for (int x10 = 0; x10 <= x10_hi; ++x10) {
                const int rem1 = r[1] - x10;
                const int x11_lo = std::max(0, rem1 - (c[2] - x02));
                const int x11_hi = std::min(rem1, c[1] - x01);
                for (int x11 = x11_lo; x11 <= x11_hi; ++x11) {
                    const int x12 = rem1 - x11;
                    const int x20 = c[0] - x00 - x10;
                    const int x21 = c[1] - x01 - x11;
                    const int x22 = c[2] - x02 - x12;
                    if (x20 < 0 || x21 < 0 || x22 < 0) continue;
                    double lm = log_pref;
                    double ph = 0.0;
                    const bool nonzero = add_cell(0, 0, x00, lm, ph) && add_cell(0, 1, x01, lm, ph) &&
                                         add_cell(0, 2, x02, lm, ph) && add_cell(1, 0, x10, lm, ph) &&
                                         add_cell(1, 1, x11, lm, ph) && add_cell(1, 2, x12, lm, ph) &&
                                         add_cell(2, 0, x20, lm, ph) && add_cell(2, 1, x21, lm, ph) &&
                                         add_cell(2, 2, x22, lm, ph);
                    if (nonzero) total += std::polar(std::exp(lm), ph);
                }
            }
        }
    }
    return total;
}

/// Photon count up to which transition amplitudes go through Ryser's permanent.
inline constexpr int kPermanentPhotonLimit = 10;

/// <n_out| U |n_in>, columns of U indexing inputs and rows outputs.
inline cplx fock_amplitude(const TransferMatrix& u, const Occupation& n_in, const Occupation& n_out) {
    detail::check_occupations(n_in, n_out);
    if (detail::total_photons(n_in) <= kPermanentPhotonLimit) return fock_amplitude_permanent(u, n_in, n_out);
    return fock_amplitude_routing(u, n_in, n_out);
}

inline constexpr int kMinCutoff = 20;
inline constexpr int kMaxCutoff = 120;
inline constexpr double kHeraldImpossibleBelow = 1e-30;
inline constexpr double kMaxTailMass = 1e-10;

/// ceil(|u11 a|^2 + 10 |u11 a| + 20) + n2 + n3, clamped to [20, 120].
inline int default_cutoff(const HeraldSpec& spec) {
    const double seed = std::abs(compose_closed_form(spec.phi)(0, 0)) * spec.alpha_mag;
    const double raw = std::ceil(seed * seed + 10.0 * seed + 20.0) + spec.n2 + spec.n3;
    return static_cast<int>(std::clamp(raw, static_cast<double>(kMinCutoff), static_cast<double>(kMaxCutoff)));
}

namespace detail {

/// e^{-|a|^2/2} a^j / sqrt(j!)
inline cplx coherent_coefficient(double alpha_mag, double theta, int j) {
    if (alpha_mag == 0.0) return j == 0 ? cplx{1.0} : cplx{};
    const double lm = -0.5 * alpha_mag * alpha_mag + j * std::log(alpha_mag) - 0.5 * log_factorial(j);
    return std::polar(std::exp(lm), j * theta);
}

/// Unnormalized output amplitudes psi_k, k = 0..cutoff.
inline std::vector<cplx> raw_herald_amplitudes(const TransferMatrix& u, const HeraldSpec& s, int cutoff) {
    std::vector<cplx> psi(static_cast<std::size_t>(cutoff) + 1, cplx{});
    for (int k = 0; k <= cutoff; ++k) {
        const int j = k + s.m2 + s.m3 - s.n2 - s.n3;
        if (j < 0) continue;
        const cplx w = coherent_coefficient(s.alpha_mag, s.theta, j);
        if (w == cplx{}) continue;
        psi[static_cast<std::size_t>(k)] = w * fock_amplitude(u, {j, s.n2, s.n3}, {k, s.m2, s.m3});
    }
    return psi;
}

}  // namespace detail

struct HeraldResult {
    FockVector state;  ///< normalized, phase-fixed
    double probability = 0.0;
    int cutoff_used = 0;
};

/// Heralded output state and success probability; cutoff <= 0 selects
/// default_cutoff(spec).
inline HeraldResult herald_state(const HeraldSpec& spec, int cutoff = 0) {
    spec.validate();
    if (cutoff <= 0) cutoff = default_cutoff(spec);
    const TransferMatrix u = compose(spec.phi);
    FockVector raw(detail::raw_herald_amplitudes(u, spec, cutoff));
    const double p = raw.norm_sq();
    if (!(p >= kHeraldImpossibleBelow))
        throw Error(ErrorCode::HeraldImpossible, "herald probability " + std::to_string(p) + " below 1e-30");
    if (raw.tail_mass() >= kMaxTailMass)
        throw Error(ErrorCode::CutoffInadequate,
                    "tail mass " + std::to_string(raw.tail_mass()) + " at cutoff " + std::to_string(cutoff));
    return {raw.normalized().phase_fixed(), p, cutoff};
}

/// <a+^k a^l> = sum_n conj(psi_{n-l+k}) psi_n sqrt(n!/(n-l)!) sqrt((n-l+k)!/(n-l)!)
/// on the normalized state.
inline cplx expectation(const FockVector& state, int k, int l) {
    if (k < 0 || l < 0) throw Error(ErrorCode::InvalidArgument, "moment orders must be non-negative");
    const FockVector psi = state.normalized();
    const int cutoff = psi.cutoff();
    cplx acc = 0.0;
    for (int n = l; n <= cutoff; ++n) {
        const int m = n - l + k;
        if (m > cutoff) break;
        double lower = 1.0;
        for (int i = 0; i < l; ++i) lower *= n - i;
        double raise = 1.0;
        for (int i = 0; i < k; ++i) raise *= m - i;
        acc += std::conj(psi[static_cast<std::size_t>(m)]) * psi[static_cast<std::size_t>(n)] * std::sqrt(lower * raise);
    }
    return acc;
}

inline constexpr double kMaxResidualMass = 1e-8;

using HeraldDistribution = std::map<std::pair<int, int>, double>;

namespace detail {

inline HeraldDistribution herald_distribution_unchecked(int n2, int n3, double alpha_mag, double phi, int herald_max,
                                                        int cutoff, double theta) {
    HeraldSpec base{n2, n3, 0, 0, alpha_mag, theta, phi};
    base.validate();
    if (herald_max < 0) throw Error(ErrorCode::InvalidArgument, "herald_max must be non-negative");
    if (cutoff <= 0) {
        // Mode 1 may receive every input photon.
        const double a = alpha_mag;
        cutoff = static_cast<int>(std::clamp(std::ceil(a * a + 10.0 * a + 20.0) + n2 + n3,
                                             static_cast<double>(kMinCutoff), static_cast<double>(kMaxCutoff)));
    }
    const TransferMatrix u = compose(phi);
    HeraldDistribution dist;
    for (int m2 = 0; m2 <= herald_max; ++m2)
        for (int m3 = 0; m3 <= herald_max; ++m3) {
            HeraldSpec s = base;
            s.m2 = m2;
            s.m3 = m3;
            double p = 0.0;
            for (const cplx& a : raw_herald_amplitudes(u, s, cutoff)) p += std::norm(a);
            dist[{m2, m3}] = p;
        }
    return dist;
}

}  // namespace detail

/// Sum of all outcome probabilities, in key order.
inline double total_probability(const HeraldDistribution& dist) {
    double total = 0.0;
    for (const auto& [outcome, p] : dist) total += p;
    return total;
}

/// Probabilities of every herald outcome (m2, m3) in [0, herald_max]^2.
/// cutoff <= 0 selects a cutoff adequate for the total input photon number.
inline HeraldDistribution herald_distribution(int n2, int n3, double alpha_mag, double phi, int herald_max,
                                              int cutoff = 0, double theta = 0.0) {
    HeraldDistribution dist = detail::herald_distribution_unchecked(n2, n3, alpha_mag, phi, herald_max, cutoff, theta);
    const double total = total_probability(dist);
    if (std::abs(1.0 - total) > kMaxResidualMass)
        throw Error(ErrorCode::ResidualMassTooLarge, "outcome probabilities sum to " + std::to_string(total));
    return dist;
}

}  // namespace mzi

#endif  // MZI_FOCK_HPP
