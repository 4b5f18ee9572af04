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

#ifndef MZI_GENFUNC_HPP
#define MZI_GENFUNC_HPP

// Truncated multivariate formal power series with complex coefficients.
//
// Mixed partial derivatives at the origin of products of exponentials of
// polynomials are obtained exactly by coefficient extraction: the series is
// truncated per variable at the highest derivative order requested, so
// every stored coefficient is exact up to floating-point rounding.
//
// Storage is a dense mixed-radix array over [0, max_order_v] per variable.
// The spaces used here never exceed a few tens of thousands of slots.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mzi/error.hpp"

namespace mzi {

using cplx = std::complex<double>;
using MultiIndex = std::vector<int>;

class FormalSeries {
public:
    /// Coefficient-space size above which construction is refused.
    static constexpr std::size_t kMaxSlots = std::size_t{1} << 22;

    FormalSeries() : FormalSeries(std::vector<std::string>{}, MultiIndex{}) {}

    FormalSeries(std::vector<std::string> variables, MultiIndex max_orders)
        : space_(make_space(std::move(variables), std::move(max_orders))), coeffs_(space_->size, cplx{}) {}

    /// Constant series c in the same variable space as `other`.
    static FormalSeries constant_like(const FormalSeries& other, cplx c) {
        FormalSeries s = zero_like(other);
        s.coeffs_[0] = c;
        return s;
    }

    static FormalSeries zero_like(const FormalSeries& other) {
        FormalSeries s;
        s.space_ = other.space_;
        s.coeffs_.assign(other.space_->size, cplx{});
        return s;
    }

    std::size_t variable_count() const { return space_->names.size(); }
    const std::vector<std::string>& variables() const { return space_->names; }
    const MultiIndex& max_orders() const { return space_->orders; }

    std::size_t variable_index(std::string_view name) const {
        const auto& names = space_->names;
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw Error(ErrorCode::InvalidArgument, "unknown formal variable '" + std::string(name) + "'");
        return static_cast<std::size_t>(it - names.begin());
    }

    bool same_space(const FormalSeries& other) const {
        return space_ == other.space_ ||
               (space_->names == other.space_->names && space_->orders == other.space_->orders);
    }

    bool fits(const MultiIndex& index) const {
        if (index.size() != variable_count()) return false;
        for (std::size_t v = 0; v < index.size(); ++v)
            if (index[v] < 0 || index[v] > space_->orders[v]) return false;
        return true;
    }

    cplx coefficient(const MultiIndex& index) const { return coeffs_[checked_offset(index)]; }

    /// Adds c to the coefficient at `index`.
    void add_term(const MultiIndex& index, cplx c) { coeffs_[checked_offset(index)] += c; }

    /// Adds c * x_v^power, silently dropping it when it lies beyond truncation.
    void add_power(std::size_t variable, int power, cplx c) {
        if (power > space_->orders[variable]) return;
        coeffs_[space_->strides[variable] * static_cast<std::size_t>(power)] += c;
    }

    /// c * x_a * x_b (a != b) or c * x_a^2 (a == b); dropped when truncated.
    void add_product(std::size_t a, std::size_t b, cplx c) {
        MultiIndex idx(variable_count(), 0);
        ++idx[a];
        ++idx[b];
        if (fits(idx)) coeffs_[offset(idx)] += c;
    }

    cplx constant_term() const { return coeffs_[0]; }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
    }

    /// Calls f(exponents, value) for every nonzero coefficient, in storage order.
    template <typename F>
    void for_each_term(F&& f) const {
        const std::size_t nv = variable_count();
        MultiIndex e(nv);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == cplx{}) continue;
            const int* ex = exponents_of(i);
            std::copy(ex, ex + nv, e.begin());
            f(static_cast<const MultiIndex&>(e), coeffs_[i]);
        }
    }

    std::size_t nonzero_count() const {
        return static_cast<std::size_t>(
            std::count_if(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c != cplx{}; }));
    }

    FormalSeries& operator+=(const FormalSeries& other) {
        require_same_space(other);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
        return *this;
    }

    FormalSeries& operator-=(const FormalSeries& other) {
        require_same_space(other);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
        return *this;
    }

    FormalSeries& operator*=(cplx c) {
        for (auto& x : coeffs_) x *= c;
        return *this;
    }

    friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
    friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a -= b; }
    friend FormalSeries operator*(FormalSeries a, cplx c) { return a *= c; }
    friend FormalSeries operator*(cplx c, FormalSeries a) { return a *= c; }

    /// *this *= exp(c x^e), truncated; e must be nonzero.
    void multiply_by_exp_monomial(const MultiIndex& e, cplx c) {
        const std::size_t nv = variable_count();
        int max_power = std::numeric_limits<int>::max();
        for (std::size_t v = 0; v < nv; ++v)
            if (e[v] > 0) max_power = std::min(max_power, space_->orders[v] / e[v]);
        if (max_power == std::numeric_limits<int>::max() || max_power == 0) return;
        std::vector<cplx> weights(static_cast<std::size_t>(max_power) + 1);
        weights[0] = 1.0;
        for (int j = 1; j <= max_power; ++j) weights[static_cast<std::size_t>(j)] = weights[static_cast<std::size_t>(j) - 1] * c / static_cast<double>(j);
        const std::size_t shift = offset(e);
        for (std::size_t x = coeffs_.size(); x-- > 0;) {
            const int* ex = exponents_of(x);
            int reach = max_power;
            for (std::size_t v = 0; v < nv && reach > 0; ++v)
                if (e[v] > 0) reach = std::min(reach, e[v] == 1 ? ex[v] : ex[v] / e[v]);
            cplx acc = coeffs_[x];
            for (int j = 1; j <= reach; ++j) acc += coeffs_[x - static_cast<std::size_t>(j) * shift] * weights[static_cast<std::size_t>(j)];
            coeffs_[x] = acc;
        }
    }

    friend FormalSeries series_mul(const FormalSeries& a, const FormalSeries& b);

private:
    struct Space {
        std::vector<std::string> names;
        MultiIndex orders;
        std::vector<std::size_t> strides;
        std::size_t size = 1;
        std::vector<int> exponents;  // size * names.size(), row per flat slot
    };

    /// Spaces are immutable and shared; recently built ones are reused per thread.
    static std::shared_ptr<const Space> make_space(std::vector<std::string> names, MultiIndex orders) {
        thread_local std::vector<std::shared_ptr<const Space>> cache;
        for (const auto& sp : cache)
            if (sp->orders == orders && sp->names == names) return sp;
        auto sp = build_space(std::move(names), std::move(orders));
        if (cache.size() >= 64) cache.erase(cache.begin());
        cache.push_back(sp);
        return sp;
    }

    static std::shared_ptr<const Space> build_space(std::vector<std::string> names, MultiIndex orders) {
        if (names.size() != orders.size())
            throw Error(ErrorCode::InvalidArgument, "one truncation order is required per variable");
        auto sp = std::make_shared<Space>();
        sp->names = std::move(names);
        sp->orders = std::move(orders);
        const std::size_t nv = sp->names.size();
        sp->strides.resize(nv);
        std::size_t size = 1;
        for (std::size_t v = nv; v-- > 0;) {
            if (sp->orders[v] < 0) throw Error(ErrorCode::InvalidArgument, "truncation orders must be >= 0");
            sp->strides[v] = size;
            size *= static_cast<std::size_t>(sp->orders[v]) + 1;
            if (size > kMaxSlots) throw Error(ErrorCode::SeriesOrderTooLarge, "series coefficient space too large");
        }
        sp->size = size;
        sp->exponents.resize(size * nv);
        for (std::size_t i = 0; i < size; ++i) {
            std::size_t rest = i;
            for (std::size_t v = 0; v < nv; ++v) {
                sp->exponents[i * nv + v] = static_cast<int>(rest / sp->strides[v]);
                rest %= sp->strides[v];
            }
        }
        return sp;
    }

    const int* exponents_of(std::size_t flat) const { return space_->exponents.data() + flat * variable_count(); }

    std::size_t offset(const MultiIndex& index) const {
        std::size_t off = 0;
        for (std::size_t v = 0; v < index.size(); ++v) off += space_->strides[v] * static_cast<std::size_t>(index[v]);
        return off;
    }

    std::size_t checked_offset(const MultiIndex& index) const {
        if (index.size() != variable_count())
            throw Error(ErrorCode::InvalidArgument, "multi-index has the wrong number of variables");
        if (!fits(index)) throw Error(ErrorCode::OrderOverflow, "multi-index exceeds truncation order");
        return offset(index);
    }

    void require_same_space(const FormalSeries& other) const {
        if (!same_space(other))
            throw Error(ErrorCode::VariableMismatch, "series have different variables or truncation orders");
    }

    std::shared_ptr<const Space> space_;
    std::vector<cplx> coeffs_;
};

/// Truncated product.
inline FormalSeries series_mul(const FormalSeries& a, const FormalSeries& b) {
    a.require_same_space(b);
    FormalSeries out = FormalSeries::zero_like(a);
    const std::size_t nv = a.variable_count();
    const auto& orders = a.space_->orders;

    struct Term {
        std::size_t flat;
        cplx value;
    };
    std::vector<Term> rhs;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
        if (b.coeffs_[j] != cplx{}) rhs.push_back({j, b.coeffs_[j]});

    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        const cplx ai = a.coeffs_[i];
        if (ai == cplx{}) continue;
        const int* ea = a.exponents_of(i);
        for (const Term& t : rhs) {
            const int* eb = b.exponents_of(t.flat);
            bool ok = true;
            for (std::size_t v = 0; v < nv; ++v)
                if (ea[v] + eb[v] > orders[v]) {
                    ok = false;
                    break;
                }
            if (ok) out.coeffs_[i + t.flat] += ai * t.value;
        }
    }
    return out;
}

/// Builds a series from (multi-index, coefficient) terms; repeated indices add.
inline FormalSeries series_from_polynomial(std::vector<std::string> variables,
                                           const std::vector<std::pair<MultiIndex, cplx>>& terms,
                                           MultiIndex max_orders) {
    FormalSeries s(std::move(variables), std::move(max_orders));
    for (const auto& [index, c] : terms) s.add_term(index, c);
    return s;
}

/// exp(p) truncated to the series' orders. p must have no constant term.
///
/// Variables commute, so exp of a sum is the product of the exponentials of
/// its monomials. Multiplying by exp(c x^e) is done in place: slot x gains
/// sum_j old[x - j e] c^j / j!, visiting slots from the top so every source
/// is still unmodified. The result equals the truncated power sum
/// sum_k p^k / k!.
inline FormalSeries series_exp(const FormalSeries& p) {
    if (p.constant_term() != cplx{})
        throw Error(ErrorCode::NonzeroConstantTerm, "exp requires a series without constant term");
    FormalSeries result = FormalSeries::constant_like(p, 1.0);
    p.for_each_term([&](const MultiIndex& e, cplx c) { result.multiply_by_exp_monomial(e, c); });
    return result;
}

/// Mixed partial derivative at the origin: coefficient(index) * prod(index_v!).
inline cplx extract_derivative(const FormalSeries& series, const MultiIndex& index) {
    cplx c = series.coefficient(index);
    double scale = 1.0;
    for (int n : index)
        for (int k = 2; k <= n; ++k) scale *= k;
    return c * scale;
}

}  // namespace mzi

#endif  // MZI_GENFUNC_HPP
