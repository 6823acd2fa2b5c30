/*
   Copyright 2026 the towerlab authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef TOWERLAB_LAURENT_HPP
#define TOWERLAB_LAURENT_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "towerlab/poly.hpp"

namespace towerlab {

/// Truncated Laurent series: coefficients for exponents [lo, hi), everything
/// below lo is exactly zero, everything at hi and above is unknown.  An empty
/// coefficient window means "zero as far as tracked" — asking such a series
/// for its valuation throws PrecisionExhausted so the caller can retry with
/// a wider window.
class Laurent {
public:
    Laurent(const FieldCtx* ctx, int lo, std::vector<FFElem> coeffs)
        : ctx_(ctx), lo_(lo), c_(std::move(coeffs)) {
        normalize();
    }
    /// Known to be zero on (-inf, hi).
    static Laurent zero_known_below(const FieldCtx* ctx, int hi) { return Laurent(ctx, hi, {}); }
    /// c * sigma^e, tracked for `prec` coefficients.
    static Laurent monomial(const FFElem& c, int e, int prec) {
        std::vector<FFElem> v(std::size_t(prec), ff_zero(c.ctx()));
        v[0] = c;
        return Laurent(c.ctx(), e, std::move(v));
    }

    const FieldCtx* ctx() const { return ctx_; }
    int lo() const { return lo_; }
    int hi() const { return lo_ + int(c_.size()); }
    bool window_empty() const { return c_.empty(); }

    /// Exact valuation; PrecisionExhausted when nothing nonzero is tracked.
    int val() const {
        if (c_.empty()) throw PrecisionExhausted("valuation beyond tracked window");
        return lo_;
    }
    FFElem lead() const {
        if (c_.empty()) throw PrecisionExhausted();
        return c_.front();
    }
    /// Coefficient at absolute exponent e; must be below the knowledge bound.
    FFElem at(int e) const {
        if (e >= hi()) throw PrecisionExhausted("coefficient beyond tracked window");
        if (e < lo_) return ff_zero(ctx_);
        return c_[std::size_t(e - lo_)];
    }

    Laurent truncated(int new_hi) const {
        if (new_hi >= hi()) return *this;
        std::vector<FFElem> v(c_.begin(), c_.begin() + std::max(0, new_hi - lo_));
        return Laurent(ctx_, std::min(lo_, new_hi), std::move(v));
    }

    Laurent operator+(const Laurent& o) const {
        check(o);
        int h = std::min(hi(), o.hi());
        int l = std::min(lo_, o.lo_);
        if (l > h) l = h;
        std::vector<FFElem> v(std::size_t(h - l), ff_zero(ctx_));
        for (int e = l; e < h; ++e) {
            FFElem a = (e >= lo_ && e < hi()) ? c_[std::size_t(e - lo_)] : ff_zero(ctx_);
            FFElem b = (e >= o.lo_ && e < o.hi()) ? o.c_[std::size_t(e - o.lo_)] : ff_zero(ctx_);
            v[std::size_t(e - l)] = a + b;
        }
        return Laurent(ctx_, l, std::move(v));
    }
    Laurent operator-() const {
        std::vector<FFElem> v = c_;
        for (auto& x : v) x = -x;
        return Laurent(ctx_, lo_, std::move(v));
    }
    Laurent operator-(const Laurent& o) const { return *this + (-o); }

    Laurent operator*(const Laurent& o) const {
        check(o);
        // knowledge bound: a term of exponent e needs every split e = i + j
        // with i >= lo, j >= o.lo known
        int h = std::min(lo_ + o.hi(), o.lo_ + hi());
        if (c_.empty() || o.c_.empty()) return zero_known_below(ctx_, h);
        int l = lo_ + o.lo_;
        std::vector<FFElem> v(std::size_t(std::max(0, h - l)), ff_zero(ctx_));
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j) {
                int e = lo_ + int(i) + o.lo_ + int(j);
                if (e >= h) break;
                v[std::size_t(e - l)] = v[std::size_t(e - l)] + c_[i] * o.c_[j];
            }
        }
        return Laurent(ctx_, l, std::move(v));
    }
    Laurent operator*(const FFElem& s) const {
        std::vector<FFElem> v = c_;
        for (auto& x : v) x = x * s;
        return Laurent(ctx_, lo_, std::move(v));
    }
    Laurent shifted(int d) const { return Laurent(ctx_, lo_ + d, c_); }

    /// Multiplicative inverse; leading coefficient must be tracked.
    Laurent inverse() const {
        if (c_.empty()) throw PrecisionExhausted("inverse of apparently-zero series");
        if (c_.front().is_zero()) throw Error("internal: unnormalized series");
        std::size_t n = c_.size();
        std::vector<FFElem> b(n, ff_zero(ctx_));
        FFElem u0 = c_.front().inv();
        b[0] = u0;
        for (std::size_t m = 1; m < n; ++m) {
            FFElem s = ff_zero(ctx_);
            for (std::size_t i = 1; i <= m; ++i) s = s + c_[i] * b[m - i];
            b[m] = -u0 * s;
        }
        return Laurent(ctx_, -lo_, std::move(b));
    }

    Laurent pow(int e) const {
        if (e < 0) return inverse().pow(-e);
        // a wide unit so repeated squaring, not the seed, bounds precision
        int w = int(c_.size()) * std::max(e, 1) + 8;
        Laurent r = monomial(ff_one(ctx_), 0, w);
        Laurent b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    bool same_window_value(const Laurent& o) const {
        int h = std::min(hi(), o.hi());
        for (int e = std::min(lo_, o.lo_); e < h; ++e)
            if (at(e) != o.at(e)) return false;
        return true;
    }

private:
    void check(const Laurent& o) const {
        if (ctx_ != o.ctx_) throw CtxMismatch();
    }
    void normalize() {
        while (!c_.empty() && c_.front().is_zero()) {
            c_.erase(c_.begin());
            ++lo_;
        }
    }

    const FieldCtx* ctx_;
    int lo_;
    std::vector<FFElem> c_;
};

/// Polynomial evaluated at a Laurent series (Horner).
inline Laurent eval_poly_at(const UPoly& f, const Laurent& s, int prec) {
    const FieldCtx* ctx = s.ctx();
    Laurent acc = Laurent(ctx, 0, std::vector<FFElem>(std::size_t(prec), ff_zero(ctx)));
    bool started = false;
    for (int i = f.degree(); i >= 0; --i) {
        if (!started) {
            acc = Laurent::monomial(f.coeff(std::size_t(i)), 0, prec);
            started = true;
            continue;
        }
        acc = acc * s + Laurent::monomial(f.coeff(std::size_t(i)), 0, prec);
    }
    if (!started) return Laurent::zero_known_below(ctx, prec);
    return acc;
}

/// Rational function evaluated at a Laurent series.
inline Laurent eval_ratfunc_at(const RatFunc& r, const Laurent& s, int prec) {
    Laurent num = eval_poly_at(r.num(), s, prec);
    Laurent den = eval_poly_at(r.den(), s, prec);
    return num * den.inverse();
}

/// this-series (in variable s) composed with S(tau); v(S) >= 1 required.
inline Laurent compose_laurent(const Laurent& f, const Laurent& S, int prec) {
    const FieldCtx* ctx = f.ctx();
    if (f.window_empty()) return Laurent::zero_known_below(ctx, prec);
    if (S.val() < 1) throw Error("internal: composition needs v(S) >= 1");
    // f = sum_{e=lo}^{hi-1} c_e s^e = S^{lo} * poly(S)
    Laurent acc = Laurent::monomial(f.at(f.hi() - 1), 0, prec);
    for (int e = f.hi() - 2; e >= f.lo(); --e)
        acc = acc * S + Laurent::monomial(f.at(e), 0, prec);
    return acc * S.pow(f.lo());
}

}  // namespace towerlab

#endif  // TOWERLAB_LAURENT_HPP
