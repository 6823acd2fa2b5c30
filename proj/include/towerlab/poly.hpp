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

#ifndef TOWERLAB_POLY_HPP
#define TOWERLAB_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "towerlab/gf.hpp"

namespace towerlab {

/// Univariate polynomial over one FieldCtx, coefficients constant term first.
/// The zero polynomial has an empty coefficient vector and degree -1.
class UPoly {
public:
    explicit UPoly(const FieldCtx* ctx) : ctx_(ctx) {}
    UPoly(const FieldCtx* ctx, std::vector<FFElem> coeffs) : ctx_(ctx), c_(std::move(coeffs)) {
        for (const auto& x : c_)
            if (x.ctx() != ctx_) throw CtxMismatch();
        trim();
    }
    static UPoly zero(const FieldCtx* ctx) { return UPoly(ctx); }
    static UPoly constant(const FFElem& a) { return UPoly(a.ctx(), {a}); }
    static UPoly x(const FieldCtx* ctx) { return UPoly(ctx, {ff_zero(ctx), ff_one(ctx)}); }
    /// c * T^d
    static UPoly monomial(const FFElem& c, std::size_t d) {
        std::vector<FFElem> v(d + 1, ff_zero(c.ctx()));
        v[d] = c;
        return UPoly(c.ctx(), std::move(v));
    }

    const FieldCtx* ctx() const { return ctx_; }
    int degree() const { return int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    FFElem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : ff_zero(ctx_); }
    FFElem lead() const { return c_.back(); }
    const std::vector<FFElem>& coeffs() const { return c_; }

    UPoly operator+(const UPoly& o) const {
        check(o);
        std::vector<FFElem> r(std::max(c_.size(), o.c_.size()), ff_zero(ctx_));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
        return UPoly(ctx_, std::move(r));
    }
    UPoly operator-(const UPoly& o) const {
        check(o);
        std::vector<FFElem> r(std::max(c_.size(), o.c_.size()), ff_zero(ctx_));
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
        return UPoly(ctx_, std::move(r));
    }
    UPoly operator-() const {
        std::vector<FFElem> r = c_;
        for (auto& x : r) x = -x;
        return UPoly(ctx_, std::move(r));
    }
    UPoly operator*(const UPoly& o) const {
        check(o);
        if (is_zero() || o.is_zero()) return zero(ctx_);
        std::vector<FFElem> r(c_.size() + o.c_.size() - 1, ff_zero(ctx_));
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = r[i + j] + c_[i] * o.c_[j];
        }
        return UPoly(ctx_, std::move(r));
    }
    UPoly operator*(const FFElem& s) const {
        std::vector<FFElem> r = c_;
        for (auto& x : r) x = x * s;
        return UPoly(ctx_, std::move(r));
    }

    bool operator==(const UPoly& o) const { return ctx_ == o.ctx_ && c_ == o.c_; }
    bool operator!=(const UPoly& o) const { return !(*this == o); }

    /// (quotient, remainder); divisor must be nonzero.
    std::pair<UPoly, UPoly> divmod(const UPoly& d) const {
        check(d);
        if (d.is_zero()) throw DivisionByZeroPoly();
        UPoly q = zero(ctx_), r = *this;
        FFElem li = d.lead().inv();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            FFElem c = r.lead() * li;
            std::size_t shift = std::size_t(r.degree() - d.degree());
            q = q + monomial(c, shift);
            r = r - d * monomial(c, shift);
        }
        return {q, r};
    }
    UPoly operator/(const UPoly& d) const { return divmod(d).first; }
    UPoly operator%(const UPoly& d) const { return divmod(d).second; }

    UPoly monic() const {
        if (is_zero()) return *this;
        return *this * lead().inv();
    }
    UPoly derivative() const {
        if (c_.size() < 2) return zero(ctx_);
        std::vector<FFElem> r(c_.size() - 1, ff_zero(ctx_));
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * ff_int(ctx_, std::int64_t(i));
        return UPoly(ctx_, std::move(r));
    }
    FFElem eval(const FFElem& x) const {
        FFElem acc = ff_zero(ctx_);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }
    /// this(g)
    UPoly compose(const UPoly& g) const {
        check(g);
        UPoly acc = zero(ctx_);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * g + constant(c_[i]);
        return acc;
    }

    /// Deterministic total order: degree first, then coefficients from the
    /// top down by element lex rank.
    bool operator<(const UPoly& o) const {
        if (degree() != o.degree()) return degree() < o.degree();
        for (std::size_t i = c_.size(); i-- > 0;) {
            auto ra = ctx_->lex_rank(c_[i].code()), rb = ctx_->lex_rank(o.c_[i].code());
            if (ra != rb) return ra < rb;
        }
        return false;
    }

    std::string str(const std::string& var = "T") const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            if (i == 0 || c_[i] != ff_one(ctx_)) s += c_[i].str();
            if (i > 0) {
                if (c_[i] != ff_one(ctx_)) s += "*";
                s += var;
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }

private:
    void check(const UPoly& o) const {
        if (ctx_ != o.ctx_) throw CtxMismatch();
    }
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    const FieldCtx* ctx_;
    std::vector<FFElem> c_;
};

inline UPoly gcd_poly(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly r = a % b;
        a = b;
        b = r;
    }
    return a.monic();
}

inline UPoly powmod(UPoly base, std::uint64_t e, const UPoly& mod) {
    UPoly r = UPoly::constant(ff_one(base.ctx()));
    base = base % mod;
    while (e) {
        if (e & 1) r = (r * base) % mod;
        base = (base * base) % mod;
        e >>= 1;
    }
    return r;
}

namespace detail {

/// Deterministic xorshift64* stream; the factorization routines below seed it
/// with a fixed constant so output is byte-identical across runs.
struct Rng64 {
    std::uint64_t s;
    explicit Rng64(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        return s * 0x2545F4914F6CDD1Dull;
    }
};

inline UPoly random_poly_below(const FieldCtx* ctx, int deg_bound, Rng64& rng) {
    std::vector<FFElem> c;
    c.reserve(std::size_t(deg_bound));
    for (int i = 0; i < deg_bound; ++i)
        c.emplace_back(ctx, ctx->code_at_lex(rng.next() % ctx->q()));
    return UPoly(ctx, std::move(c));
}

/// p-th root of f when f' = 0, i.e. f = g(T^p) with g recovered by taking
/// p-th roots of coefficients (c -> c^{p^{k-1}} in F_{p^k}).
inline UPoly pth_root(const UPoly& f) {
    const FieldCtx* ctx = f.ctx();
    std::uint64_t p = ctx->p();
    std::int64_t root_exp = 1;
    for (std::uint32_t i = 0; i + 1 < ctx->k(); ++i) root_exp *= std::int64_t(p);
    std::vector<FFElem> g;
    for (int i = 0; i <= f.degree(); i += int(p)) g.push_back(f.coeff(std::size_t(i)).pow(root_exp));
    return UPoly(ctx, std::move(g));
}

// Cantor-Zassenhaus equal-degree split of a squarefree product of degree-d
// irreducibles.
inline void equal_degree(const UPoly& f, int d, Rng64& rng, std::vector<UPoly>& out) {
    if (f.degree() == d) {
        out.push_back(f.monic());
        return;
    }
    const FieldCtx* ctx = f.ctx();
    std::uint64_t Q = ctx->q();
    UPoly g = f;
    while (true) {
        UPoly a = random_poly_below(ctx, f.degree(), rng);
        if (a.degree() < 1) continue;
        UPoly b(ctx);
        if (ctx->p() == 2) {
            // trace map over F_2: sum of a^{2^i}, i < k*d
            UPoly t = a % g, acc = t;
            std::uint64_t bits = std::uint64_t(ctx->k()) * std::uint64_t(d);
            for (std::uint64_t i = 1; i < bits; ++i) {
                t = (t * t) % g;
                acc = acc + t;
            }
            b = acc;
        } else {
            std::uint64_t e = 1;
            for (int i = 0; i < d; ++i) e *= Q;
            b = powmod(a, (e - 1) / 2, g) - UPoly::constant(ff_one(ctx));
        }
        UPoly h = gcd_poly(b, g);
        if (h.degree() > 0 && h.degree() < g.degree()) {
            equal_degree(h, d, rng, out);
            equal_degree(g / h, d, rng, out);
            return;
        }
    }
}

}  // namespace detail

/// Complete factorization of a nonzero univariate polynomial into monic
/// irreducibles with multiplicities, plus the leading unit.  Factors are
/// sorted by (degree, coefficient lex) so the result is deterministic.
struct Factorization {
    FFElem unit;
    std::vector<std::pair<UPoly, int>> factors;
};

inline Factorization factor_univariate(const UPoly& f_in) {
    if (f_in.is_zero()) throw DivisionByZeroPoly("cannot factor the zero polynomial");
    const FieldCtx* ctx = f_in.ctx();
    Factorization result{f_in.lead(), {}};
    UPoly f = f_in.monic();
    if (f.degree() == 0) return result;

    std::map<int, UPoly> power_parts;  // exponent -> product of primes at that power
    // squarefree decomposition, with p-th-root descent for inseparable parts
    struct Item { UPoly g; int mult; };
    std::vector<Item> stack{{f, 1}};
    std::vector<std::pair<UPoly, int>> squarefree;  // (squarefree poly, multiplicity)
    while (!stack.empty()) {
        auto [g, mult] = stack.back();
        stack.pop_back();
        if (g.degree() < 1) continue;
        UPoly d = g.derivative();
        if (d.is_zero()) {
            stack.push_back({detail::pth_root(g), mult * int(ctx->p())});
            continue;
        }
        UPoly c = gcd_poly(g, d);   // carries higher powers and inseparable part
        UPoly w = g / c;            // squarefree product of primes with mult not divisible by p
        int i = 1;
        while (w.degree() > 0) {
            UPoly y = gcd_poly(w, c);
            UPoly part = w / y;     // primes of multiplicity exactly i (within g)
            if (part.degree() > 0) squarefree.emplace_back(part, mult * i);
            w = y;
            c = c / y;
            ++i;
        }
        if (c.degree() > 0) stack.push_back({c, mult});
    }

    detail::Rng64 rng(0x746f776572ull);  // fixed seed, deterministic output
    for (const auto& [sf, mult] : squarefree) {
        // distinct-degree: peel gcd(x^{Q^d} - x, rest)
        UPoly rest = sf;
        UPoly xq = UPoly::x(ctx) % rest;
        int d = 0;
        while (rest.degree() > 0) {
            ++d;
            if (2 * d > rest.degree()) {
                result.factors.emplace_back(rest.monic(), mult);
                break;
            }
            xq = powmod(xq, ctx->q(), rest);
            UPoly g = gcd_poly(xq - UPoly::x(ctx), rest);
            if (g.degree() > 0) {
                std::vector<UPoly> irr;
                detail::equal_degree(g, d, rng, irr);
                for (auto& h : irr) result.factors.emplace_back(std::move(h), mult);
                rest = rest / g;
                xq = xq % rest;
            }
        }
    }
    std::sort(result.factors.begin(), result.factors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return result;
}

/// Roots in the coefficient field, each listed once, lex order.
inline std::vector<FFElem> poly_roots(const UPoly& f) {
    std::vector<FFElem> roots;
    if (f.is_zero()) throw DivisionByZeroPoly("zero polynomial has every root");
    for (const auto& [g, m] : factor_univariate(f).factors)
        if (g.degree() == 1) roots.push_back(-g.coeff(0));
    std::sort(roots.begin(), roots.end(), [](const FFElem& a, const FFElem& b) { return a.lex_less(b); });
    return roots;
}

/// Rational function num/den in lowest terms with monic denominator.
class RatFunc {
public:
    RatFunc(UPoly num, UPoly den) : num_(std::move(num)), den_(std::move(den)) {
        if (num_.ctx() != den_.ctx()) throw CtxMismatch();
        if (den_.is_zero()) throw DivisionByZeroPoly("zero denominator");
        normalize();
    }
    explicit RatFunc(UPoly num) : RatFunc(std::move(num), UPoly::constant(ff_one(num.ctx()))) {}

    const UPoly& num() const { return num_; }
    const UPoly& den() const { return den_; }
    const FieldCtx* ctx() const { return num_.ctx(); }
    bool is_zero() const { return num_.is_zero(); }

    RatFunc operator+(const RatFunc& o) const { return {num_ * o.den_ + o.num_ * den_, den_ * o.den_}; }
    RatFunc operator-(const RatFunc& o) const { return {num_ * o.den_ - o.num_ * den_, den_ * o.den_}; }
    RatFunc operator*(const RatFunc& o) const { return {num_ * o.num_, den_ * o.den_}; }
    RatFunc operator/(const RatFunc& o) const {
        if (o.is_zero()) throw DivisionByZeroPoly();
        return {num_ * o.den_, den_ * o.num_};
    }
    RatFunc operator-() const { return {-num_, den_}; }
    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }

    /// Value at x, or nullopt when x is a pole.
    std::optional<FFElem> eval(const FFElem& x) const {
        FFElem d = den_.eval(x);
        if (d.is_zero()) return std::nullopt;
        return num_.eval(x) / d;
    }

    /// Valuation at the finite place given by a monic irreducible pi.
    int valuation_at(const UPoly& pi) const {
        if (is_zero()) throw DivisionByZeroPoly("valuation of zero");
        return valuation_of(num_, pi) - valuation_of(den_, pi);
    }
    /// Valuation at the infinite place: deg(den) - deg(num).
    int valuation_at_infinity() const {
        if (is_zero()) throw DivisionByZeroPoly("valuation of zero");
        return den_.degree() - num_.degree();
    }

    static int valuation_of(const UPoly& f, const UPoly& pi) {
        int v = 0;
        UPoly g = f;
        while (true) {
            auto [q, r] = g.divmod(pi);
            if (!r.is_zero()) return v;
            ++v;
            g = q;
        }
    }

    std::string str(const std::string& var = "x") const {
        if (den_ == UPoly::constant(ff_one(ctx()))) return num_.str(var);
        return "(" + num_.str(var) + ") / (" + den_.str(var) + ")";
    }

private:
    void normalize() {
        if (num_.is_zero()) {
            den_ = UPoly::constant(ff_one(ctx()));
            return;
        }
        UPoly g = gcd_poly(num_, den_);
        if (g.degree() > 0) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        FFElem li = den_.lead().inv();
        num_ = num_ * li;
        den_ = den_ * li;
    }

    UPoly num_, den_;
};

}  // namespace towerlab

#endif  // TOWERLAB_POLY_HPP
