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

#ifndef TOWERLAB_GF_HPP
#define TOWERLAB_GF_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "towerlab/errors.hpp"

namespace towerlab {

/// Exact arithmetic in F_{p^k}, p prime, p^k <= 2^20.
///
/// Elements are stored as integer codes: code = sum c_i * p^i where
/// (c_0, ..., c_{k-1}) are the coordinates w.r.t. the power basis of the
/// modulus root, constant term first.  Multiplication goes through
/// discrete-log tables built from a fixed primitive element, so all
/// operations are deterministic for a given (p, k, modulus).
class FieldCtx {
public:
    using code_t = std::uint32_t;

    static constexpr std::uint64_t kMaxCardinality = 1u << 20;

    /// Builds F_{p^k}.  When no modulus is given, the lexicographically
    /// least monic irreducible of degree k over F_p is used (coefficients
    /// compared constant-term-first), so the representation is reproducible.
    static std::shared_ptr<const FieldCtx> make(std::uint32_t p, std::uint32_t k,
                                                std::vector<std::uint32_t> modulus = {}) {
        return std::shared_ptr<const FieldCtx>(new FieldCtx(p, k, std::move(modulus)));
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t k() const { return k_; }
    std::uint64_t q() const { return q_; }
    /// Monic modulus, k+1 coefficients, constant term first.
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    code_t generator() const { return gen_; }

    // --- code-level arithmetic -------------------------------------------

    code_t add(code_t a, code_t b) const {
        if (p_ == 2) return a ^ b;
        code_t r = 0, mul = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            std::uint32_t da = (a / powp_[i]) % p_, db = (b / powp_[i]) % p_;
            r += ((da + db) % p_) * mul;
            mul *= p_;
        }
        return r;
    }
    code_t neg(code_t a) const {
        if (p_ == 2) return a;
        code_t r = 0, mul = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            std::uint32_t d = (a / powp_[i]) % p_;
            r += ((p_ - d) % p_) * mul;
            mul *= p_;
        }
        return r;
    }
    code_t sub(code_t a, code_t b) const { return add(a, neg(b)); }
    code_t mul(code_t a, code_t b) const {
        if (a == 0 || b == 0) return 0;
        std::uint64_t e = std::uint64_t(log_[a]) + log_[b];
        if (e >= q_ - 1) e -= q_ - 1;
        return exp_[e];
    }
    code_t inv(code_t a) const {
        if (a == 0) throw DivisionByZero();
        return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    }
    code_t div(code_t a, code_t b) const { return mul(a, inv(b)); }
    /// a^e with exponent reduced mod q-1 for a nonzero base.
    code_t pow(code_t a, std::int64_t e) const {
        if (a == 0) {
            if (e > 0) return 0;
            if (e == 0) return 1;
            throw DivisionByZero();
        }
        std::int64_t m = std::int64_t(q_ - 1);
        std::int64_t r = (std::int64_t(log_[a]) * (((e % m) + m) % m)) % m;
        return exp_[r];
    }

    // --- coordinates and element order -----------------------------------

    std::vector<std::uint32_t> coords(code_t a) const {
        std::vector<std::uint32_t> c(k_);
        for (std::uint32_t i = 0; i < k_; ++i) c[i] = (a / powp_[i]) % p_;
        return c;
    }
    code_t from_coords(const std::vector<std::uint32_t>& c) const {
        code_t a = 0;
        for (std::uint32_t i = 0; i < k_ && i < c.size(); ++i) a += (c[i] % p_) * powp_[i];
        return a;
    }
    /// Lexicographic rank of an element, coordinates compared constant-term-first.
    std::uint64_t lex_rank(code_t a) const {
        std::uint64_t r = 0;
        for (std::uint32_t i = 0; i < k_; ++i) r = r * p_ + (a / powp_[i]) % p_;
        return r;
    }
    code_t code_at_lex(std::uint64_t rank) const {
        code_t a = 0;
        for (std::uint32_t i = k_; i-- > 0;) {
            a += (rank % p_) * powp_[i];
            rank /= p_;
        }
        return a;
    }

    bool operator==(const FieldCtx& o) const {
        return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_;
    }

private:
    FieldCtx(std::uint32_t p, std::uint32_t k, std::vector<std::uint32_t> modulus)
        : p_(p), k_(k) {
        if (k_ < 1) throw Error("extension degree must be >= 1");
        if (!is_prime(p_)) throw NotPrime("p = " + std::to_string(p_) + " is not prime");
        q_ = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            q_ *= p_;
            if (q_ > kMaxCardinality) throw Error("field cardinality exceeds 2^20");
        }
        powp_.resize(k_);
        powp_[0] = 1;
        for (std::uint32_t i = 1; i < k_; ++i) powp_[i] = powp_[i - 1] * p_;

        if (modulus.empty()) {
            modulus_ = least_irreducible();
        } else {
            if (modulus.size() != k_ + 1 || modulus[k_] % p_ != 1)
                throw ReducibleModulus("modulus must be monic of degree k");
            for (auto& c : modulus) c %= p_;
            if (!fp_irreducible(modulus)) throw ReducibleModulus();
            modulus_ = std::move(modulus);
        }
        build_tables();
    }

    static bool is_prime(std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    // --- F_p[T] helpers used before log tables exist ----------------------

    using fpoly = std::vector<std::uint32_t>;  // constant term first, no trailing zeros

    static void fp_trim(fpoly& f) {
        while (!f.empty() && f.back() == 0) f.pop_back();
    }
    fpoly fp_mulmod(const fpoly& a, const fpoly& b, const fpoly& mod) const {
        fpoly r(a.size() + b.size(), 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                r[i + j] = (r[i + j] + a[i] * b[j]) % p_;
        fp_rem(r, mod);
        return r;
    }
    void fp_rem(fpoly& r, const fpoly& mod) const {
        fp_trim(r);
        std::uint32_t lc_inv = fp_inv_scalar(mod.back());
        while (r.size() >= mod.size()) {
            std::uint32_t c = (r.back() * lc_inv) % p_;
            std::size_t shift = r.size() - mod.size();
            for (std::size_t i = 0; i < mod.size(); ++i)
                r[shift + i] = (r[shift + i] + p_ * p_ - c * mod[i] % p_ + p_) % p_;
            fp_trim(r);
        }
    }
    std::uint32_t fp_inv_scalar(std::uint32_t a) const {
        std::uint32_t r = 1, b = a % p_, e = p_ - 2;
        while (e) {
            if (e & 1) r = r * b % p_;
            b = b * b % p_;
            e >>= 1;
        }
        return r;
    }
    fpoly fp_powmod(fpoly base, std::uint64_t e, const fpoly& mod) const {
        fpoly r{1};
        while (e) {
            if (e & 1) r = fp_mulmod(r, base, mod);
            base = fp_mulmod(base, base, mod);
            e >>= 1;
        }
        return r;
    }
    fpoly fp_gcd(fpoly a, fpoly b) const {
        fp_trim(a);
        fp_trim(b);
        while (!b.empty()) {
            fp_rem(a, b);
            std::swap(a, b);
        }
        return a;
    }

    bool fp_irreducible(const fpoly& f) const {
        std::uint32_t deg = std::uint32_t(f.size()) - 1;
        if (deg == 1) return true;
        // T^{p^i} mod f by iterated p-th powers
        fpoly t{0, 1};
        std::vector<fpoly> frob(deg + 1);
        frob[0] = t;
        for (std::uint32_t i = 1; i <= deg; ++i) frob[i] = fp_powmod(frob[i - 1], p_, f);
        // x^{p^deg} == x mod f
        fpoly diff = frob[deg];
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p_ - 1) % p_;
        fp_trim(diff);
        if (!diff.empty()) return false;
        // gcd(x^{p^{deg/l}} - x, f) == 1 for prime l | deg
        for (std::uint32_t l = 2; l <= deg; ++l) {
            if (deg % l != 0 || !is_prime(l)) continue;
            fpoly d = frob[deg / l];
            if (d.size() < 2) d.resize(2, 0);
            d[1] = (d[1] + p_ - 1) % p_;
            fp_trim(d);
            fpoly g = fp_gcd(d, f);
            if (g.size() != 1) return false;
        }
        return true;
    }

    std::vector<std::uint32_t> least_irreducible() const {
        // enumerate monic degree-k candidates in constant-term-first lex order
        for (std::uint64_t rank = 0; rank < q_; ++rank) {
            // rank digits in constant-term-first significance order
            fpoly f(k_ + 1, 0);
            std::uint64_t tmp = rank;
            for (std::uint32_t i = k_; i-- > 0;) {
                f[i] = tmp % p_;
                tmp /= p_;
            }
            f[k_] = 1;
            if (fp_irreducible(f)) return f;
        }
        throw Error("no irreducible modulus found");  // unreachable
    }

    // raw (table-free) field multiplication, used to bootstrap the tables
    code_t raw_mul(code_t a, code_t b) const {
        std::vector<std::uint32_t> prod(2 * k_ - 1, 0);
        for (std::uint32_t i = 0; i < k_; ++i) {
            std::uint32_t da = (a / powp_[i]) % p_;
            if (!da) continue;
            for (std::uint32_t j = 0; j < k_; ++j) {
                std::uint32_t db = (b / powp_[j]) % p_;
                prod[i + j] = (prod[i + j] + da * db) % p_;
            }
        }
        for (std::uint32_t d = 2 * k_ - 2; d >= k_ && d < 2 * k_; --d) {
            std::uint32_t c = prod[d];
            if (!c) continue;
            prod[d] = 0;
            for (std::uint32_t i = 0; i < k_; ++i)
                prod[d - k_ + i] = (prod[d - k_ + i] + (p_ - c * modulus_[i] % p_)) % p_;
        }
        code_t out = 0;
        for (std::uint32_t i = 0; i < k_; ++i) out += prod[i] * powp_[i];
        return out;
    }
    code_t raw_pow(code_t a, std::uint64_t e) const {
        code_t r = 1;
        while (e) {
            if (e & 1) r = raw_mul(r, a);
            a = raw_mul(a, a);
            e >>= 1;
        }
        return r;
    }

    void build_tables() {
        std::vector<std::uint64_t> prime_factors;
        std::uint64_t m = q_ - 1;
        for (std::uint64_t d = 2; d * d <= m; ++d)
            if (m % d == 0) {
                prime_factors.push_back(d);
                while (m % d == 0) m /= d;
            }
        if (m > 1) prime_factors.push_back(m);

        gen_ = 0;
        for (std::uint64_t rank = 1; rank < q_; ++rank) {
            code_t c = code_at_lex(rank);
            bool primitive = true;
            for (auto l : prime_factors)
                if (raw_pow(c, (q_ - 1) / l) == 1) {
                    primitive = false;
                    break;
                }
            if (primitive) {
                gen_ = c;
                break;
            }
        }
        exp_.resize(q_ - 1);
        log_.assign(q_, 0);
        code_t acc = 1;
        for (std::uint64_t i = 0; i < q_ - 1; ++i) {
            exp_[i] = acc;
            log_[acc] = std::uint32_t(i);
            acc = raw_mul(acc, gen_);
        }
    }

    std::uint32_t p_, k_;
    std::uint64_t q_;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> powp_;
    std::vector<code_t> exp_;
    std::vector<std::uint32_t> log_;
    code_t gen_ = 0;
};

using FieldRef = std::shared_ptr<const FieldCtx>;

/// One element of a FieldCtx.  Plain value type; operations on elements from
/// different contexts throw CtxMismatch.
class FFElem {
public:
    FFElem() : ctx_(nullptr), code_(0) {}
    FFElem(const FieldCtx* ctx, FieldCtx::code_t code) : ctx_(ctx), code_(code) {}
    FFElem(const FieldRef& ctx, FieldCtx::code_t code) : ctx_(ctx.get()), code_(code) {}

    const FieldCtx* ctx() const { return ctx_; }
    FieldCtx::code_t code() const { return code_; }
    bool is_zero() const { return code_ == 0; }

    FFElem operator+(const FFElem& o) const { return bin(o, &FieldCtx::add); }
    FFElem operator-(const FFElem& o) const { return bin(o, &FieldCtx::sub); }
    FFElem operator*(const FFElem& o) const { return bin(o, &FieldCtx::mul); }
    FFElem operator/(const FFElem& o) const {
        check(o);
        if (o.code_ == 0) throw DivisionByZero();
        return {ctx_, ctx_->div(code_, o.code_)};
    }
    FFElem operator-() const { return {ctx_, ctx_->neg(code_)}; }
    FFElem inv() const {
        if (code_ == 0) throw DivisionByZero();
        return {ctx_, ctx_->inv(code_)};
    }
    FFElem pow(std::int64_t e) const { return {ctx_, ctx_->pow(code_, e)}; }

    bool operator==(const FFElem& o) const { return ctx_ == o.ctx_ && code_ == o.code_; }
    bool operator!=(const FFElem& o) const { return !(*this == o); }

    /// Deterministic element order: coordinates compared lexicographically,
    /// constant term first.
    bool lex_less(const FFElem& o) const { return ctx_->lex_rank(code_) < o.ctx()->lex_rank(o.code_); }

    std::vector<std::uint32_t> coords() const { return ctx_->coords(code_); }

    /// Prime-field coefficient tuple, e.g. "(1,0,2)"; plain digits for k = 1.
    std::string str() const {
        if (ctx_->k() == 1) return std::to_string(code_);
        auto c = coords();
        std::string s = "(";
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(c[i]);
        }
        return s + ")";
    }
    /// Comma-free rendering for CSV cells: digits joined by ':'.
    std::string csv_str() const {
        if (ctx_->k() == 1) return std::to_string(code_);
        auto c = coords();
        std::string s;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (i) s += ":";
            s += std::to_string(c[i]);
        }
        return s;
    }

private:
    FFElem bin(const FFElem& o, FieldCtx::code_t (FieldCtx::*op)(FieldCtx::code_t, FieldCtx::code_t) const) const {
        check(o);
        return {ctx_, (ctx_->*op)(code_, o.code_)};
    }
    void check(const FFElem& o) const {
        if (ctx_ != o.ctx_) throw CtxMismatch();
    }

    const FieldCtx* ctx_;
    FieldCtx::code_t code_;
};

inline FFElem ff_zero(const FieldCtx* ctx) { return {ctx, 0}; }
inline FFElem ff_one(const FieldCtx* ctx) { return {ctx, 1}; }
/// Embeds a prime-field residue.
inline FFElem ff_int(const FieldCtx* ctx, std::int64_t v) {
    std::int64_t p = ctx->p();
    std::int64_t r = ((v % p) + p) % p;
    FFElem one = ff_one(ctx), acc = ff_zero(ctx);
    for (std::int64_t i = 0; i < r; ++i) acc = acc + one;
    return acc;
}

/// All elements in deterministic lex order.
inline std::vector<FFElem> all_elements(const FieldCtx* ctx) {
    std::vector<FFElem> v;
    v.reserve(ctx->q());
    for (std::uint64_t r = 0; r < ctx->q(); ++r) v.emplace_back(ctx, ctx->code_at_lex(r));
    return v;
}

namespace detail {
inline std::uint32_t subpower_exponent(const FieldCtx* ctx, std::uint64_t q_sub) {
    // q_sub = p^a with a | k, else NotSubpower
    std::uint64_t t = q_sub;
    std::uint32_t a = 0;
    while (t > 1) {
        if (t % ctx->p() != 0) throw NotSubpower();
        t /= ctx->p();
        ++a;
    }
    if (a == 0 || ctx->k() % a != 0) throw NotSubpower();
    return a;
}
}  // namespace detail

/// x -> x^q for q = p^a, a | k.
inline FFElem frobenius(const FFElem& x, std::uint64_t q_sub) {
    detail::subpower_exponent(x.ctx(), q_sub);
    return x.pow(std::int64_t(q_sub));
}

/// Trace from F_{q^n} down to F_q: sum of x^{q^i}, 0 <= i < n.
inline FFElem trace_to(const FFElem& x, std::uint64_t q_sub) {
    std::uint32_t a = detail::subpower_exponent(x.ctx(), q_sub);
    std::uint32_t n = x.ctx()->k() / a;
    FFElem acc = ff_zero(x.ctx()), t = x;
    for (std::uint32_t i = 0; i < n; ++i) {
        acc = acc + t;
        t = t.pow(std::int64_t(q_sub));
    }
    return acc;
}

/// Norm from F_{q^n} down to F_q: x^{(q^n-1)/(q-1)}, with N(0) = 0.
inline FFElem norm_to(const FFElem& x, std::uint64_t q_sub) {
    detail::subpower_exponent(x.ctx(), q_sub);
    if (x.is_zero()) return x;
    std::int64_t e = std::int64_t((x.ctx()->q() - 1) / (q_sub - 1));
    return x.pow(e);
}

inline bool in_subfield(const FFElem& x, std::uint64_t q_sub) {
    detail::subpower_exponent(x.ctx(), q_sub);
    return x.pow(std::int64_t(q_sub)) == x;
}

/// The q elements of F_q inside the ambient field, lex order.
inline std::vector<FFElem> subfield_members(const FieldCtx* ctx, std::uint64_t q_sub) {
    detail::subpower_exponent(ctx, q_sub);
    std::vector<FFElem> out;
    for (const auto& x : all_elements(ctx))
        if (x.pow(std::int64_t(q_sub)) == x) out.push_back(x);
    return out;
}

/// True iff x is an m-th power in its field (0 counts as a power).
inline bool is_kth_power(const FFElem& x, std::uint64_t m) {
    if (x.is_zero()) return true;
    std::uint64_t g = std::gcd(m, x.ctx()->q() - 1);
    return x.pow(std::int64_t((x.ctx()->q() - 1) / g)) == ff_one(x.ctx());
}

/// m-th power test relative to a subfield F_q (x assumed to lie in it).
inline bool is_kth_power_in_subfield(const FFElem& x, std::uint64_t m, std::uint64_t q_sub) {
    if (!in_subfield(x, q_sub)) throw NotSubfield();
    if (x.is_zero()) return true;
    std::uint64_t g = std::gcd(m, q_sub - 1);
    // ord(x) | q_sub - 1, so the prime-subgroup test applies verbatim
    return x.pow(std::int64_t((q_sub - 1) / g)) == ff_one(x.ctx());
}

/// Enumeration-least element that is not an m-th power.
inline FFElem find_non_kth_power(const FieldCtx* ctx, std::uint64_t m) {
    if (std::gcd(m, ctx->q() - 1) <= 1) throw AllPowers();
    for (const auto& x : all_elements(ctx))
        if (!is_kth_power(x, m)) return x;
    throw AllPowers();  // unreachable for gcd > 1
}

/// Least element of the subfield F_q that is not an m-th power within F_q.
inline FFElem find_non_kth_power_in_subfield(const FieldCtx* ctx, std::uint64_t q_sub, std::uint64_t m) {
    if (std::gcd(m, q_sub - 1) <= 1) throw AllPowers();
    for (const auto& x : subfield_members(ctx, q_sub))
        if (!is_kth_power_in_subfield(x, m, q_sub)) return x;
    throw AllPowers();
}

/// Deterministic embedding of a into the (larger) context `big`: maps the
/// generator of a's field to the lex-least root of a's modulus in `big`.
class FieldEmbedding {
public:
    FieldEmbedding(FieldRef small, FieldRef big) : small_(std::move(small)), big_(std::move(big)) {
        if (big_->p() != small_->p() || big_->k() % small_->k() != 0) throw NotSubfield();
        const auto& mod = small_->modulus();
        for (std::uint64_t r = 0; r < big_->q(); ++r) {
            FFElem x(big_.get(), big_->code_at_lex(r));
            FFElem acc = ff_zero(big_.get()), xp = ff_one(big_.get());
            for (std::size_t i = 0; i < mod.size(); ++i) {
                acc = acc + ff_int(big_.get(), mod[i]) * xp;
                xp = xp * x;
            }
            if (acc.is_zero()) {
                root_ = x;
                return;
            }
        }
        throw NotSubfield("modulus has no root in the big field");
    }

    FFElem operator()(const FFElem& a) const {
        if (a.ctx() != small_.get()) throw CtxMismatch();
        auto c = a.coords();
        FFElem acc = ff_zero(big_.get()), xp = ff_one(big_.get());
        for (auto d : c) {
            acc = acc + ff_int(big_.get(), d) * xp;
            xp = xp * root_;
        }
        return acc;
    }

    const FieldRef& big() const { return big_; }

private:
    FieldRef small_, big_;
    FFElem root_;
};

}  // namespace towerlab

#endif  // TOWERLAB_GF_HPP
