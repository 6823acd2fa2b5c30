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

#ifndef TOWERLAB_MULTIPOLY_HPP
#define TOWERLAB_MULTIPOLY_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "towerlab/poly.hpp"

namespace towerlab {

/// Sparse multivariate polynomial: exponent vector -> nonzero coefficient.
class MultiPoly {
public:
    using Exp = std::vector<std::uint32_t>;

    MultiPoly(const FieldCtx* ctx, std::size_t nvars) : ctx_(ctx), nvars_(nvars) {}

    static MultiPoly constant(const FieldCtx* ctx, std::size_t nvars, const FFElem& c) {
        MultiPoly m(ctx, nvars);
        m.add_term(Exp(nvars, 0), c);
        return m;
    }
    static MultiPoly variable(const FieldCtx* ctx, std::size_t nvars, std::size_t j) {
        MultiPoly m(ctx, nvars);
        Exp e(nvars, 0);
        e[j] = 1;
        m.add_term(e, ff_one(ctx));
        return m;
    }

    const FieldCtx* ctx() const { return ctx_; }
    std::size_t nvars() const { return nvars_; }
    const std::map<Exp, FFElem>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exp& e, const FFElem& c) {
        if (e.size() != nvars_) throw Error("exponent vector length mismatch");
        if (c.ctx() != ctx_) throw CtxMismatch();
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(e, c);
        } else {
            FFElem s = it->second + c;
            if (s.is_zero())
                terms_.erase(it);
            else
                it->second = s;
        }
    }

    MultiPoly operator+(const MultiPoly& o) const {
        check(o);
        MultiPoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }
    MultiPoly operator-(const MultiPoly& o) const {
        check(o);
        MultiPoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }
    MultiPoly operator*(const MultiPoly& o) const {
        check(o);
        MultiPoly r(ctx_, nvars_);
        for (const auto& [e1, c1] : terms_)
            for (const auto& [e2, c2] : o.terms_) {
                Exp e(nvars_);
                for (std::size_t i = 0; i < nvars_; ++i) e[i] = e1[i] + e2[i];
                r.add_term(e, c1 * c2);
            }
        return r;
    }
    MultiPoly operator*(const FFElem& s) const {
        MultiPoly r(ctx_, nvars_);
        for (const auto& [e, c] : terms_) r.add_term(e, c * s);
        return r;
    }
    MultiPoly pow(std::uint32_t e) const {
        MultiPoly r = constant(ctx_, nvars_, ff_one(ctx_));
        MultiPoly b = *this;
        while (e) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
    bool operator==(const MultiPoly& o) const {
        return ctx_ == o.ctx_ && nvars_ == o.nvars_ && terms_ == o.terms_;
    }

    /// Image under a permutation of variables: x_j -> x_{perm[j]}.
    MultiPoly permute(const std::vector<std::size_t>& perm) const {
        MultiPoly r(ctx_, nvars_);
        for (const auto& [e, c] : terms_) {
            Exp ne(nvars_, 0);
            for (std::size_t i = 0; i < nvars_; ++i) ne[perm[i]] = e[i];
            r.add_term(ne, c);
        }
        return r;
    }

    FFElem eval(const std::vector<FFElem>& point) const {
        if (point.size() != nvars_) throw Error("evaluation arity mismatch");
        FFElem acc = ff_zero(ctx_);
        for (const auto& [e, c] : terms_) {
            FFElem t = c;
            for (std::size_t i = 0; i < nvars_; ++i) t = t * point[i].pow(std::int64_t(e[i]));
            acc = acc + t;
        }
        return acc;
    }

    /// Substitution x_j = t^{q^{j-1}} as a univariate polynomial in t.
    UPoly specialize(std::uint64_t q) const {
        std::map<std::uint64_t, FFElem> out;
        for (const auto& [e, c] : terms_) {
            std::uint64_t deg = 0, qp = 1;
            for (std::size_t i = 0; i < nvars_; ++i) {
                deg += std::uint64_t(e[i]) * qp;
                qp *= q;
            }
            auto it = out.find(deg);
            if (it == out.end())
                out.emplace(deg, c);
            else
                it->second = it->second + c;
        }
        std::uint64_t top = 0;
        for (const auto& [d, c] : out)
            if (!c.is_zero()) top = std::max(top, d);
        std::vector<FFElem> coeffs(std::size_t(top) + 1, ff_zero(ctx_));
        for (const auto& [d, c] : out)
            if (!c.is_zero()) coeffs[std::size_t(d)] = c;
        return UPoly(ctx_, std::move(coeffs));
    }

private:
    void check(const MultiPoly& o) const {
        if (ctx_ != o.ctx_ || nvars_ != o.nvars_) throw CtxMismatch();
    }

    const FieldCtx* ctx_;
    std::size_t nvars_;
    std::map<Exp, FFElem> terms_;
};

}  // namespace towerlab

#endif  // TOWERLAB_MULTIPOLY_HPP
