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

#ifndef TOWERLAB_SYMMETRY_HPP
#define TOWERLAB_SYMMETRY_HPP

#include <cstdint>
#include <numeric>
#include <vector>

#include "towerlab/multipoly.hpp"

namespace towerlab {

/// Syntactic fixedness under the cyclic variable shift (1 2 ... n).
inline bool is_quasi_symmetric(const MultiPoly& f) {
    std::vector<std::size_t> cyc(f.nvars());
    for (std::size_t i = 0; i < f.nvars(); ++i) cyc[i] = (i + 1) % f.nvars();
    return f.permute(cyc) == f;
}

/// Fixedness under all of S_n: the cycle plus one transposition generate.
inline bool is_symmetric(const MultiPoly& f) {
    if (!is_quasi_symmetric(f)) return false;
    if (f.nvars() < 2) return true;
    std::vector<std::size_t> tr(f.nvars());
    std::iota(tr.begin(), tr.end(), std::size_t(0));
    std::swap(tr[0], tr[1]);
    return f.permute(tr) == f;
}

/// A quasi-symmetric function in n variables together with its one-variable
/// specialization at (t, t^q, ..., t^{q^{n-1}}).
class NQFunction {
public:
    /// num/den must both be fixed by the cyclic shift.
    NQFunction(std::size_t n, std::uint64_t q, MultiPoly num, MultiPoly den)
        : n_(n), q_(q), num_(std::move(num)), den_(std::move(den)),
          specialized_(num_.specialize(q), den_.specialize(q)) {
        if (num_.nvars() != n_ || den_.nvars() != n_) throw InvalidParams("arity mismatch");
        if (!is_quasi_symmetric(num_) || !is_quasi_symmetric(den_))
            throw InvalidParams("source not quasi-symmetric");
        detail::subpower_exponent(num_.ctx(), q_);
    }
    NQFunction(std::size_t n, std::uint64_t q, const MultiPoly& num)
        : NQFunction(n, q, num, MultiPoly::constant(num.ctx(), num.nvars(), ff_one(num.ctx()))) {}

    std::size_t n() const { return n_; }
    std::uint64_t q() const { return q_; }
    const MultiPoly& num() const { return num_; }
    const MultiPoly& den() const { return den_; }
    const RatFunc& specialized() const { return specialized_; }
    const FieldCtx* ctx() const { return num_.ctx(); }

private:
    std::size_t n_;
    std::uint64_t q_;
    MultiPoly num_, den_;
    RatFunc specialized_;
};

/// Specialization of the i-th elementary symmetric polynomial in n variables,
/// hosted in the ambient field ctx = F_{q^n}.
inline NQFunction elementary_symmetric_nq(const FieldCtx* ctx, std::size_t n, std::uint64_t q,
                                          std::size_t i) {
    if (i < 1 || i > n) throw InvalidParams("need 1 <= i <= n");
    MultiPoly e(ctx, n);
    // all i-subsets of {0..n-1}
    std::vector<std::size_t> idx(i);
    std::iota(idx.begin(), idx.end(), std::size_t(0));
    while (true) {
        MultiPoly::Exp exp(n, 0);
        for (auto j : idx) exp[j] = 1;
        e.add_term(exp, ff_one(ctx));
        // next combination
        std::size_t pos = i;
        while (pos > 0 && idx[pos - 1] == n - i + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t s = pos; s < i; ++s) idx[s] = idx[s - 1] + 1;
    }
    return NQFunction(n, q, std::move(e));
}

/// The three-variable quasi-symmetric family x1 x2^i + x2 x3^i + x3 x1^i,
/// specializing to t^{1+iq} + t^{q+iq^2} + t^{q^2+i}.
inline NQFunction qs_three_var_family(const FieldCtx* ctx, std::uint32_t i, std::uint64_t q) {
    MultiPoly f(ctx, 3);
    f.add_term({1, i, 0}, ff_one(ctx));
    f.add_term({0, 1, i}, ff_one(ctx));
    f.add_term({i, 0, 1}, ff_one(ctx));
    return NQFunction(3, q, std::move(f));
}

/// True iff every non-pole value of the specialization over the full ambient
/// field lies in the subfield F_q.  Exhaustive.
inline bool subfield_valued_check(const NQFunction& f) {
    const FieldCtx* ctx = f.ctx();
    for (const auto& t : all_elements(ctx)) {
        auto v = f.specialized().eval(t);
        if (v && !in_subfield(*v, f.q())) return false;
    }
    return true;
}

/// Composition i_poly(inner(t)) for i_poly with F_q coefficients and no F_q
/// roots; the result has no zeros on F_{q^n} when inner is subfield-valued.
inline NQFunction compose_no_zeros(const UPoly& i_poly, const NQFunction& inner) {
    const FieldCtx* ctx = inner.ctx();
    if (i_poly.ctx() != ctx) throw CtxMismatch();
    for (const auto& c : i_poly.coeffs())
        if (!in_subfield(c, inner.q())) throw InvalidParams("i_poly coefficients not in F_q");
    for (const auto& a : subfield_members(ctx, inner.q()))
        if (i_poly.eval(a).is_zero()) throw HasSubfieldRoot();
    if (!subfield_valued_check(inner)) throw InvalidParams("inner not subfield-valued");

    // source composition: i_poly applied to num/den as a fraction
    // i_poly(u/v) = sum c_j u^j v^{d-j} / v^d
    std::uint32_t d = std::uint32_t(i_poly.degree());
    MultiPoly num(ctx, inner.n());
    for (std::uint32_t j = 0; j <= d; ++j) {
        FFElem c = i_poly.coeff(j);
        if (c.is_zero()) continue;
        num = num + inner.num().pow(j) * inner.den().pow(d - j) * c;
    }
    return NQFunction(inner.n(), inner.q(), std::move(num), inner.den().pow(d));
}

}  // namespace towerlab

#endif  // TOWERLAB_SYMMETRY_HPP
