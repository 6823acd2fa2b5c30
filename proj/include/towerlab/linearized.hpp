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

#ifndef TOWERLAB_LINEARIZED_HPP
#define TOWERLAB_LINEARIZED_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "towerlab/poly.hpp"

namespace towerlab {

using Subgroup = std::vector<FFElem>;  // finite additive subgroup, lex-sorted

inline Subgroup sort_subgroup(Subgroup v) {
    std::sort(v.begin(), v.end(), [](const FFElem& a, const FFElem& b) { return a.lex_less(b); });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline void verify_subgroup(const Subgroup& v) {
    if (v.empty()) throw NotSubgroup("empty set");
    const FieldCtx* ctx = v.front().ctx();
    std::set<FieldCtx::code_t> codes;
    for (const auto& x : v) {
        if (x.ctx() != ctx) throw CtxMismatch();
        codes.insert(x.code());
    }
    if (!codes.count(0)) throw NotSubgroup("0 missing");
    for (const auto& a : v)
        for (const auto& b : v)
            if (!codes.count((a + b).code())) throw NotSubgroup();
}

/// L_V(T) = prod_{v in V} (T - v) for an additive subgroup V.  Additive as a
/// map; the expansion has nonzero terms only in degrees p^i.
class LinearizedPoly {
public:
    static LinearizedPoly from_subgroup(Subgroup v) {
        verify_subgroup(v);
        v = sort_subgroup(std::move(v));
        const FieldCtx* ctx = v.front().ctx();
        UPoly e = UPoly::constant(ff_one(ctx));
        for (const auto& x : v) e = e * (UPoly::x(ctx) - UPoly::constant(x));
        return LinearizedPoly(std::move(v), std::move(e));
    }
    /// Rebuilds from an expanded additive polynomial; the support is its
    /// root set (must form a subgroup, which holds iff the input is additive
    /// and splits over ctx).
    static LinearizedPoly from_expanded(const UPoly& e) {
        auto roots = poly_roots(e);
        if (std::uint64_t(roots.size()) != std::uint64_t(e.degree()))
            throw NotSubgroup("expanded polynomial does not split over the ambient field");
        auto L = from_subgroup(Subgroup(roots.begin(), roots.end()));
        if (L.expanded() != e.monic()) throw NotSubgroup("roots have multiplicity");
        return L;
    }

    const Subgroup& support() const { return support_; }
    const UPoly& expanded() const { return expanded_; }
    const FieldCtx* ctx() const { return expanded_.ctx(); }
    std::uint64_t size() const { return support_.size(); }

    FFElem apply(const FFElem& x) const { return expanded_.eval(x); }

    /// L applied to a polynomial argument: sum of a_i g^{p^i}.
    UPoly apply_poly(const UPoly& g) const {
        const FieldCtx* c = ctx();
        UPoly acc = UPoly::zero(c), gp = g;
        std::uint64_t d = 1;
        while (d <= std::uint64_t(expanded_.degree())) {
            FFElem a = expanded_.coeff(std::size_t(d));
            if (!a.is_zero()) acc = acc + gp * a;
            // advance g^{p^i} -> g^{p^{i+1}}
            UPoly next = gp;
            for (std::uint32_t j = 1; j < c->p(); ++j) next = next * gp;
            gp = next;
            d *= c->p();
        }
        return acc;
    }

    /// Image subgroup L(V2) of another subgroup.
    Subgroup image(const Subgroup& v2) const {
        Subgroup out;
        for (const auto& x : v2) out.push_back(apply(x));
        return sort_subgroup(std::move(out));
    }

private:
    LinearizedPoly(Subgroup v, UPoly e) : support_(std::move(v)), expanded_(std::move(e)) {}
    Subgroup support_;
    UPoly expanded_;
};

inline LinearizedPoly linearized_from_subgroup(const Subgroup& v) {
    return LinearizedPoly::from_subgroup(v);
}

/// All proper additive subgroups of V (including {0}), grown by closure BFS.
inline std::vector<Subgroup> proper_subgroups(const Subgroup& v_in) {
    Subgroup v = sort_subgroup(v_in);
    const FieldCtx* ctx = v.front().ctx();
    std::uint64_t cap = 1;
    for (int i = 0; i < 4; ++i) cap *= ctx->p();
    if (v.size() > cap) throw SearchTooLarge("|V| > p^4");

    std::set<std::vector<FieldCtx::code_t>> seen;
    std::vector<Subgroup> out, frontier;
    Subgroup zero{ff_zero(ctx)};
    frontier.push_back(zero);
    auto key = [](const Subgroup& s) {
        std::vector<FieldCtx::code_t> k;
        for (const auto& x : s) k.push_back(x.code());
        return k;
    };
    seen.insert(key(zero));
    out.push_back(zero);
    while (!frontier.empty()) {
        std::vector<Subgroup> next;
        for (const auto& w : frontier) {
            for (const auto& x : v) {
                if (std::find(w.begin(), w.end(), x) != w.end()) continue;
                // span of w and x: closure under addition
                std::set<FieldCtx::code_t> codes;
                for (const auto& y : w) codes.insert(y.code());
                FFElem mult = x;
                std::vector<FFElem> coset_reps{ff_zero(ctx)};
                for (std::uint32_t i = 1; i < ctx->p(); ++i) {
                    coset_reps.push_back(mult);
                    mult = mult + x;
                }
                Subgroup span;
                for (const auto& r : coset_reps)
                    for (const auto& y : w) span.push_back(y + r);
                span = sort_subgroup(std::move(span));
                if (span.size() >= v.size()) continue;  // proper only
                auto k = key(span);
                if (seen.insert(k).second) {
                    out.push_back(span);
                    next.push_back(span);
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

struct ImageVerdict {
    bool reducible = false;
    Subgroup w;   // witness subgroup, valid when reducible
    UPoly g;      // witness polynomial with f = L_{W'}(g)
};

namespace detail {

/// Solves f = L(g) for g of the exact degree deg(f)/deg(L), treating the map
/// as F_p-linear on coefficient vectors; Gaussian elimination over F_p.
inline std::optional<UPoly> solve_additive_preimage(const LinearizedPoly& L, const UPoly& f) {
    const FieldCtx* ctx = f.ctx();
    std::uint32_t p = ctx->p(), k = ctx->k();
    int E = L.expanded().degree();
    if (E <= 0) return std::nullopt;
    if (f.is_zero()) return UPoly::zero(ctx);
    if (f.degree() % E != 0) return std::nullopt;
    int D = f.degree() / E;

    std::size_t ncols = std::size_t(D + 1) * k;
    std::size_t nrows = std::size_t(f.degree() + 1) * k;
    std::vector<std::vector<std::uint32_t>> M(nrows, std::vector<std::uint32_t>(ncols + 1, 0));

    // column for unknown coordinate (j, t): image of theta^t x^j under L
    for (int j = 0; j <= D; ++j) {
        for (std::uint32_t t = 0; t < k; ++t) {
            std::vector<std::uint32_t> basis_coords(k, 0);
            basis_coords[t] = 1;
            FFElem theta_t(ctx, ctx->from_coords(basis_coords));
            std::uint64_t d = 1;
            int i = 0;
            while (d <= std::uint64_t(E)) {
                FFElem a = L.expanded().coeff(std::size_t(d));
                if (!a.is_zero()) {
                    // a * theta_t^{p^i} lands at degree j * p^i
                    std::int64_t pe = 1;
                    for (int s = 0; s < i; ++s) pe *= p;
                    FFElem val = a * theta_t.pow(pe);
                    std::uint64_t deg = std::uint64_t(j) * std::uint64_t(pe);
                    auto cc = val.coords();
                    for (std::uint32_t u = 0; u < k; ++u)
                        M[deg * k + u][std::size_t(j) * k + t] =
                            (M[deg * k + u][std::size_t(j) * k + t] + cc[u]) % p;
                }
                d *= p;
                ++i;
            }
        }
    }
    for (int deg = 0; deg <= f.degree(); ++deg) {
        auto cc = f.coeff(std::size_t(deg)).coords();
        for (std::uint32_t u = 0; u < k; ++u) M[std::size_t(deg) * k + u][ncols] = cc[u];
    }

    // row-reduce over F_p
    auto inv_mod = [p](std::uint32_t a) {
        std::uint32_t r = 1, b = a % p, e = p - 2;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    std::vector<int> pivot_col(nrows, -1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < ncols && rank < nrows; ++col) {
        std::size_t sel = nrows;
        for (std::size_t r = rank; r < nrows; ++r)
            if (M[r][col] % p) {
                sel = r;
                break;
            }
        if (sel == nrows) continue;
        std::swap(M[rank], M[sel]);
        std::uint32_t iv = inv_mod(M[rank][col]);
        for (auto& x : M[rank]) x = x * iv % p;
        for (std::size_t r = 0; r < nrows; ++r) {
            if (r == rank || M[r][col] % p == 0) continue;
            std::uint32_t c = M[r][col] % p;
            for (std::size_t cc2 = 0; cc2 <= ncols; ++cc2)
                M[r][cc2] = (M[r][cc2] + (p - c) * M[rank][cc2]) % p;
        }
        pivot_col[rank] = int(col);
        ++rank;
    }
    for (std::size_t r = rank; r < nrows; ++r)
        if (M[r][ncols] % p) return std::nullopt;  // inconsistent

    std::vector<std::uint32_t> sol(ncols, 0);
    for (std::size_t r = 0; r < rank; ++r) sol[std::size_t(pivot_col[r])] = M[r][ncols] % p;

    std::vector<FFElem> gc;
    for (int j = 0; j <= D; ++j) {
        std::vector<std::uint32_t> coords(k);
        for (std::uint32_t t = 0; t < k; ++t) coords[t] = sol[std::size_t(j) * k + t];
        gc.emplace_back(ctx, ctx->from_coords(coords));
    }
    UPoly g(ctx, std::move(gc));
    if (L.apply_poly(g) != f) return std::nullopt;  // free variables chosen badly cannot happen, but verify
    return g;
}

}  // namespace detail

/// Proposition-based reducibility of L_V(T) - f(x): reducible iff some proper
/// additive subgroup W of V admits g with f = L_{W'}(g), W' = L_W(V).
inline ImageVerdict is_linearized_image(const UPoly& f, const Subgroup& v) {
    verify_subgroup(v);
    if (sort_subgroup(v).size() == 1)  // L_V(T) = T, degree 1 in T
        return {false, {}, UPoly::zero(f.ctx())};
    for (const auto& w : proper_subgroups(v)) {
        auto Lw = LinearizedPoly::from_subgroup(w);
        auto Lwp = LinearizedPoly::from_subgroup(Lw.image(sort_subgroup(v)));
        auto g = detail::solve_additive_preimage(Lwp, f);
        if (g) return {true, w, *g};
    }
    return {false, {}, UPoly::zero(f.ctx())};
}

/// Largest degree with nonzero coefficient that is coprime to p.
inline std::optional<int> coprime_degree(const UPoly& f) {
    for (int d = f.degree(); d >= 1; --d)
        if (!f.coeff(std::size_t(d)).is_zero() && std::gcd(std::uint64_t(d), std::uint64_t(f.ctx()->p())) == 1)
            return d;
    return std::nullopt;
}

enum class SyntacticVerdict { Irreducible, Inconclusive };

/// One-sided criterion: L_V(T) - f(x) is irreducible when f has a coprime
/// term of degree d and no terms of degree d*p^i for i > 0.  Never claims
/// reducibility.
inline SyntacticVerdict corollary_irreducible(const UPoly& f, const Subgroup& v) {
    verify_subgroup(v);
    std::uint64_t p = f.ctx()->p();
    for (int d = f.degree(); d >= 1; --d) {
        if (f.coeff(std::size_t(d)).is_zero()) continue;
        if (std::gcd(std::uint64_t(d), p) != 1) continue;
        bool clean = true;
        for (std::uint64_t m = std::uint64_t(d) * p; m <= std::uint64_t(f.degree()); m *= p)
            if (!f.coeff(std::size_t(m)).is_zero()) {
                clean = false;
                break;
            }
        if (clean) return SyntacticVerdict::Irreducible;
    }
    return SyntacticVerdict::Inconclusive;
}

namespace detail {

// Bivariate polynomial in T with UPoly coefficients, index = T-degree.
using BiPoly = std::vector<UPoly>;

inline bool bipoly_is_zero(const BiPoly& b) {
    for (const auto& c : b)
        if (!c.is_zero()) return false;
    return true;
}

/// Exact division check of h by a divisor monic in T.
inline bool bipoly_divides(const BiPoly& div, BiPoly h) {
    int a = int(div.size()) - 1;
    while (int(h.size()) - 1 >= a) {
        UPoly lead = h.back();
        int shift = int(h.size()) - 1 - a;
        if (!lead.is_zero()) {
            for (int i = 0; i <= a; ++i) h[std::size_t(shift + i)] = h[std::size_t(shift + i)] - div[std::size_t(i)] * lead;
        }
        h.pop_back();
    }
    return bipoly_is_zero(h);
}

}  // namespace detail

/// Independent brute-force irreducibility oracle for L_V(T) - f(x): searches
/// exhaustively for a monic-in-T factor of T-degree a <= |V|/2 with x-degree
/// bounded coefficients.  Deliberately enumeration-only; shares no logic with
/// the proposition route.
inline bool bivariate_irreducible_bruteforce(const Subgroup& v, const UPoly& f) {
    verify_subgroup(v);
    const FieldCtx* ctx = f.ctx();
    auto L = LinearizedPoly::from_subgroup(v);
    int E = L.expanded().degree();
    int m = f.degree();
    if (m < 1) {
        // constant (or zero) f: the question is univariate
        UPoly u = L.expanded() - (f.is_zero() ? UPoly::zero(ctx) : UPoly::constant(f.coeff(0)));
        auto fac = factor_univariate(u);
        return fac.factors.size() == 1 && fac.factors[0].second == 1;
    }
    if (E == 1) return true;  // T - f(x) is linear in T
    if (std::uint64_t(E) * std::uint64_t(m) > 64) throw SearchTooLarge("degree budget exceeded");

    constexpr std::uint64_t kCandidateCap = 1ull << 22;

    // the full polynomial h = L_V(T) - f(x) as T-coefficients
    detail::BiPoly h(std::size_t(E) + 1, UPoly::zero(ctx));
    for (int d = 0; d <= E; ++d) {
        FFElem a = L.expanded().coeff(std::size_t(d));
        if (!a.is_zero()) h[std::size_t(d)] = UPoly::constant(a);
    }
    h[0] = h[0] - f;

    for (int a = 1; 2 * a <= E; ++a) {
        if (a == 1) {
            // linear factor T - r(x): requires E | m and deg r = m / E
            if (m % E != 0) continue;
            int dr = m / E;
            std::uint64_t count = 1;
            bool too_big = false;
            for (int i = 0; i <= dr; ++i) {
                count *= ctx->q();
                if (count > kCandidateCap) {
                    too_big = true;
                    break;
                }
            }
            if (too_big) throw SearchTooLarge("linear factor search");
            std::vector<std::uint64_t> idx(std::size_t(dr) + 1, 0);
            while (true) {
                std::vector<FFElem> rc;
                for (auto i : idx) rc.emplace_back(ctx, ctx->code_at_lex(i));
                UPoly r(ctx, std::move(rc));
                if (L.apply_poly(r) == f) return false;  // T - r divides
                // odometer
                std::size_t pos = 0;
                while (pos < idx.size() && ++idx[pos] == ctx->q()) idx[pos++] = 0;
                if (pos == idx.size()) break;
            }
        } else {
            // monic T^a + c_{a-1}(x) T^{a-1} + ... + c_0(x), deg_x c_j <= m
            std::uint64_t slots = std::uint64_t(a) * std::uint64_t(m + 1);
            std::uint64_t count = 1;
            for (std::uint64_t i = 0; i < slots; ++i) {
                count *= ctx->q();
                if (count > kCandidateCap) throw SearchTooLarge("factor tuple search");
            }
            std::vector<std::uint64_t> idx(slots, 0);
            while (true) {
                detail::BiPoly cand(std::size_t(a) + 1, UPoly::zero(ctx));
                for (int j = 0; j < a; ++j) {
                    std::vector<FFElem> cc;
                    for (int i = 0; i <= m; ++i)
                        cc.emplace_back(ctx, ctx->code_at_lex(idx[std::size_t(j) * std::size_t(m + 1) + std::size_t(i)]));
                    cand[std::size_t(j)] = UPoly(ctx, std::move(cc));
                }
                cand[std::size_t(a)] = UPoly::constant(ff_one(ctx));
                if (detail::bipoly_divides(cand, h)) return false;
                std::size_t pos = 0;
                while (pos < idx.size() && ++idx[pos] == ctx->q()) idx[pos++] = 0;
                if (pos == idx.size()) break;
            }
        }
    }
    return true;
}

}  // namespace towerlab

#endif  // TOWERLAB_LINEARIZED_HPP
