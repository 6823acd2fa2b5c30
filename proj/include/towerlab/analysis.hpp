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

#ifndef TOWERLAB_ANALYSIS_HPP
#define TOWERLAB_ANALYSIS_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "towerlab/tower.hpp"

namespace towerlab {

// ---------------------------------------------------------------------------
// brute-force point enumeration
// ---------------------------------------------------------------------------

namespace detail {

constexpr std::uint64_t kEnumWorkCap = 10'000'000;
constexpr std::size_t kEngineCap = 100'000;

/// roots[w.code] = all y with lhs(y) = w (AS) or y^k = w (Kummer).
inline std::vector<std::vector<FFElem>> step_root_buckets(const StepSpec& step,
                                                          const FieldCtx* ctx) {
    std::vector<std::vector<FFElem>> buckets(std::size_t(ctx->q()));
    for (const auto& y : all_elements(ctx)) {
        FFElem w = step.kind == StepKind::ArtinSchreier ? step.lhs->apply(y)
                                                        : y.pow(std::int64_t(step.k));
        buckets[std::size_t(w.code())].push_back(y);
    }
    return buckets;
}

inline void check_enum_scale(const TowerSpec& spec, int depth) {
    std::uint64_t work = spec.ctx->q();
    for (int l = 1; l < depth; ++l) {
        work *= spec.step_for(l).degree();
        if (work > kEnumWorkCap) throw ScaleExceeded("affine enumeration budget exceeded");
    }
}

/// Value of the last generator at a degree-one place, when finite.
inline std::optional<FFElem> place_value(const LocalPlace& pl) {
    const Laurent& g = pl.gens.back();
    if (g.window_empty()) return ff_zero(pl.gens.back().ctx());
    if (g.val() < 0) return std::nullopt;
    if (g.val() > 0) return ff_zero(g.ctx());
    return g.at(0);
}

}  // namespace detail

/// All tuples (a_1, ..., a_j) satisfying every step equation with no rhs
/// pole along the way.
inline std::vector<std::vector<FFElem>> enumerate_affine_points(const TowerSpec& spec,
                                                                int depth) {
    if (depth < 1) throw InvalidParams("depth >= 1 required");
    detail::check_enum_scale(spec, depth);
    const FieldCtx* ctx = spec.ctx.get();
    std::vector<std::vector<FFElem>> frontier;
    for (const auto& a : all_elements(ctx)) frontier.push_back({a});
    for (int l = 1; l < depth; ++l) {
        const StepSpec& step = spec.step_for(l);
        auto buckets = detail::step_root_buckets(step, ctx);
        std::vector<std::vector<FFElem>> next;
        for (const auto& tup : frontier) {
            auto w = step.rhs.eval(tup.back());
            if (!w) continue;  // pole: the branch leaves the affine chart
            for (const auto& y : buckets[std::size_t(w->code())]) {
                next.push_back(tup);
                next.back().push_back(y);
            }
        }
        frontier = std::move(next);
    }
    return frontier;
}

// ---------------------------------------------------------------------------
// rational place counting and per-fiber cross-checks
// ---------------------------------------------------------------------------

struct LevelCount {
    int level;
    std::uint64_t affine;
    std::uint64_t infinite;  // degree-one places on chains outside the affine chart
    std::uint64_t total;
};

struct FiberReport {
    bool at_infinity;
    FFElem alpha;               // level-1 coordinate when finite
    std::uint64_t predicted;    // classifier-validated engine walk
    std::uint64_t enumerated;   // affine tuples plus engine-only chains
    bool classifier_agreed;     // per-node branch data matched the classifier
    bool ok;
};

struct SplittingReport {
    std::vector<LevelCount> levels;
    std::vector<FiberReport> fibers;
    bool all_ok = true;
};

namespace detail {

/// Walks a tuple to its degree-one places: at each level the engine branch
/// whose generator value matches the next coordinate is followed.  Several
/// matches can occur when a ramified step branches over the same value.
inline std::vector<LocalPlace> walk_tuple(const TowerSpec& spec,
                                          const std::vector<FFElem>& tup, int prec) {
    std::vector<LocalPlace> cur{start_place_finite(tup[0], prec)};
    for (std::size_t l = 1; l < tup.size(); ++l) {
        std::vector<LocalPlace> next;
        for (const auto& pl : cur) {
            LiftResult lifted = lift_local_place(spec.step_for(int(l)), pl, prec);
            for (auto& child : lifted.deg1) {
                auto v = place_value(child);
                if (v && *v == tup[l]) next.push_back(std::move(child));
            }
        }
        cur = std::move(next);
    }
    return cur;
}

struct CountState {
    std::vector<std::uint64_t> affine;                 // 1-based by level
    std::vector<std::vector<LocalPlace>> nonaffine;    // engine-only places
};

/// Core walker shared by counting and fiber reports.  Starts from a set of
/// seed tuples (single coordinates) and/or seed engine places at level 1.
inline CountState walk_levels(const TowerSpec& spec, int depth,
                              std::vector<std::vector<FFElem>> frontier,
                              std::vector<LocalPlace> seeds, int prec) {
    const FieldCtx* ctx = spec.ctx.get();
    CountState st;
    st.affine.assign(std::size_t(depth) + 1, 0);
    st.nonaffine.assign(std::size_t(depth) + 1, {});
    st.affine[1] = frontier.size();
    st.nonaffine[1] = std::move(seeds);
    for (int l = 1; l < depth; ++l) {
        const StepSpec& step = spec.step_for(l);
        auto buckets = detail::step_root_buckets(step, ctx);
        std::vector<std::vector<FFElem>> next;
        for (const auto& tup : frontier) {
            auto w = step.rhs.eval(tup.back());
            if (!w) {
                // pole: the chain continues outside the affine chart
                for (const auto& pl : walk_tuple(spec, tup, prec)) {
                    LiftResult lifted = lift_local_place(step, pl, prec);
                    for (auto& child : lifted.deg1)
                        st.nonaffine[std::size_t(l) + 1].push_back(std::move(child));
                }
                continue;
            }
            for (const auto& y : buckets[std::size_t(w->code())]) {
                next.push_back(tup);
                next.back().push_back(y);
            }
        }
        for (const auto& pl : st.nonaffine[std::size_t(l)]) {
            LiftResult lifted = lift_local_place(step, pl, prec);
            for (auto& child : lifted.deg1)
                st.nonaffine[std::size_t(l) + 1].push_back(std::move(child));
        }
        if (st.nonaffine[std::size_t(l) + 1].size() > kEngineCap)
            throw ScaleExceeded("engine chain budget exceeded");
        frontier = std::move(next);
        st.affine[std::size_t(l) + 1] = frontier.size();
    }
    return st;
}

/// Expected branch data per the classifier, in the engine's sorted order.
inline std::vector<Branch> classifier_branches(const PlaceClass& cls, std::uint64_t step_deg) {
    std::vector<Branch> out;
    switch (cls.kind) {
        case PlaceClass::Split:
            out.assign(std::size_t(cls.count), Branch{1, 1, 0});
            break;
        case PlaceClass::TotallyRamified:
            out.push_back({1, cls.e, cls.d});
            break;
        case PlaceClass::Branches:
            out = cls.branches;
            break;
    }
    std::sort(out.begin(), out.end());
    (void)step_deg;
    return out;
}

/// Engine walk from one level-1 place; every node's branch data must match
/// the classifier's prediction from (valuation, residue) alone.
inline std::pair<std::uint64_t, bool> predicted_fiber(const TowerSpec& spec, int depth,
                                                      LocalPlace seed, int prec) {
    bool agreed = true;
    std::vector<LocalPlace> cur{std::move(seed)};
    for (int l = 1; l < depth; ++l) {
        const StepSpec& step = spec.step_for(l);
        std::vector<LocalPlace> next;
        for (const auto& pl : cur) {
            LiftResult lifted = lift_local_place(step, pl, prec);
            PlaceClass cls = step.kind == StepKind::ArtinSchreier
                                 ? classify_as_place(step, lifted.input, spec.q)
                                 : classify_kummer_place(step, lifted.input);
            if (classifier_branches(cls, step.degree()) != lifted.all) agreed = false;
            for (auto& child : lifted.deg1) next.push_back(std::move(child));
        }
        cur = std::move(next);
        if (cur.size() > kEngineCap) throw ScaleExceeded("engine chain budget exceeded");
    }
    return {cur.size(), agreed};
}

}  // namespace detail

/// Level-by-level degree-one place counts: affine tuples plus engine chains
/// (P_inf and pole-terminated branches).
inline SplittingReport count_rational_places(const TowerSpec& spec, int depth) {
    if (depth < 1) throw InvalidParams("depth >= 1 required");
    detail::check_enum_scale(spec, depth);
    const FieldCtx* ctx = spec.ctx.get();
    return with_precision_retry([&](int prec) {
        std::vector<std::vector<FFElem>> frontier;
        for (const auto& a : all_elements(ctx)) frontier.push_back({a});
        auto st = detail::walk_levels(spec, depth, std::move(frontier),
                                      {start_place_infinity(ctx, prec)}, prec);
        SplittingReport rep;
        for (int l = 1; l <= depth; ++l) {
            std::uint64_t inf = st.nonaffine[std::size_t(l)].size();
            rep.levels.push_back({l, st.affine[std::size_t(l)], inf,
                                  st.affine[std::size_t(l)] + inf});
        }
        return rep;
    });
}

/// Per level-1 place: classifier-validated fiber size vs brute-force
/// enumeration, with zero tolerance.
inline SplittingReport splitting_report(const TowerSpec& spec, int depth) {
    SplittingReport rep = count_rational_places(spec, depth);
    const FieldCtx* ctx = spec.ctx.get();
    with_precision_retry([&](int prec) {
        rep.fibers.clear();
        rep.all_ok = true;
        for (const auto& alpha : all_elements(ctx)) {
            auto st = detail::walk_levels(spec, depth, {{alpha}}, {}, prec);
            std::uint64_t enumerated =
                st.affine[std::size_t(depth)] + st.nonaffine[std::size_t(depth)].size();
            auto [predicted, agreed] =
                detail::predicted_fiber(spec, depth, start_place_finite(alpha, prec), prec);
            bool ok = agreed && predicted == enumerated;
            rep.fibers.push_back({false, alpha, predicted, enumerated, agreed, ok});
            rep.all_ok = rep.all_ok && ok;
        }
        auto st = detail::walk_levels(spec, depth, {}, {start_place_infinity(ctx, prec)}, prec);
        auto [predicted, agreed] =
            detail::predicted_fiber(spec, depth, start_place_infinity(ctx, prec), prec);
        std::uint64_t enumerated = st.nonaffine[std::size_t(depth)].size();
        bool ok = agreed && predicted == enumerated;
        rep.fibers.push_back({true, ff_zero(ctx), predicted, enumerated, agreed, ok});
        rep.all_ok = rep.all_ok && ok;
        return 0;
    });
    return rep;
}

// ---------------------------------------------------------------------------
// genus: exact level-2 Hurwitz and the closed-form family bounds
// ---------------------------------------------------------------------------

struct GenusReport {
    int level;
    std::int64_t degdiff;
    std::int64_t exact_genus;
};

/// Exact genus of the degree-E cover of the rational function field defined
/// by the first step, from 2g - 2 = E(-2) + degDiff.
inline GenusReport genus_level2_exact(const TowerSpec& spec) {
    const StepSpec& step = spec.step_for(1);
    const FieldCtx* ctx = spec.ctx.get();
    std::int64_t p = ctx->p();
    std::int64_t E = std::int64_t(step.degree());
    auto vals = detail::level1_valuations(step.rhs);
    std::vector<std::pair<int, int>> places = vals.finite;
    places.emplace_back(vals.vinf, 1);

    std::int64_t degdiff = 0;
    if (step.kind == StepKind::ArtinSchreier) {
        for (const auto& [v, degp] : places) {
            if (v >= 0) continue;
            std::int64_t m = -v;
            if (m % p == 0) throw WildUnreduced("pole order divisible by p");
            degdiff += std::int64_t(degp) * (E - 1) * (m + 1);
        }
    } else {
        std::int64_t k = std::int64_t(step.k);
        if (k % p == 0) throw WildUnreduced("Kummer exponent divisible by p");
        for (const auto& [v, degp] : places) {
            std::int64_t d = v == 0 ? k : std::gcd(k, std::int64_t(std::abs(v)));
            degdiff += std::int64_t(degp) * (k - d);
        }
    }
    std::int64_t twog2 = E * (-2) + degdiff;
    if (twog2 % 2 != 0) throw NonIntegralGenus("2g - 2 odd");
    std::int64_t g = twog2 / 2 + 1;
    if (g < 0) throw NonIntegralGenus("negative genus");
    return GenusReport{2, degdiff, g};
}

/// g(T_j) < (q - 2)(k^{j-1} - 1)/2 for family A over F_q, k the Kummer degree.
inline double genus_bound_family_a(std::uint64_t q, std::uint64_t k, int j) {
    if (j < 1) throw InvalidParams("level >= 1 required");
    double kpow = std::pow(double(k), j - 1);
    return double(q - 2) * (kpow - 1.0) / 2.0;
}

/// degDiff(T_j/T_1) bounds: the exact telescoped sum q(k-1)(1 + k + ... +
/// k^{j-2}) and the closed form q(k^{j-1} - 1).
inline std::pair<std::uint64_t, std::uint64_t> degdiff_bound_family_a(std::uint64_t q,
                                                                      std::uint64_t k, int j) {
    if (j < 2) throw InvalidParams("level >= 2 required");
    std::uint64_t geom = 0, kp = 1;
    for (int t = 0; t <= j - 2; ++t) {
        geom += kp;
        kp *= k;
    }
    return {q * (k - 1) * geom, q * (kp - 1)};
}

inline double lambda_bound_family_a(std::uint64_t q) {
    if (q <= 2) throw InvalidParams("q > 2 required");
    return 2.0 / double(q - 2);
}
inline double lambda_bound_family_b(std::uint64_t l) {
    if (l <= 1) throw InvalidParams("l > 1 required");
    return 2.0 / double(l - 1);
}

/// sqrt(q) - 1; q must be a prime power >= 2.
inline double dv_bound(std::uint64_t q) {
    if (q < 2) throw InvalidParams("q must be a prime power >= 2");
    std::uint64_t t = q;
    std::uint64_t p = 2;
    while (p * p <= t && t % p != 0) ++p;
    if (p * p > t) p = t;  // q itself prime
    while (t > 1) {
        if (t % p != 0) throw InvalidParams("q must be a prime power");
        t /= p;
    }
    return std::sqrt(double(q)) - 1.0;
}

// ---------------------------------------------------------------------------
// zeta-function genus oracle
// ---------------------------------------------------------------------------

namespace detail {

/// The tower's defining data re-read over the degree-s constant extension.
inline TowerSpec extend_constants(const TowerSpec& spec, std::uint32_t s) {
    FieldRef big = FieldCtx::make(spec.ctx->p(), spec.ctx->k() * s);
    FieldEmbedding emb(spec.ctx, big);
    auto map_poly = [&](const UPoly& f) {
        std::vector<FFElem> c;
        for (const auto& a : f.coeffs()) c.push_back(emb(a));
        return UPoly(big.get(), std::move(c));
    };
    TowerSpec out;
    out.ctx = big;
    out.q = spec.q;
    out.n = spec.n;
    out.label = spec.label;
    for (const auto& step : spec.steps) {
        StepSpec ns = step;
        ns.rhs = RatFunc(map_poly(step.rhs.num()), map_poly(step.rhs.den()));
        if (step.lhs) ns.lhs = LinearizedPoly::from_expanded(map_poly(step.lhs->expanded()));
        out.steps.push_back(std::move(ns));
    }
    return out;
}

}  // namespace detail

/// Independent genus of the level-`level` curve: fits the L-polynomial of
/// degree 2g to point counts over constant extensions s = 1..2G, enforcing
/// Newton's identities and the functional equation.
inline std::int64_t zeta_genus_oracle(const TowerSpec& spec, int level = 2, int max_genus = 3) {
    const int G = max_genus;
    std::uint64_t Q = spec.ctx->q();
    double work = std::pow(double(Q), 2.0 * G);
    for (int l = 1; l < level; ++l) work *= double(spec.step_for(l).degree());
    if (work > 1e8) throw ScaleExceeded("zeta oracle extension budget exceeded");

    std::vector<std::int64_t> N(std::size_t(2 * G) + 1, 0), ps(std::size_t(2 * G) + 1, 0);
    for (int s = 1; s <= 2 * G; ++s) {
        TowerSpec ext = detail::extend_constants(spec, std::uint32_t(s));
        N[std::size_t(s)] =
            std::int64_t(count_rational_places(ext, level).levels[std::size_t(level) - 1].total);
        std::int64_t Qs = 1;
        for (int t = 0; t < s; ++t) Qs *= std::int64_t(Q);
        ps[std::size_t(s)] = Qs + 1 - N[std::size_t(s)];
    }

    for (std::int64_t g = 0; g <= G; ++g) {
        // e_1..e_g from Newton's identities, then the functional equation
        std::vector<std::int64_t> e(std::size_t(2 * g) + 1, 0);
        e[0] = 1;
        bool feasible = true;
        for (std::int64_t i = 1; i <= g && feasible; ++i) {
            std::int64_t s = 0, sign = 1;
            for (std::int64_t t = 0; t < i; ++t, sign = -sign)
                s += sign * e[std::size_t(t)] * ps[std::size_t(i - t)];
            // Newton: s + (-1)^i i e_i = 0
            std::int64_t rhs = (i % 2 == 0) ? -s : s;
            if (rhs % i != 0) feasible = false;
            else e[std::size_t(i)] = rhs / i;
        }
        if (!feasible) continue;
        std::int64_t Qg = 1;
        for (std::int64_t i = 0; i < g; ++i) {
            e[std::size_t(2 * g - i)] = e[std::size_t(i)];
            for (std::int64_t t = 0; t < g - i; ++t) e[std::size_t(2 * g - i)] *= std::int64_t(Q);
        }
        (void)Qg;
        // predicted power sums for the verification range
        bool match = true;
        for (std::int64_t s = g + 1; s <= 2 * G && match; ++s) {
            std::int64_t pred = 0, sign = 1;
            for (std::int64_t t = 1; t <= std::min<std::int64_t>(s - 1, 2 * g); ++t, sign = -sign)
                pred += sign * e[std::size_t(t)] * ps[std::size_t(s - t)];
            if (s <= 2 * g) pred += ((s % 2 == 0) ? -1 : 1) * s * e[std::size_t(s)];
            if (pred != ps[std::size_t(s)]) match = false;
        }
        if (match) return g;
    }
    throw NoConsistentGenus();
}

// ---------------------------------------------------------------------------
// ratio reports and CSV emission
// ---------------------------------------------------------------------------

struct RatioRow {
    int j;
    std::uint64_t affine, infinite, total;
    std::string genus_kind;  // "exact", "bound", or "none"
    double genus_value = 0.0;
    bool has_ratio = false;
    double ratio = 0.0;
    bool has_lambda = false;
    double lambda = 0.0;
    double dv = 0.0;
};

/// Per-level N, best available genus information, and N/g ratios.  Family
/// parameters, when given, supply the closed-form bounds past level 2.
inline std::vector<RatioRow> ratio_report(const TowerSpec& spec, int depth,
                                          const FamilyParams* fp = nullptr) {
    SplittingReport counts = count_rational_places(spec, depth);
    std::uint64_t Q = spec.ctx->q();
    double dv = dv_bound(Q);
    std::vector<RatioRow> rows;
    for (const auto& lc : counts.levels) {
        RatioRow row;
        row.j = lc.level;
        row.affine = lc.affine;
        row.infinite = lc.infinite;
        row.total = lc.total;
        row.dv = dv;
        if (lc.level == 1) {
            row.genus_kind = "exact";
            row.genus_value = 0.0;
        } else if (lc.level == 2) {
            row.genus_kind = "exact";
            row.genus_value = double(genus_level2_exact(spec).exact_genus);
        } else if (fp && fp->family == 'A') {
            row.genus_kind = "bound";
            row.genus_value = genus_bound_family_a(Q, fp->k(), lc.level);
        } else {
            row.genus_kind = "none";
        }
        if (row.genus_kind != "none" && row.genus_value > 0.0) {
            row.has_ratio = true;
            row.ratio = double(row.total) / row.genus_value;
        }
        if (fp) {
            row.has_lambda = true;
            row.lambda = fp->family == 'A' ? lambda_bound_family_a(Q)
                                           : lambda_bound_family_b(fp->k());
        }
        rows.push_back(row);
    }
    return rows;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace detail

inline std::string census_csv_header() {
    return "j,N_affine,N_infinite,N_total,genus_kind,genus_value,ratio,lambda_bound,dv_bound";
}

inline std::string census_csv_row(const RatioRow& r) {
    std::string out;
    out += std::to_string(r.j) + ",";
    out += std::to_string(r.affine) + ",";
    out += std::to_string(r.infinite) + ",";
    out += std::to_string(r.total) + ",";
    out += r.genus_kind + ",";
    out += (r.genus_kind == "none" ? "" : detail::fmt_double(r.genus_value)) + std::string(",");
    out += (r.has_ratio ? detail::fmt_double(r.ratio) : "") + std::string(",");
    out += (r.has_lambda ? detail::fmt_double(r.lambda) : "") + std::string(",");
    out += detail::fmt_double(r.dv);
    return out;
}

}  // namespace towerlab

#endif  // TOWERLAB_ANALYSIS_HPP
