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

#include <catch2/catch_amalgamated.hpp>

#include "towerlab/tower.hpp"

using namespace towerlab;

namespace {

constexpr int kPrec = 32;

/// The defining equation must hold on the tracked window of the expansion.
void require_step_satisfied(const StepSpec& step, const Laurent& x, const Laurent& y) {
    Laurent rhs = eval_ratfunc_at(step.rhs, x, kPrec);
    Laurent lhs = step.kind == StepKind::Kummer ? y.pow(int(step.k))
                                                : eval_poly_at(step.lhs->expanded(), y, kPrec);
    REQUIRE((lhs - rhs).window_empty());
}

FamilyParams family_a_f4() {
    FieldRef f4 = FieldCtx::make(2, 2);
    FFElem one = ff_one(f4.get());
    return FamilyParams{'A', 2, 2, 1, f4, {one}, {one}, {1}};
}

}  // namespace

TEST_CASE("laurent arithmetic and window accounting", "[laurent]") {
    FieldRef f5 = FieldCtx::make(5, 1);
    const FieldCtx* F = f5.get();

    SECTION("geometric series inverse") {
        // (1 - sigma)^{-1} = 1 + sigma + sigma^2 + ...
        std::vector<FFElem> c(8, ff_zero(F));
        c[0] = ff_one(F);
        c[1] = -ff_one(F);
        Laurent g = Laurent(F, 0, c).inverse();
        for (int e = 0; e < 8; ++e) REQUIRE(g.at(e) == ff_one(F));
        REQUIRE((g * Laurent(F, 0, c) - Laurent::monomial(ff_one(F), 0, 8)).window_empty());
    }
    SECTION("empty window throws on valuation") {
        Laurent z = Laurent::zero_known_below(F, 10);
        REQUIRE(z.window_empty());
        REQUIRE_THROWS_AS(z.val(), PrecisionExhausted);
    }
    SECTION("product knowledge bound") {
        Laurent a = Laurent::monomial(ff_one(F), -2, 6);  // known on [-2, 4)
        Laurent b = Laurent::monomial(ff_int(F, 3), 1, 10);
        Laurent ab = a * b;
        REQUIRE(ab.val() == -1);
        REQUIRE(ab.lead() == ff_int(F, 3));
        REQUIRE(ab.hi() == 1 + 4);  // min(lo_a + hi_b, lo_b + hi_a)
    }
    SECTION("polynomial evaluation and composition") {
        // f = T^2 + 2 evaluated at sigma^{-1}
        UPoly f = UPoly::monomial(ff_one(F), 2) + UPoly::constant(ff_int(F, 2));
        Laurent s = Laurent::monomial(ff_one(F), -1, kPrec);
        Laurent v = eval_poly_at(f, s, kPrec);
        REQUIRE(v.val() == -2);
        REQUIRE(v.at(0) == ff_int(F, 2));
        // composing with S = tau^3 rescales exponents
        Laurent S = Laurent::monomial(ff_one(F), 3, kPrec);
        Laurent w = compose_laurent(v, S, kPrec);
        REQUIRE(w.val() == -6);
        REQUIRE(w.at(0) == ff_int(F, 2));
    }
}

TEST_CASE("trace form lhs", "[tower]") {
    FieldRef f4 = FieldCtx::make(2, 2);
    LinearizedPoly L = trace_form_lhs(f4.get(), 2, 2);
    UPoly expect = UPoly::monomial(ff_one(f4.get()), 2) + UPoly::x(f4.get());
    REQUIRE(L.expanded() == expect);
    REQUIRE(L.size() == 2);

    FieldRef f27 = FieldCtx::make(3, 3);
    LinearizedPoly T27 = trace_form_lhs(f27.get(), 3, 3);
    REQUIRE(T27.expanded().degree() == 9);
    REQUIRE(T27.size() == 9);
}

TEST_CASE("artin-schreier place classification", "[tower]") {
    FieldRef f4 = FieldCtx::make(2, 2);
    const FieldCtx* F = f4.get();
    StepSpec step = make_as_step(F, 2, 2, RatFunc(UPoly::x(F)));

    SECTION("pole of coprime order is totally ramified") {
        PlaceClass c = classify_as_place(step, {-3, ff_zero(F)}, 2);
        REQUIRE(c.kind == PlaceClass::TotallyRamified);
        REQUIRE(c.e == 2);
        REQUIRE(c.d == 4);  // (E - 1)(m + 1) with E = 2, m = 3
        REQUIRE(c.m == 3);
    }
    SECTION("pole order divisible by p is rejected") {
        REQUIRE_THROWS_AS(classify_as_place(step, {-2, ff_zero(F)}, 2), WildUnreduced);
    }
    SECTION("subfield residue splits completely") {
        PlaceClass c = classify_as_place(step, {0, ff_one(F)}, 2);
        REQUIRE(c.kind == PlaceClass::Split);
        REQUIRE(c.count == 2);
        REQUIRE(c.deg1_count() == 2);
    }
    SECTION("residue outside the subfield gives an inert branch") {
        FFElem omega = FFElem(f4, FieldCtx::make(2, 2)->code_at_lex(2));
        // any element of F_4 outside F_2 has absolute trace 1, so T^2 + T - w
        // is irreducible
        for (const auto& g : all_elements(F)) {
            if (in_subfield(g, 2)) continue;
            PlaceClass c = classify_as_place(step, {0, g}, 2);
            REQUIRE(c.kind == PlaceClass::Branches);
            REQUIRE(c.branches.size() == 1);
            REQUIRE(c.branches[0] == Branch{2, 1, 0});
            REQUIRE(c.deg1_count() == 0);
        }
        (void)omega;
    }
}

TEST_CASE("kummer place classification", "[tower]") {
    FieldRef f4 = FieldCtx::make(2, 2);
    const FieldCtx* F = f4.get();
    StepSpec step = make_kummer_step(3, RatFunc(UPoly::x(F)));

    SECTION("unit cube residue splits") {
        PlaceClass c = classify_kummer_place(step, {0, ff_one(F)});
        REQUIRE(c.kind == PlaceClass::Split);
        REQUIRE(c.count == 3);
    }
    SECTION("non-cube residue is inert") {
        for (const auto& u : all_elements(F)) {
            if (u.is_zero() || u == ff_one(F)) continue;
            PlaceClass c = classify_kummer_place(step, {0, u});
            REQUIRE(c.kind == PlaceClass::Branches);
            REQUIRE(c.branches.size() == 1);
            REQUIRE(c.branches[0] == Branch{3, 1, 0});
        }
    }
    SECTION("valuation coprime to k is totally ramified") {
        PlaceClass c = classify_kummer_place(step, {-1, ff_one(F)});
        REQUIRE(c.kind == PlaceClass::TotallyRamified);
        REQUIRE(c.e == 3);
        REQUIRE(c.d == 2);
    }
    SECTION("zero residue at a k-divisible valuation is rejected") {
        REQUIRE_THROWS_AS(classify_kummer_place(step, {0, ff_zero(F)}), ZeroResidue);
    }
    SECTION("square residue over F_9 splits for k = 2") {
        FieldRef f9 = FieldCtx::make(3, 2);
        StepSpec s2 = make_kummer_step(2, RatFunc(UPoly::x(f9.get())));
        PlaceClass c = classify_kummer_place(s2, {0, -ff_one(f9.get())});
        REQUIRE(c.kind == PlaceClass::Split);  // -1 is a square in F_9
        REQUIRE(c.count == 2);
    }
}

TEST_CASE("family builders", "[tower]") {
    SECTION("family A over F_4 reproduces the cubic rhs") {
        TowerSpec spec = family_tower_a(family_a_f4());
        const FieldCtx* F = spec.ctx.get();
        REQUIRE(spec.q == 2);
        REQUIRE(spec.n == 2);
        REQUIRE(spec.steps.size() == 1);
        REQUIRE(spec.steps[0].k == 3);
        // b^k - (a x^r + b)^k = 1 - (x + 1)^3 = x^3 + x^2 + x over F_2
        UPoly expect = UPoly::monomial(ff_one(F), 3) + UPoly::monomial(ff_one(F), 2) +
                       UPoly::x(F);
        REQUIRE(spec.steps[0].rhs.num() == expect);
        REQUIRE(spec.steps[0].rhs.den().degree() == 0);
    }
    SECTION("family B over F_9") {
        FieldRef f9 = FieldCtx::make(3, 2);
        FFElem one = ff_one(f9.get());
        FamilyParams fp{'B', 3, 2, 1, f9, {one}, {one}, {1}};
        TowerSpec spec = family_tower_b(fp);
        REQUIRE(spec.steps[0].k == 2);  // l_m = p^m - 1
        // 1 - (x + 1)^2 = -x^2 - 2x = 2x^2 + x over F_3
        const FieldCtx* F = f9.get();
        UPoly expect = UPoly::monomial(ff_int(F, 2), 2) + UPoly::x(F);
        REQUIRE(spec.steps[0].rhs.num() == expect);
    }
    SECTION("parameter validation") {
        FieldRef f4 = FieldCtx::make(2, 2);
        FFElem one = ff_one(f4.get());
        FamilyParams bad = family_a_f4();
        bad.m = 2;  // family A needs m != n
        REQUIRE_THROWS_AS(family_tower_a(bad), InvalidParams);
        bad = family_a_f4();
        bad.a[0] = ff_zero(f4.get());
        REQUIRE_THROWS_AS(family_tower_a(bad), InvalidParams);
        bad = family_a_f4();
        bad.exps[0] = 3;  // not a power of p
        REQUIRE_THROWS_AS(family_tower_a(bad), InvalidParams);
        bad = family_a_f4();
        for (const auto& e : all_elements(bad.ctx.get()))
            if (!in_subfield(e, 2)) bad.b[0] = e;  // outside F_{p^m} = F_2
        REQUIRE_THROWS_AS(family_tower_a(bad), InvalidParams);
        bad = family_a_f4();
        bad.family = 'B';
        REQUIRE_THROWS_AS(family_tower_a(bad), InvalidParams);
    }
}

TEST_CASE("local lifting through a kummer step", "[tower][engine]") {
    TowerSpec spec = family_tower_a(family_a_f4());
    const FieldCtx* F = spec.ctx.get();
    const StepSpec& step = spec.steps[0];

    SECTION("P_inf splits into three places with simple poles") {
        LocalPlace pinf = start_place_infinity(F, kPrec);
        LiftResult r = lift_local_place(step, pinf, kPrec);
        REQUIRE(r.deg1.size() == 3);
        REQUIRE(r.all.size() == 3);
        for (const auto& pl : r.deg1) {
            REQUIRE(pl.level == 2);
            REQUIRE(pl.e_total == 1);
            REQUIRE(pl.gens[1].val() == -1);
            require_step_satisfied(step, pl.gens[0], pl.gens[1]);
        }
        REQUIRE(r.input.v == -3);
    }
    SECTION("zeros of the rhs are totally ramified") {
        LocalPlace p0 = start_place_finite(ff_zero(F), kPrec);
        LiftResult r = lift_local_place(step, p0, kPrec);
        REQUIRE(r.deg1.size() == 1);
        REQUIRE(r.all == std::vector<Branch>{{1, 3, 2}});
        const LocalPlace& pl = r.deg1[0];
        REQUIRE(pl.e_total == 3);
        REQUIRE(pl.gens[0].val() == 3);  // x acquires valuation e
        REQUIRE(pl.gens[1].val() == 1);  // y is a uniformizer above
        require_step_satisfied(step, pl.gens[0], pl.gens[1]);
    }
    SECTION("mixed case: partial ramification with residue branching") {
        FieldRef f9 = FieldCtx::make(3, 2);
        const FieldCtx* F9 = f9.get();
        StepSpec s = make_kummer_step(4, RatFunc(UPoly::monomial(ff_one(F9), 2)));
        LocalPlace p0 = start_place_finite(ff_zero(F9), kPrec);
        LiftResult r = lift_local_place(s, p0, kPrec);
        // v = 2, d = gcd(4, 2) = 2, e = 2; Z^2 - 1 has two roots
        REQUIRE(r.deg1.size() == 2);
        REQUIRE(r.all == std::vector<Branch>({{1, 2, 1}, {1, 2, 1}}));
        for (const auto& pl : r.deg1) {
            REQUIRE(pl.e_total == 2);
            REQUIRE(pl.gens[0].val() == 2);
            REQUIRE(pl.gens[1].val() == 1);
            require_step_satisfied(s, pl.gens[0], pl.gens[1]);
        }
    }
}

TEST_CASE("local lifting through an artin-schreier step", "[tower][engine]") {
    FieldRef f4 = FieldCtx::make(2, 2);
    const FieldCtx* F = f4.get();

    SECTION("simple pole is totally ramified with the uniformizer rescaled") {
        // y^2 + y = 1/x at the place x = 0
        StepSpec step = make_as_step(F, 2, 2,
                                     RatFunc(UPoly::constant(ff_one(F)), UPoly::x(F)));
        LocalPlace p0 = start_place_finite(ff_zero(F), kPrec);
        LiftResult r = lift_local_place(step, p0, kPrec);
        REQUIRE(r.deg1.size() == 1);
        REQUIRE(r.all == std::vector<Branch>{{1, 2, 2}});  // (E-1)(m+1) = 2
        const LocalPlace& pl = r.deg1[0];
        REQUIRE(pl.e_total == 2);
        REQUIRE(pl.gens[0].val() == 2);
        REQUIRE(pl.gens[1].val() == -1);
        require_step_satisfied(step, pl.gens[0], pl.gens[1]);
    }
    SECTION("subfield residue splits into kernel translates") {
        // y^2 + y = x at the place x = 1: residue 1, T^2 + T + 1 has no
        // roots in F_2 but splits over F_4
        StepSpec step = make_as_step(F, 2, 2, RatFunc(UPoly::x(F)));
        LocalPlace p1 = start_place_finite(ff_one(F), kPrec);
        LiftResult r = lift_local_place(step, p1, kPrec);
        REQUIRE(r.deg1.size() == 2);
        for (const auto& pl : r.deg1) {
            REQUIRE(pl.e_total == 1);
            REQUIRE(pl.gens[1].val() == 0);
            require_step_satisfied(step, pl.gens[0], pl.gens[1]);
        }
        // the two lifted roots differ by a kernel element
        FFElem diff = r.deg1[0].gens[1].at(0) - r.deg1[1].gens[1].at(0);
        REQUIRE(in_subfield(diff, 2));
        REQUIRE(!diff.is_zero());
    }
    SECTION("pole at infinity of coprime order") {
        // y^2 + y = x^3: P_inf has v = -3
        StepSpec step = make_as_step(F, 2, 2, RatFunc(UPoly::monomial(ff_one(F), 3)));
        LocalPlace pinf = start_place_infinity(F, kPrec);
        LiftResult r = lift_local_place(step, pinf, kPrec);
        REQUIRE(r.deg1.size() == 1);
        REQUIRE(r.all == std::vector<Branch>{{1, 2, 4}});  // (E-1)(m+1) = 4
        const LocalPlace& pl = r.deg1[0];
        REQUIRE(pl.gens[0].val() == -2);
        REQUIRE(pl.gens[1].val() == -3);
        require_step_satisfied(step, pl.gens[0], pl.gens[1]);
    }
}

TEST_CASE("subextension chains", "[tower]") {
    FieldRef f8 = FieldCtx::make(2, 3);
    const FieldCtx* F = f8.get();
    LinearizedPoly L = trace_form_lhs(F, 2, 3);  // T^4 + T^2 + T over F_8
    REQUIRE(L.size() == 4);

    // the kernel is the trace-zero hyperplane; collect its nonzero elements
    std::vector<FFElem> kernel;
    for (const auto& v : L.support())
        if (!v.is_zero()) kernel.push_back(v);
    REQUIRE(kernel.size() == 3);

    SECTION("every two-element basis recomposes the trace form") {
        int bases = 0;
        for (std::size_t i = 0; i < kernel.size(); ++i)
            for (std::size_t j = 0; j < kernel.size(); ++j) {
                if (i == j) continue;
                SubextChain ch = resolve_subextensions(L, {kernel[i], kernel[j]});
                REQUIRE(ch.steps.size() == 2);
                REQUIRE(ch.steps[0].degree() == 2);
                REQUIRE(ch.composition == L.expanded());
                REQUIRE(!ch.B[1].is_zero());
                REQUIRE(!ch.B[2].is_zero());
                ++bases;
            }
        REQUIRE(bases == 6);
    }
    SECTION("rejections") {
        REQUIRE_THROWS_AS(resolve_subextensions(L, {kernel[0]}), NotABasis);
        REQUIRE_THROWS_AS(resolve_subextensions(L, {kernel[0], kernel[0]}), NotABasis);
        FFElem outside = ff_one(F);  // trace of 1 over F_2 is 1 + 1 + 1 = 1
        REQUIRE_THROWS_AS(resolve_subextensions(L, {kernel[0], outside}), NotABasis);
    }
}

namespace {

/// The split abelian tower over F_27: y^9 + y^3 + y = 1/((tr x)^2 - alpha)
/// with alpha a non-square in F_3.
TowerSpec abelian_f27() {
    FieldRef f27 = FieldCtx::make(3, 3);
    const FieldCtx* F = f27.get();
    MultiPoly one = MultiPoly::constant(F, 3, ff_one(F));
    NQFunction g(3, 3, one);
    MultiPoly e1 = elementary_symmetric_nq(F, 3, 3, 1).num();
    MultiPoly hs = e1 * e1 - MultiPoly::constant(F, 3, ff_int(F, 2));
    NQFunction h(3, 3, std::move(hs));
    return builder_as_tower(f27, 3, 3, g, h, BuilderVariant::AllSplit);
}

}  // namespace

TEST_CASE("builder towers and hypothesis checks", "[tower]") {
    FieldRef f27 = FieldCtx::make(3, 3);
    const FieldCtx* F = f27.get();
    MultiPoly one = MultiPoly::constant(F, 3, ff_one(F));
    NQFunction g(3, 3, one);

    SECTION("the split abelian tower passes all checks") {
        TowerSpec spec = abelian_f27();
        REQUIRE(spec.steps.size() == 1);
        REQUIRE(spec.steps[0].kind == StepKind::ArtinSchreier);
        REQUIRE(spec.steps[0].builder_certified);
        REQUIRE(spec.steps[0].rhs.den().degree() == 18);
        REQUIRE(spec.steps[0].rhs.valuation_at_infinity() == 18);
    }
    SECTION("degree shape is enforced per variant") {
        MultiPoly e1 = elementary_symmetric_nq(F, 3, 3, 1).num();
        MultiPoly hs = e1 * e1 - MultiPoly::constant(F, 3, ff_int(F, 2));
        NQFunction h(3, 3, std::move(hs));
        REQUIRE_THROWS_AS(builder_as_tower(f27, 3, 3, g, h, BuilderVariant::AllButInfinity),
                          DegreeConstraintViolated);
        REQUIRE_THROWS_AS(builder_as_tower(f27, 3, 3, h, g, BuilderVariant::AllSplit),
                          DegreeConstraintViolated);
    }
    SECTION("h with a zero on the field is rejected") {
        MultiPoly e1 = elementary_symmetric_nq(F, 3, 3, 1).num();
        MultiPoly hs = e1 * e1 - MultiPoly::constant(F, 3, ff_one(F));  // (tr x)^2 - 1
        NQFunction h(3, 3, std::move(hs));
        REQUIRE_THROWS_AS(builder_as_tower(f27, 3, 3, g, h, BuilderVariant::AllSplit),
                          HasSubfieldRoot);
    }
}

TEST_CASE("validated tower construction", "[tower]") {
    SECTION("family A carries a valuation witness at every level") {
        TowerSpec spec = family_tower_a(family_a_f4());
        Tower t = build_tower(spec, 3);
        REQUIRE(t.evidence.size() == 3);
        for (const auto& ev : t.evidence)
            REQUIRE(ev.tier == EvidenceTier::ValuationWitness);
    }
    SECTION("abelian tower falls back to the builder theorem above level 1") {
        Tower t = build_tower(abelian_f27(), 2);
        REQUIRE(t.evidence.size() == 2);
        REQUIRE(t.evidence[0].tier == EvidenceTier::ValuationWitness);
        REQUIRE(t.evidence[1].tier == EvidenceTier::BuilderTheorem);
    }
    SECTION("a perfect k-th power rhs is rejected") {
        FieldRef f4 = FieldCtx::make(2, 2);
        TowerSpec spec;
        spec.ctx = f4;
        spec.q = 2;
        spec.n = 2;
        spec.steps.push_back(
            make_kummer_step(3, RatFunc(UPoly::monomial(ff_one(f4.get()), 3))));
        REQUIRE_THROWS_AS(build_tower(spec, 1), InvalidStep);
    }
    SECTION("polynomial AS rhs validated by the syntactic corollary") {
        // y^2 + y = x^3 over F_4: no finite pole, pole at infinity of order 3
        FieldRef f4 = FieldCtx::make(2, 2);
        const FieldCtx* F = f4.get();
        TowerSpec spec;
        spec.ctx = f4;
        spec.q = 2;
        spec.n = 2;
        spec.steps.push_back(make_as_step(F, 2, 2, RatFunc(UPoly::monomial(ff_one(F), 3))));
        Tower t = build_tower(spec, 1);
        REQUIRE(t.evidence[0].tier == EvidenceTier::ValuationWitness);
    }
}
