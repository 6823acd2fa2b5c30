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

#include "towerlab/analysis.hpp"

using namespace towerlab;

namespace {

TowerSpec family_a_q4_spec() {
    FieldRef f4 = FieldCtx::make(2, 2);
    FFElem one = ff_one(f4.get());
    return family_tower_a(FamilyParams{'A', 2, 2, 1, f4, {one}, {one}, {1}});
}

TowerSpec family_b_q9_spec() {
    FieldRef f9 = FieldCtx::make(3, 2);
    FFElem one = ff_one(f9.get());
    return family_tower_b(FamilyParams{'B', 3, 2, 1, f9, {one}, {one}, {1}});
}

TowerSpec abelian_f27_spec() {
    FieldRef f27 = FieldCtx::make(3, 3);
    const FieldCtx* F = f27.get();
    NQFunction g(3, 3, MultiPoly::constant(F, 3, ff_one(F)));
    MultiPoly e1 = elementary_symmetric_nq(F, 3, 3, 1).num();
    NQFunction h(3, 3, e1 * e1 - MultiPoly::constant(F, 3, ff_int(F, 2)));
    return builder_as_tower(f27, 3, 3, g, h, BuilderVariant::AllSplit);
}

TowerSpec curve_y2y_x3() {
    FieldRef f4 = FieldCtx::make(2, 2);
    const FieldCtx* F = f4.get();
    TowerSpec spec;
    spec.ctx = f4;
    spec.q = 2;
    spec.n = 2;
    spec.steps.push_back(make_as_step(F, 2, 2, RatFunc(UPoly::monomial(ff_one(F), 3))));
    return spec;
}

}  // namespace

TEST_CASE("affine point enumeration", "[analysis]") {
    TowerSpec fam_a = family_a_q4_spec();
    SECTION("level 1 is the whole affine line") {
        REQUIRE(enumerate_affine_points(fam_a, 1).size() == 4);
    }
    SECTION("family A level 2 has six affine points") {
        auto pts = enumerate_affine_points(fam_a, 2);
        REQUIRE(pts.size() == 6);
        // x_1 = 1 contributes three solutions, the three zeros of rhs one each
        std::size_t at_one = 0;
        for (const auto& t : pts)
            if (t[0] == ff_one(fam_a.ctx.get())) ++at_one;
        REQUIRE(at_one == 3);
    }
    SECTION("abelian tower level 2 has 27 * 9 affine points") {
        REQUIRE(enumerate_affine_points(abelian_f27_spec(), 2).size() == 243);
    }
    SECTION("scale guard trips on absurd depth") {
        REQUIRE_THROWS_AS(enumerate_affine_points(fam_a, 20), ScaleExceeded);
    }
}

TEST_CASE("rational place counts", "[analysis]") {
    SECTION("family A: N = 5, 9, 17 with 3^{j-1} places above P_inf") {
        SplittingReport rep = count_rational_places(family_a_q4_spec(), 3);
        REQUIRE(rep.levels.size() == 3);
        REQUIRE(rep.levels[0].total == 5);  // q^n + 1
        REQUIRE(rep.levels[1].affine == 6);
        REQUIRE(rep.levels[1].infinite == 3);
        REQUIRE(rep.levels[1].total == 9);
        REQUIRE(rep.levels[2].affine == 8);
        REQUIRE(rep.levels[2].infinite == 9);
        REQUIRE(rep.levels[2].total == 17);
    }
    SECTION("family B: P_inf splits completely, 2^{j-1} chains") {
        SplittingReport rep = count_rational_places(family_b_q9_spec(), 3);
        REQUIRE(rep.levels[0].total == 10);
        REQUIRE(rep.levels[1].infinite == 2);
        REQUIRE(rep.levels[2].infinite == 4);
    }
    SECTION("abelian tower: N(T_2) = 243 + 9") {
        SplittingReport rep = count_rational_places(abelian_f27_spec(), 2);
        REQUIRE(rep.levels[0].total == 28);
        REQUIRE(rep.levels[1].affine == 243);
        REQUIRE(rep.levels[1].infinite == 9);
        REQUIRE(rep.levels[1].total == 252);
    }
}

TEST_CASE("classifier vs enumeration fiber cross-check", "[analysis]") {
    SECTION("family A level 2") {
        SplittingReport rep = splitting_report(family_a_q4_spec(), 2);
        REQUIRE(rep.all_ok);
        REQUIRE(rep.fibers.size() == 5);
        for (const auto& f : rep.fibers) {
            REQUIRE(f.classifier_agreed);
            REQUIRE(f.predicted == f.enumerated);
            if (f.at_infinity) REQUIRE(f.enumerated == 3);
            if (!f.at_infinity && f.alpha.is_zero()) REQUIRE(f.enumerated == 1);  // ramified
        }
    }
    SECTION("family A level 3: singular model point over alpha = 1") {
        // above (x_1, x_2) = (1, w) the rhs has a triple zero with non-cube
        // residue: the two tuples (1, w, 0), (1, w^2, 0) lie on degree-3
        // places, so the tuple count exceeds the true fiber there
        SplittingReport rep = splitting_report(family_a_q4_spec(), 3);
        REQUIRE(!rep.all_ok);
        std::uint64_t tuples = 0, places = 0;
        for (const auto& f : rep.fibers) {
            REQUIRE(f.classifier_agreed);
            tuples += f.enumerated;
            places += f.predicted;
            bool is_one = !f.at_infinity && f.alpha == ff_one(f.alpha.ctx());
            if (is_one) {
                REQUIRE(f.predicted == 3);
                REQUIRE(f.enumerated == 5);
            } else {
                REQUIRE(f.ok);
            }
        }
        REQUIRE(tuples == 17);  // the model-point count used by N(T_3)
        REQUIRE(places == 15);  // true degree-one places per the local engine
    }
    SECTION("abelian tower level 2: 28 fibers, all Split{9}") {
        SplittingReport rep = splitting_report(abelian_f27_spec(), 2);
        REQUIRE(rep.all_ok);
        REQUIRE(rep.fibers.size() == 28);
        for (const auto& f : rep.fibers) REQUIRE(f.enumerated == 9);
    }
    SECTION("Kummer all-split tower over F_125: 126 fibers of 31") {
        // x_2^31 = ((tr x)^2 - 3)/((tr x)^2 - 2) with 2, 3 non-squares in F_5
        FieldRef f125 = FieldCtx::make(5, 3);
        const FieldCtx* F = f125.get();
        MultiPoly e1 = elementary_symmetric_nq(F, 3, 5, 1).num();
        MultiPoly tr2 = e1 * e1;
        NQFunction g(3, 5, tr2 - MultiPoly::constant(F, 3, ff_int(F, 3)));
        NQFunction h(3, 5, tr2 - MultiPoly::constant(F, 3, ff_int(F, 2)));
        TowerSpec spec;
        spec.ctx = f125;
        spec.q = 5;
        spec.n = 3;
        spec.steps.push_back(make_kummer_step(31, g.specialized() / h.specialized()));
        SplittingReport rep = splitting_report(spec, 2);
        REQUIRE(rep.all_ok);
        REQUIRE(rep.fibers.size() == 126);
        for (const auto& f : rep.fibers) REQUIRE(f.enumerated == 31);
    }
}

TEST_CASE("exact level-2 genus via Hurwitz", "[analysis]") {
    SECTION("y^2 + y = x^3 over F_4 has genus 1") {
        GenusReport g = genus_level2_exact(curve_y2y_x3());
        REQUIRE(g.degdiff == 4);  // (E-1)(m+1) with E = 2, m = 3
        REQUIRE(g.exact_genus == 1);
    }
    SECTION("family A level-2 curve has genus 1") {
        GenusReport g = genus_level2_exact(family_a_q4_spec());
        REQUIRE(g.degdiff == 6);  // three rational zeros with v = 1, k - 1 = 2 each
        REQUIRE(g.exact_genus == 1);
    }
    SECTION("wild data is rejected") {
        FieldRef f4 = FieldCtx::make(2, 2);
        const FieldCtx* F = f4.get();
        TowerSpec spec;
        spec.ctx = f4;
        spec.q = 2;
        spec.n = 2;
        // pole at infinity of order 2 = p
        spec.steps.push_back(make_as_step(F, 2, 2, RatFunc(UPoly::monomial(ff_one(F), 2))));
        REQUIRE_THROWS_AS(genus_level2_exact(spec), WildUnreduced);
    }
}

TEST_CASE("zeta-function genus oracle", "[analysis]") {
    SECTION("y^2 + y = x^3 over F_4 is maximal with genus 1") {
        TowerSpec spec = curve_y2y_x3();
        REQUIRE(count_rational_places(spec, 2).levels[1].total == 9);  // 4 + 1 + 2*2
        REQUIRE(zeta_genus_oracle(spec, 2, 2) == 1);
    }
    SECTION("rational function field has genus 0") {
        REQUIRE(zeta_genus_oracle(family_a_q4_spec(), 1, 2) == 0);
    }
    SECTION("family A level 2: oracle agrees with Hurwitz") {
        TowerSpec spec = family_a_q4_spec();
        REQUIRE(zeta_genus_oracle(spec, 2, 2) == genus_level2_exact(spec).exact_genus);
    }
    SECTION("scale guard") {
        REQUIRE_THROWS_AS(zeta_genus_oracle(family_a_q4_spec(), 2, 20), ScaleExceeded);
    }
}

TEST_CASE("closed-form bounds", "[analysis]") {
    SECTION("family A genus bound") {
        REQUIRE(genus_bound_family_a(4, 3, 2) == 2.0);
        REQUIRE(genus_bound_family_a(4, 3, 3) == 8.0);   // (4-2)(9-1)/2
        REQUIRE(genus_bound_family_a(4, 3, 4) == 26.0);
        REQUIRE(genus_bound_family_a(4, 3, 5) == 80.0);
    }
    SECTION("family A degDiff bounds, telescoped and closed form") {
        auto [sum2, closed2] = degdiff_bound_family_a(4, 3, 2);
        REQUIRE(sum2 == 8);    // 4 * 2 * 1
        REQUIRE(closed2 == 8);  // 4 * (3 - 1)
        auto [sum3, closed3] = degdiff_bound_family_a(4, 3, 3);
        REQUIRE(sum3 == 32);    // 4 * 2 * 4
        REQUIRE(closed3 == 32);  // 4 * 8
        auto [sum5, closed5] = degdiff_bound_family_a(4, 3, 5);
        REQUIRE(sum5 <= closed5);
    }
    SECTION("lambda and Drinfeld-Vladut bounds") {
        REQUIRE(lambda_bound_family_a(4) == 1.0);
        REQUIRE(lambda_bound_family_b(2) == 2.0);
        REQUIRE(dv_bound(4) == 1.0);
        REQUIRE(dv_bound(9) == 2.0);
        REQUIRE_THROWS_AS(dv_bound(1), InvalidParams);
        REQUIRE_THROWS_AS(dv_bound(6), InvalidParams);
        REQUIRE_THROWS_AS(lambda_bound_family_a(2), InvalidParams);
    }
}

TEST_CASE("ratio report and CSV determinism", "[analysis]") {
    FieldRef f4 = FieldCtx::make(2, 2);
    FFElem one = ff_one(f4.get());
    FamilyParams fp{'A', 2, 2, 1, f4, {one}, {one}, {1}};
    TowerSpec spec = family_tower_a(fp);

    auto rows = ratio_report(spec, 3, &fp);
    REQUIRE(rows.size() == 3);
    REQUIRE(rows[0].genus_kind == "exact");
    REQUIRE(rows[0].genus_value == 0.0);
    REQUIRE(!rows[0].has_ratio);  // genus 0
    REQUIRE(rows[1].genus_kind == "exact");
    REQUIRE(rows[1].genus_value == 1.0);
    REQUIRE(rows[1].ratio == 9.0);
    REQUIRE(rows[2].genus_kind == "bound");
    REQUIRE(rows[2].genus_value == 8.0);
    REQUIRE(rows[2].ratio == Catch::Approx(17.0 / 8.0));
    for (const auto& r : rows) {
        REQUIRE(r.lambda == 1.0);
        REQUIRE(r.dv == 1.0);
        REQUIRE(r.ratio >= 0.0);
    }

    SECTION("byte-identical CSV across runs") {
        auto render = [&]() {
            std::string out = census_csv_header() + "\n";
            for (const auto& r : ratio_report(spec, 3, &fp)) out += census_csv_row(r) + "\n";
            return out;
        };
        std::string a = render(), b = render();
        REQUIRE(a == b);
        REQUIRE(a.find(',') != std::string::npos);
        REQUIRE(a.substr(0, 2) == "j,");
        // no empty genus for family rows, no commas inside cells beyond the 8 separators
        std::size_t commas = 0;
        for (char ch : a.substr(0, a.find('\n'))) commas += ch == ',';
        REQUIRE(commas == 8);
    }
}
