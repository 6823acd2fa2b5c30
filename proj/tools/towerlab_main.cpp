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

// towerlab: build and analyze explicit towers of function fields.
//
// Exit codes: 0 success, 2 validation failure, 3 scale guard tripped,
// 4 spec/grid parse error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "towerlab/analysis.hpp"
#include "towerlab/specfile.hpp"

namespace {

using namespace towerlab;

/// Writes the report to --out when given, stdout otherwise.
void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw InvalidParams("cannot open output file '" + out_path + "'");
    out << text;
}

std::string place_class_text(const PlaceClass& cls) {
    switch (cls.kind) {
        case PlaceClass::Split:
            return "Split " + std::to_string(cls.count);
        case PlaceClass::TotallyRamified:
            return "TotallyRamified e=" + std::to_string(cls.e) +
                   " d=" + std::to_string(cls.d) + " m=" + std::to_string(cls.m);
        case PlaceClass::Branches: {
            std::string s = "Branches";
            for (const Branch& b : cls.branches)
                s += " (e=" + std::to_string(b.e) + ",f=" + std::to_string(b.f) +
                     ",d=" + std::to_string(b.d) + ")";
            return s;
        }
    }
    return "";
}

int cmd_build(const std::string& spec_path, int depth) {
    TowerSpec spec = load_tower_spec(spec_path);
    Tower tower = build_tower(spec, depth);
    bool uniform = true;
    for (const StepEvidence& ev : tower.evidence)
        if (ev.tier != tower.evidence.front().tier) uniform = false;
    std::ostringstream out;
    if (uniform && !tower.evidence.empty()) {
        out << tower.evidence.size() << " steps validated (tier: "
            << tier_name(tower.evidence.front().tier) << ")\n";
    } else {
        for (std::size_t i = 0; i < tower.evidence.size(); ++i)
            out << "step " << (i + 1) << " validated (tier: "
                << tier_name(tower.evidence[i].tier) << ")\n";
    }
    std::cout << out.str();
    return 0;
}

std::string count_csv(const TowerSpec& spec, int depth) {
    std::vector<RatioRow> rows = ratio_report(spec, depth);
    std::string out = census_csv_header() + "\n";
    for (const RatioRow& r : rows) out += census_csv_row(r) + "\n";
    return out;
}

std::string count_text(const TowerSpec& spec, int depth) {
    SplittingReport rep = count_rational_places(spec, depth);
    std::string out;
    for (const LevelCount& lc : rep.levels)
        out += "level " + std::to_string(lc.level) + ": affine " + std::to_string(lc.affine) +
               ", infinite " + std::to_string(lc.infinite) +
               ", total " + std::to_string(lc.total) + "\n";
    return out;
}

int cmd_count(const std::string& spec_path, int depth, const std::string& format,
              const std::string& out_path) {
    TowerSpec spec = load_tower_spec(spec_path);
    emit(out_path, format == "text" ? count_text(spec, depth) : count_csv(spec, depth));
    return 0;
}

int cmd_classify(const std::string& spec_path, int level, int precision,
                 const std::string& out_path) {
    TowerSpec spec = load_tower_spec(spec_path);
    if (level != 2)
        throw InvalidParams("classification tables are defined for level 2 only");
    const StepSpec& step = spec.step_for(1);
    const FieldCtx* ctx = spec.ctx.get();
    std::string out = with_precision_retry([&](int prec) {
        std::string table;
        auto row = [&](const std::string& name, const LocalPlace& pl) {
            LiftResult lifted = lift_local_place(step, pl, prec);
            PlaceClass cls = step.kind == StepKind::ArtinSchreier
                                 ? classify_as_place(step, lifted.input, spec.q)
                                 : classify_kummer_place(step, lifted.input);
            table += name + "  " + place_class_text(cls) + "\n";
        };
        for (const FFElem& a : all_elements(ctx)) row("x=" + a.str(), start_place_finite(a, prec));
        row("x=inf", start_place_infinity(ctx, prec));
        return table;
    }, precision);
    emit(out_path, out);
    return 0;
}

int cmd_genus(const std::string& spec_path, const std::string& out_path) {
    TowerSpec spec = load_tower_spec(spec_path);
    GenusReport rep = genus_level2_exact(spec);
    emit(out_path, "level 2: degdiff " + std::to_string(rep.degdiff) +
                       ", genus " + std::to_string(rep.exact_genus) + " (exact)\n");
    return 0;
}

/// Deterministic kernel basis: greedy lexicographic sweep of the support.
std::vector<FFElem> lex_kernel_basis(const LinearizedPoly& lhs) {
    const FieldCtx* ctx = lhs.ctx();
    std::vector<FFElem> basis;
    std::vector<FFElem> span{ff_zero(ctx)};
    for (const FFElem& v : lhs.support()) {
        if (v.is_zero()) continue;
        bool in_span = false;
        for (const FFElem& s : span)
            if (s == v) in_span = true;
        if (in_span) continue;
        // extend the F_p-span by every multiple-plus-shift of v
        std::vector<FFElem> grown = span;
        FFElem mult = v;
        for (std::uint32_t c = 1; c < ctx->p(); ++c) {
            for (const FFElem& s : span) grown.push_back(s + mult);
            mult = mult + v;
        }
        span = std::move(grown);
        basis.push_back(v);
        if (span.size() == lhs.size()) break;
    }
    return basis;
}

int cmd_subext(const std::string& spec_path, const std::string& out_path) {
    TowerSpec spec = load_tower_spec(spec_path);
    const StepSpec& step = spec.step_for(1);
    if (step.kind != StepKind::ArtinSchreier || !step.lhs)
        throw InvalidParams("subext needs an artin_schreier first step");
    SubextChain chain = resolve_subextensions(*step.lhs, lex_kernel_basis(*step.lhs));
    std::string out;
    out += "basis:";
    for (const FFElem& b : chain.basis) out += " " + b.str();
    out += "\n";
    for (std::size_t i = 0; i < chain.steps.size(); ++i)
        out += "step " + std::to_string(i + 1) + ": " + chain.steps[i].str() +
               "  (B = " + chain.B[i + 1].str() + ")\n";  // B is 1-based
    out += "composition: " + chain.composition.str() + "\n";
    emit(out_path, out);
    return 0;
}

int cmd_census(const std::string& grid_path, const std::string& out_path) {
    std::vector<spectext::GridRow> rows = load_census_grid(grid_path);
    struct OutRow {
        std::string prefix;  // family,p,n,m,depth
        int j;
        std::string text;
    };
    std::vector<OutRow> emitted;
    std::vector<std::string> skipped;
    for (const spectext::GridRow& row : rows) {
        try {
            FamilyParams fp = row.to_params();
            TowerSpec spec = fp.family == 'A' ? family_tower_a(fp) : family_tower_b(fp);
            build_tower(spec, int(row.depth));
            std::string prefix = row.family + "," + std::to_string(fp.p) + "," +
                                 std::to_string(fp.n) + "," + std::to_string(fp.m) + "," +
                                 std::to_string(row.depth);
            for (const RatioRow& r : ratio_report(spec, int(row.depth), &fp)) {
                bool optimal = r.has_lambda && r.lambda == r.dv;
                emitted.push_back(
                    {prefix, r.j,
                     prefix + "," + census_csv_row(r) + "," + (optimal ? "yes" : "no")});
            }
        } catch (const ScaleExceeded& e) {
            skipped.push_back("# skipped row at line " + std::to_string(row.line) + ": " +
                              e.what());
        } catch (const Error& e) {
            skipped.push_back("# skipped row at line " + std::to_string(row.line) + ": " +
                              e.what());
        }
    }
    std::stable_sort(emitted.begin(), emitted.end(), [](const OutRow& a, const OutRow& b) {
        return a.prefix != b.prefix ? a.prefix < b.prefix : a.j < b.j;
    });
    std::string out = "family,p,n,m,depth," + census_csv_header() + ",optimal\n";
    for (const OutRow& r : emitted) out += r.text + "\n";
    for (const std::string& s : skipped) out += s + "\n";
    emit(out_path, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"towerlab: explicit towers of function fields over finite fields"};
    app.require_subcommand(1);

    std::string spec_path, grid_path, out_path, format = "csv";
    int depth = 3, level = 2, precision = 32;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_spec) {
        if (needs_spec) cmd->add_option("--spec", spec_path, "tower spec file")->required();
        cmd->add_option("--out", out_path, "write the report to this path");
        cmd->add_option("--precision", precision, "initial Laurent window width");
        cmd->add_option("--seed", seed, "seed for randomized property tooling");
    };

    CLI::App* build = app.add_subcommand("build", "validate a tower to a given depth");
    add_common(build, true);
    build->add_option("--depth", depth, "number of levels");

    CLI::App* count = app.add_subcommand("count", "count degree-one places per level");
    add_common(count, true);
    count->add_option("--depth", depth, "number of levels");
    count->add_option("--format", format, "csv or text")
        ->check(CLI::IsMember({"csv", "text"}));

    CLI::App* classify = app.add_subcommand("classify", "classify level-1 places");
    add_common(classify, true);
    classify->add_option("--level", level, "target level (2)");

    CLI::App* genus = app.add_subcommand("genus", "exact level-2 genus via Hurwitz");
    add_common(genus, true);

    CLI::App* subext = app.add_subcommand("subext", "split the first step's additive form");
    add_common(subext, true);

    CLI::App* census = app.add_subcommand("census", "run a family parameter grid");
    add_common(census, false);
    census->add_option("--grid", grid_path, "census grid file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) return cmd_build(spec_path, depth);
        if (count->parsed()) return cmd_count(spec_path, depth, format, out_path);
        if (classify->parsed()) return cmd_classify(spec_path, level, precision, out_path);
        if (genus->parsed()) return cmd_genus(spec_path, out_path);
        if (subext->parsed()) return cmd_subext(spec_path, out_path);
        if (census->parsed()) return cmd_census(grid_path, out_path);
    } catch (const towerlab::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 4;
    } catch (const towerlab::ScaleExceeded& e) {
        std::cerr << "scale guard: " << e.what() << "\n";
        return 3;
    } catch (const towerlab::Error& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
