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

#ifndef TOWERLAB_SPECFILE_HPP
#define TOWERLAB_SPECFILE_HPP

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "towerlab/symmetry.hpp"
#include "towerlab/tower.hpp"

// Structured-text spec files.
//
// A tower file is a sequence of `key = value` lines plus `step { ... }`
// blocks. Comments run from `#` to end of line. Values:
//   - integers                          depth = 3
//   - identifiers                       kind = kummer
//   - dense polynomials                 rhs_num = [0,1,1,1]      (c0,c1,...)
//   - sparse polynomials                rhs_num = {3:1, 0:(1,1)} (deg:coeff)
//   - field elements                    alpha = 2   or   alpha = (0,1)
// Field elements are written as integers (prime-field residues) or as
// coefficient tuples over the prime field, constant coordinate first.
//
// Top-level keys: p (prime), n, optional q (subfield size, default p),
// optional label. Either one or more `step` blocks follow, or the family
// shortcut keys: family = A|B, m, a = [...], b = [...], r/s = [...].
// A step block carries kind = artin_schreier|kummer, k (Kummer), rhs_num,
// rhs_den (default [1]); an Artin-Schreier step may instead give alpha,
// which selects the all-split builder rhs 1/((t^{q^2}+t^q+t)^2 - alpha)
// for n = 3.
//
// A census grid file is a sequence of `row { ... }` blocks, each holding
// the family shortcut keys plus depth.

namespace towerlab {

namespace spectext {

/// One parsed coefficient: a prime-field residue or a coordinate tuple.
struct Coef {
    bool tuple = false;
    std::vector<std::int64_t> coords;  // single entry when not a tuple
};

/// A parsed right-hand side of `key = value`.
struct Value {
    enum class Kind { Int, Ident, List, Sparse };
    Kind kind = Kind::Int;
    std::int64_t num = 0;
    std::string ident;
    std::vector<Coef> list;  // dense polynomial or element list
    std::vector<std::pair<std::uint64_t, Coef>> sparse;
    int line = 0, column = 0;
};

struct KeyValue {
    std::string key;
    Value value;
    int line = 0, column = 0;
};

/// A named block such as `step { ... }` or `row { ... }`.
struct Block {
    std::string name;
    std::vector<KeyValue> entries;
    int line = 0, column = 0;
};

/// Whole-file parse result: top-level pairs plus blocks, in file order.
struct Document {
    std::vector<KeyValue> entries;
    std::vector<Block> blocks;
};

namespace detail {

class Cursor {
public:
    explicit Cursor(const std::string& text) : s_(text) {}

    void skip_blank() {
        for (;;) {
            while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
                advance();
            if (pos_ < s_.size() && s_[pos_] == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
                continue;
            }
            return;
        }
    }
    bool eof() {
        skip_blank();
        return pos_ >= s_.size();
    }
    char peek() {
        skip_blank();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of input", line_, col_);
        return s_[pos_];
    }
    void expect(char c) {
        if (peek() != c)
            throw ParseError(std::string("expected '") + c + "'", line_, col_);
        advance();
    }
    bool accept(char c) {
        if (eof() || s_[pos_] != c) return false;
        advance();
        return true;
    }
    std::string ident() {
        char c = peek();
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_')
            throw ParseError("expected identifier", line_, col_);
        std::string out;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            out += s_[pos_];
            advance();
        }
        return out;
    }
    std::int64_t integer() {
        char c = peek();
        bool neg = false;
        if (c == '-') {
            neg = true;
            advance();
            c = pos_ < s_.size() ? s_[pos_] : '\0';
        }
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ParseError("expected integer", line_, col_);
        std::int64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > (std::int64_t(1) << 50))
                throw ParseError("integer out of range", line_, col_);
            advance();
        }
        return neg ? -v : v;
    }
    int line() const { return line_; }
    int column() const { return col_; }

private:
    void advance() {
        if (pos_ >= s_.size()) return;
        if (s_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

inline Coef parse_coef(Cursor& cur) {
    Coef c;
    if (cur.accept('(')) {
        c.tuple = true;
        c.coords.push_back(cur.integer());
        while (cur.accept(',')) c.coords.push_back(cur.integer());
        cur.expect(')');
    } else {
        c.coords.push_back(cur.integer());
    }
    return c;
}

inline Value parse_value(Cursor& cur) {
    Value v;
    v.line = cur.line();
    v.column = cur.column();
    char c = cur.peek();
    if (c == '[') {
        cur.expect('[');
        v.kind = Value::Kind::List;
        if (!cur.accept(']')) {
            v.list.push_back(parse_coef(cur));
            while (cur.accept(',')) v.list.push_back(parse_coef(cur));
            cur.expect(']');
        }
    } else if (c == '{') {
        cur.expect('{');
        v.kind = Value::Kind::Sparse;
        if (!cur.accept('}')) {
            do {
                std::int64_t deg = cur.integer();
                if (deg < 0) throw ParseError("negative degree", cur.line(), cur.column());
                cur.expect(':');
                v.sparse.emplace_back(std::uint64_t(deg), parse_coef(cur));
            } while (cur.accept(','));
            cur.expect('}');
        }
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        v.kind = Value::Kind::Ident;
        v.ident = cur.ident();
    } else if (c == '(') {
        // a bare tuple element is a one-entry list
        v.kind = Value::Kind::List;
        v.list.push_back(parse_coef(cur));
    } else {
        v.kind = Value::Kind::Int;
        v.num = cur.integer();
    }
    return v;
}

}  // namespace detail

/// Parses the generic key/value + block structure; no semantics applied.
inline Document parse_document(const std::string& text) {
    detail::Cursor cur(text);
    Document doc;
    while (!cur.eof()) {
        int line = cur.line(), col = cur.column();
        std::string key = cur.ident();
        if (cur.accept('{')) {
            Block b;
            b.name = key;
            b.line = line;
            b.column = col;
            while (!cur.accept('}')) {
                KeyValue kv;
                kv.line = cur.line();
                kv.column = cur.column();
                kv.key = cur.ident();
                cur.expect('=');
                kv.value = detail::parse_value(cur);
                b.entries.push_back(std::move(kv));
            }
            doc.blocks.push_back(std::move(b));
        } else {
            cur.expect('=');
            KeyValue kv;
            kv.key = std::move(key);
            kv.line = line;
            kv.column = col;
            kv.value = detail::parse_value(cur);
            doc.entries.push_back(std::move(kv));
        }
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Semantic conversion
// ---------------------------------------------------------------------------

namespace detail {

inline FFElem coef_to_elem(const FieldCtx* ctx, const Coef& c, int line, int col) {
    if (!c.tuple) return ff_int(ctx, c.coords[0]);
    if (c.coords.size() > ctx->k())
        throw ParseError("tuple longer than the extension degree", line, col);
    std::vector<std::uint32_t> coords;
    coords.reserve(c.coords.size());
    std::int64_t p = ctx->p();
    for (std::int64_t x : c.coords) coords.push_back(std::uint32_t(((x % p) + p) % p));
    return FFElem(ctx, ctx->from_coords(coords));
}

inline UPoly value_to_poly(const FieldCtx* ctx, const Value& v) {
    if (v.kind == Value::Kind::List) {
        std::vector<FFElem> c;
        c.reserve(v.list.size());
        for (const Coef& t : v.list) c.push_back(coef_to_elem(ctx, t, v.line, v.column));
        return UPoly(ctx, std::move(c));
    }
    if (v.kind == Value::Kind::Sparse) {
        std::uint64_t deg = 0;
        for (const auto& [d, c] : v.sparse) deg = std::max(deg, d);
        if (deg > 4096) throw ParseError("polynomial degree too large", v.line, v.column);
        std::vector<FFElem> c(std::size_t(deg) + 1, ff_zero(ctx));
        for (const auto& [d, t] : v.sparse) c[std::size_t(d)] = coef_to_elem(ctx, t, v.line, v.column);
        return UPoly(ctx, std::move(c));
    }
    if (v.kind == Value::Kind::Int)
        return UPoly::constant(ff_int(ctx, v.num));
    throw ParseError("expected polynomial text", v.line, v.column);
}

inline FFElem value_to_elem(const FieldCtx* ctx, const Value& v) {
    if (v.kind == Value::Kind::Int) return ff_int(ctx, v.num);
    if (v.kind == Value::Kind::List && v.list.size() == 1 && v.list[0].tuple)
        return coef_to_elem(ctx, v.list[0], v.line, v.column);
    throw ParseError("expected a field element", v.line, v.column);
}

inline std::uint64_t value_to_uint(const Value& v, std::uint64_t lo, std::uint64_t hi) {
    if (v.kind != Value::Kind::Int || v.num < std::int64_t(lo) || std::uint64_t(v.num) > hi)
        throw ParseError("expected an integer in range", v.line, v.column);
    return std::uint64_t(v.num);
}

inline bool is_prime_u32(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/// Finds e with q = p^e, or 0 when q is not a power of p.
inline std::uint32_t power_exponent(std::uint64_t q, std::uint64_t p) {
    std::uint32_t e = 0;
    std::uint64_t t = 1;
    while (t < q) {
        t *= p;
        ++e;
    }
    return t == q ? e : 0;
}

/// The abelian all-split step: rhs = 1/((trace t)^2 - alpha), validated by
/// the builder so the step arrives certified.
inline StepSpec abelian_step(const FieldRef& field, std::uint32_t n, std::uint64_t q,
                             const FFElem& alpha) {
    const FieldCtx* ctx = field.get();
    NQFunction g(n, q, MultiPoly::constant(ctx, n, ff_one(ctx)));
    MultiPoly e1 = elementary_symmetric_nq(ctx, n, q, 1).num();
    NQFunction h(n, q, e1 * e1 - MultiPoly::constant(ctx, n, alpha));
    TowerSpec built = builder_as_tower(field, n, q, g, h, BuilderVariant::AllSplit);
    return built.steps.at(0);
}

}  // namespace detail

/// Builds a TowerSpec from parsed structured text.
inline TowerSpec tower_spec_from_document(const Document& doc) {
    std::uint64_t p = 0, q = 0;
    std::uint32_t n = 0;
    std::string label, family;
    std::uint32_t m = 0;
    const Value *a_val = nullptr, *b_val = nullptr, *e_val = nullptr;
    for (const KeyValue& kv : doc.entries) {
        if (kv.key == "p") p = detail::value_to_uint(kv.value, 2, 1u << 20);
        else if (kv.key == "q") q = detail::value_to_uint(kv.value, 2, 1u << 20);
        else if (kv.key == "n") n = std::uint32_t(detail::value_to_uint(kv.value, 1, 16));
        else if (kv.key == "m") m = std::uint32_t(detail::value_to_uint(kv.value, 1, 16));
        else if (kv.key == "label" && kv.value.kind == Value::Kind::Ident) label = kv.value.ident;
        else if (kv.key == "family" && kv.value.kind == Value::Kind::Ident) family = kv.value.ident;
        else if (kv.key == "a") a_val = &kv.value;
        else if (kv.key == "b") b_val = &kv.value;
        else if (kv.key == "r" || kv.key == "s") e_val = &kv.value;
        else throw ParseError("unknown key '" + kv.key + "'", kv.line, kv.column);
    }
    if (p == 0) throw ParseError("missing required key 'p'", 1, 1);
    if (!detail::is_prime_u32(p)) throw ParseError("p is not prime", 1, 1);
    if (n == 0) throw ParseError("missing required key 'n'", 1, 1);
    if (q == 0) q = p;
    std::uint32_t e = detail::power_exponent(q, p);
    if (e == 0) throw ParseError("q is not a power of p", 1, 1);

    if (!family.empty()) {
        if (family != "A" && family != "B")
            throw ParseError("family must be A or B", 1, 1);
        if (m == 0 || a_val == nullptr || b_val == nullptr || e_val == nullptr)
            throw ParseError("family shortcut needs m, a, b, and r or s", 1, 1);
        FamilyParams fp;
        fp.family = family[0];
        fp.p = std::uint32_t(p);
        fp.n = n;
        fp.m = m;
        fp.ctx = FieldCtx::make(std::uint32_t(p), n);
        if (a_val->kind != Value::Kind::List || b_val->kind != Value::Kind::List ||
            e_val->kind != Value::Kind::List)
            throw ParseError("a, b, r/s must be lists", 1, 1);
        for (const Coef& c : a_val->list)
            fp.a.push_back(detail::coef_to_elem(fp.ctx.get(), c, a_val->line, a_val->column));
        for (const Coef& c : b_val->list)
            fp.b.push_back(detail::coef_to_elem(fp.ctx.get(), c, b_val->line, b_val->column));
        for (const Coef& c : e_val->list) {
            if (c.tuple || c.coords[0] < 1)
                throw ParseError("exponents must be positive integers", e_val->line, e_val->column);
            fp.exps.push_back(std::uint64_t(c.coords[0]));
        }
        TowerSpec spec = fp.family == 'A' ? family_tower_a(fp) : family_tower_b(fp);
        if (!label.empty()) spec.label = label;
        return spec;
    }

    if (doc.blocks.empty()) throw ParseError("no step blocks and no family shortcut", 1, 1);
    TowerSpec spec;
    spec.ctx = FieldCtx::make(std::uint32_t(p), e * n);
    spec.q = q;
    spec.n = n;
    spec.label = label;
    const FieldCtx* ctx = spec.ctx.get();
    for (const Block& blk : doc.blocks) {
        if (blk.name != "step")
            throw ParseError("unknown block '" + blk.name + "'", blk.line, blk.column);
        std::string kind;
        std::uint64_t k = 0;
        const Value *num = nullptr, *den = nullptr, *alpha = nullptr;
        for (const KeyValue& kv : blk.entries) {
            if (kv.key == "kind" && kv.value.kind == Value::Kind::Ident) kind = kv.value.ident;
            else if (kv.key == "k") k = detail::value_to_uint(kv.value, 2, 1u << 20);
            else if (kv.key == "rhs_num") num = &kv.value;
            else if (kv.key == "rhs_den") den = &kv.value;
            else if (kv.key == "alpha") alpha = &kv.value;
            else throw ParseError("unknown step key '" + kv.key + "'", kv.line, kv.column);
        }
        if (kind == "kummer") {
            if (k == 0) throw ParseError("kummer step needs k", blk.line, blk.column);
            if (num == nullptr) throw ParseError("kummer step needs rhs_num", blk.line, blk.column);
            UPoly pn = detail::value_to_poly(ctx, *num);
            UPoly pd = den ? detail::value_to_poly(ctx, *den) : UPoly::constant(ff_one(ctx));
            spec.steps.push_back(make_kummer_step(k, RatFunc(std::move(pn), std::move(pd))));
        } else if (kind == "artin_schreier") {
            if (alpha != nullptr) {
                spec.steps.push_back(detail::abelian_step(
                    spec.ctx, n, q, detail::value_to_elem(ctx, *alpha)));
            } else {
                if (num == nullptr)
                    throw ParseError("artin_schreier step needs rhs_num or alpha",
                                     blk.line, blk.column);
                UPoly pn = detail::value_to_poly(ctx, *num);
                UPoly pd = den ? detail::value_to_poly(ctx, *den) : UPoly::constant(ff_one(ctx));
                spec.steps.push_back(make_as_step(ctx, q, n, RatFunc(std::move(pn), std::move(pd))));
            }
        } else {
            throw ParseError("step kind must be artin_schreier or kummer", blk.line, blk.column);
        }
    }
    return spec;
}

/// One row of a census grid file, kept textual until instantiation so that
/// invalid rows can be reported (and skipped) with a reason.
struct GridRow {
    std::string family;
    std::uint32_t p = 0, n = 0, m = 0;
    std::vector<Coef> a, b, exps;
    std::uint32_t depth = 0;
    int line = 0;

    FamilyParams to_params() const {
        if (family != "A" && family != "B") throw InvalidParams("family must be A or B");
        if (p < 2 || !detail::is_prime_u32(p)) throw InvalidParams("p must be prime");
        if (n == 0 || m == 0) throw InvalidParams("n and m are required");
        FamilyParams fp;
        fp.family = family[0];
        fp.p = p;
        fp.n = n;
        fp.m = m;
        fp.ctx = FieldCtx::make(p, n);
        for (const Coef& c : a) fp.a.push_back(detail::coef_to_elem(fp.ctx.get(), c, line, 1));
        for (const Coef& c : b) fp.b.push_back(detail::coef_to_elem(fp.ctx.get(), c, line, 1));
        for (const Coef& c : exps) {
            if (c.tuple || c.coords[0] < 1) throw InvalidParams("exponents must be positive");
            fp.exps.push_back(std::uint64_t(c.coords[0]));
        }
        fp.validate();
        return fp;
    }
};

/// Parses a census grid file: a sequence of `row { ... }` blocks.
inline std::vector<GridRow> census_grid_from_document(const Document& doc) {
    if (!doc.entries.empty())
        throw ParseError("grid files contain only row blocks",
                         doc.entries[0].line, doc.entries[0].column);
    std::vector<GridRow> rows;
    for (const Block& blk : doc.blocks) {
        if (blk.name != "row")
            throw ParseError("unknown block '" + blk.name + "'", blk.line, blk.column);
        GridRow row;
        row.line = blk.line;
        for (const KeyValue& kv : blk.entries) {
            if (kv.key == "family" && kv.value.kind == Value::Kind::Ident)
                row.family = kv.value.ident;
            else if (kv.key == "p") row.p = std::uint32_t(detail::value_to_uint(kv.value, 2, 1u << 20));
            else if (kv.key == "n") row.n = std::uint32_t(detail::value_to_uint(kv.value, 1, 16));
            else if (kv.key == "m") row.m = std::uint32_t(detail::value_to_uint(kv.value, 1, 16));
            else if (kv.key == "depth")
                row.depth = std::uint32_t(detail::value_to_uint(kv.value, 1, 16));
            else if (kv.key == "a" && kv.value.kind == Value::Kind::List) row.a = kv.value.list;
            else if (kv.key == "b" && kv.value.kind == Value::Kind::List) row.b = kv.value.list;
            else if ((kv.key == "r" || kv.key == "s") && kv.value.kind == Value::Kind::List)
                row.exps = kv.value.list;
            else throw ParseError("unknown row key '" + kv.key + "'", kv.line, kv.column);
        }
        if (row.depth == 0) row.depth = 3;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace spectext

/// Parses tower spec text directly into a validated-shape TowerSpec.
inline TowerSpec parse_tower_spec(const std::string& text) {
    return spectext::tower_spec_from_document(spectext::parse_document(text));
}

/// Loads a tower spec file from disk.
inline TowerSpec load_tower_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec file '" + path + "'", 0, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tower_spec(buf.str());
}

/// Parses census grid text.
inline std::vector<spectext::GridRow> parse_census_grid(const std::string& text) {
    return spectext::census_grid_from_document(spectext::parse_document(text));
}

/// Loads a census grid file from disk.
inline std::vector<spectext::GridRow> load_census_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open grid file '" + path + "'", 0, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_census_grid(buf.str());
}

}  // namespace towerlab

#endif  // TOWERLAB_SPECFILE_HPP
