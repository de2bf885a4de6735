// SPDX-License-Identifier: Apache-2.0
#include "generators.hpp"

#include <cmath>

#include "oracle.hpp"

namespace crag::testing {
namespace {

using kgql::ApiFunction;
using kgql::Arg;
using kgql::CmpOp;
using kgql::Condition;
using kgql::Literal;
using kgql::Statement;

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick_from(Rng& rng, const std::vector<T>& xs) {
    return xs[pick(rng, xs.size())];
}

void note(Coverage* cov, const std::string& label) {
    if (cov) ++(*cov)[label];
}

const std::vector<ApiFunction> kFunctions = {ApiFunction::get_person, ApiFunction::get_movie,
                                             ApiFunction::get_movie_person_cast, ApiFunction::get_movie_person_crew,
                                             ApiFunction::get_movie_person_oscar};
const std::vector<CmpOp> kOps = {CmpOp::eq, CmpOp::neq, CmpOp::ge, CmpOp::le};

std::string random_ident(Rng& rng) {
    static const std::string head = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
    static const std::string tail = head + "0123456789";
    std::string s(1, head[pick(rng, head.size())]);
    for (std::size_t n = pick(rng, 10); n > 0; --n) s.push_back(tail[pick(rng, tail.size())]);
    return s;
}

std::string random_string(Rng& rng, bool allow_empty) {
    static const std::vector<std::string> pieces = {
        "a", "b", "z", "Q", "0", "7", " ", "  ", "\"", "'", "\\", ";", ",", "(", ")", "[", "]", ":",
        "-", "*", "\n", "\t", "\r", "\xc3\xa9", "\xe4\xb8\xad", "None", "ALL", "true", "sort", "eq(", "#"};
    std::size_t n = pick(rng, 8) + (allow_empty ? 0 : 1);
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += pick_from(rng, pieces);
    return s;
}

std::string random_key(Rng& rng, Coverage* cov) {
    if (chance(rng, 0.6)) {
        note(cov, "key:bare");
        return random_ident(rng);
    }
    note(cov, "key:quoted");
    return random_string(rng, false);
}

double random_number(Rng& rng, Coverage* cov) {
    double v = 0.0;
    switch (pick(rng, 4)) {
        case 0: v = static_cast<double>(std::uniform_int_distribution<int>(0, 3000)(rng)); break;
        case 1: v = std::uniform_int_distribution<int>(0, 80)(rng) / 8.0; break;
        case 2: v = std::uniform_real_distribution<double>(0.0, 1.0)(rng); break;
        default:
            v = std::ldexp(std::uniform_real_distribution<double>(0.5, 1.0)(rng),
                           std::uniform_int_distribution<int>(-80, 120)(rng));
            note(cov, "num:exponent");
    }
    if (chance(rng, 0.3)) {
        note(cov, "num:negative");
        v = -v;
    }
    return v;
}

Literal random_literal(Rng& rng, Coverage* cov) {
    switch (pick(rng, 3)) {
        case 0: note(cov, "value:string"); return random_string(rng, true);
        case 1: note(cov, "value:number"); return random_number(rng, cov);
        default: note(cov, "value:bool"); return chance(rng, 0.5);
    }
}

std::vector<Condition> random_conditions(Rng& rng, std::size_t max, Coverage* cov) {
    std::vector<Condition> out;
    for (std::size_t n = pick(rng, max + 1); n > 0; --n) {
        Condition c;
        c.op = pick_from(rng, kOps);
        note(cov, "op:" + std::string(kgql::to_string(c.op)));
        c.key = random_key(rng, cov);
        c.value = random_literal(rng, cov);
        out.push_back(std::move(c));
    }
    note(cov, out.empty() ? "cond:none" : "cond:some");
    return out;
}

Arg random_arg(Rng& rng, Coverage* cov) {
    switch (pick(rng, 5)) {
        case 0: note(cov, "arg:none"); return Arg::none();
        case 1: note(cov, "arg:star"); return Arg::star();
        default: note(cov, "arg:string"); return Arg::string(random_string(rng, true));
    }
}

void random_tail(Rng& rng, Statement& st, Coverage* cov) {
    if (chance(rng, 0.3)) {
        st.modifiers.all = true;
        note(cov, "mod:all");
    }
    if (chance(rng, 0.2)) {
        st.modifiers.avg = true;
        note(cov, "mod:avg");
    }
    if (chance(rng, 0.6)) {
        if (chance(rng, 0.2)) {
            st.projection = kgql::ProjectionSpec{"len"};
            note(cov, "proj:len");
        } else {
            st.projection = kgql::ProjectionSpec{random_key(rng, cov)};
            note(cov, "proj:key");
        }
    }
    if (chance(rng, 0.25)) {
        st.modifiers.slice = 1 + pick(rng, 20);
        note(cov, "mod:slice");
    }
}

Statement random_call(Rng& rng, Coverage* cov) {
    kgql::ApiCall call;
    call.function = pick_from(rng, kFunctions);
    note(cov, "fn:" + std::string(kgql::to_string(call.function)));
    const auto* spec = kgql::movie_dialect().find(call.function);
    for (std::size_t i = 0; i < spec->entity_args; ++i) call.args.push_back(random_arg(rng, cov));
    call.conditions = random_conditions(rng, 3, cov);
    Statement st;
    st.body = std::move(call);
    random_tail(rng, st, cov);
    return st;
}

Statement random_sort(Rng& rng, Coverage* cov) {
    kgql::SortSpec s;
    s.conditions = random_conditions(rng, 2, cov);
    do {
        s.key = random_key(rng, cov);
    } while (s.key.front() == '-');
    s.descending = chance(rng, 0.5);
    note(cov, s.descending ? "sort:desc" : "sort:asc");
    Statement st;
    st.body = std::move(s);
    random_tail(rng, st, cov);
    return st;
}

// ---- fixture-driven programs ------------------------------------------------

struct FixtureView {
    std::vector<kg::Record> rows;
    std::vector<std::string> keys;
};

FixtureView view_of(ApiFunction f, const kg::KgDatabase& db) {
    FixtureView v;
    v.rows = oracle_rows(f, db);
    std::map<std::string, bool> seen;
    for (const auto& r : v.rows)
        for (const auto& kv : r) seen[kv.first] = true;
    for (const auto& kv : seen) v.keys.push_back(kv.first);
    return v;
}

std::string name_variant(Rng& rng, const std::string& name) {
    switch (pick(rng, 6)) {
        case 0: {
            std::string up = name;
            for (auto& c : up)
                if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
            return up;
        }
        case 1: return "  " + name + " ";
        case 2: {
            auto sp = name.find(' ');
            return sp == std::string::npos ? name : name.substr(sp + 1);
        }
        default: return name;
    }
}

Literal value_from(Rng& rng, const kg::Value& v) {
    if (auto* l = v.list()) {
        if (!l->empty() && chance(rng, 0.8)) return pick_from(rng, *l);
        return std::string("zzz");
    }
    if (auto n = v.as_number(); n && !std::holds_alternative<std::string>(v.storage())) {
        switch (pick(rng, 3)) {
            case 0: return *n;
            case 1: return *n + std::uniform_int_distribution<int>(-3, 3)(rng);
            default: return std::trunc(*n * 0.9);
        }
    }
    if (auto* b = std::get_if<bool>(&v.storage())) return chance(rng, 0.5) ? Literal(*b) : Literal(*b ? "true" : "false");
    auto t = v.to_text();
    if (chance(rng, 0.15)) {
        for (auto& c : t)
            if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    return t;
}

bool orderable(const Literal& v) {
    if (std::holds_alternative<double>(v)) return true;
    const auto* s = std::get_if<std::string>(&v);
    return s && s->size() >= 4 && (*s)[0] >= '0' && (*s)[0] <= '9';
}

Condition fixture_condition(Rng& rng, const FixtureView& view) {
    Condition c;
    if (chance(rng, 0.05)) {
        c.key = "no_such_field";
        c.value = std::string("x");
        return c;
    }
    const auto& row = pick_from(rng, view.rows);
    auto it = std::next(row.begin(), static_cast<std::ptrdiff_t>(pick(rng, row.size())));
    c.key = it->first;
    c.value = value_from(rng, it->second);
    // Ordered comparisons mostly on numbers and dates; a few ill-typed ones
    // keep the type_mismatch path covered.
    if (orderable(c.value) || chance(rng, 0.05)) c.op = pick_from(rng, kOps);
    else c.op = chance(rng, 0.7) ? CmpOp::eq : CmpOp::neq;
    return c;
}

std::optional<kgql::ProjectionSpec> fixture_projection(Rng& rng, const FixtureView& view) {
    double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (r < 0.15) return std::nullopt;
    if (r < 0.25) return kgql::ProjectionSpec{"len"};
    if (r < 0.28) return kgql::ProjectionSpec{"bogus_column"};
    return kgql::ProjectionSpec{pick_from(rng, view.keys)};
}

void fixture_modifiers(Rng& rng, Statement& st, const FixtureView& view) {
    st.modifiers.all = chance(rng, 0.4);
    if (chance(rng, 0.2)) st.modifiers.slice = 1 + pick(rng, 4);
    if (chance(rng, 0.1)) {
        static const std::vector<std::string> numeric = {"rating", "year", "budget", "revenue"};
        st.modifiers.avg = true;
        st.projection = kgql::ProjectionSpec{chance(rng, 0.85) ? pick_from(rng, numeric) : pick_from(rng, view.keys)};
    }
}

Statement fixture_call(Rng& rng, const kg::KgDatabase& db, ApiFunction f, bool star_ok) {
    auto view = view_of(f, db);
    kgql::ApiCall call;
    call.function = f;
    auto entity = [&](bool person) {
        double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        if (star_ok && r < 0.2) return Arg::star();
        if (r < 0.55) return Arg::none();
        if (r < 0.58) return Arg::string(person ? "nobody at all" : "no such film");
        std::string name = person ? pick_from(rng, db.persons()).name : pick_from(rng, db.movies()).title;
        return Arg::string(name_variant(rng, name));
    };
    if (f == ApiFunction::get_person) call.args = {entity(true)};
    else if (f == ApiFunction::get_movie) call.args = {entity(false)};
    else call.args = {entity(false), entity(true)};
    double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    for (std::size_t n = r < 0.45 ? 0 : (r < 0.85 ? 1 : 2); n > 0; --n)
        call.conditions.push_back(fixture_condition(rng, view));
    Statement st;
    st.body = std::move(call);
    st.projection = fixture_projection(rng, view);
    fixture_modifiers(rng, st, view);
    return st;
}

Statement fixture_sort(Rng& rng, const kg::KgDatabase& db, ApiFunction prev) {
    auto view = view_of(prev, db);
    kgql::SortSpec s;
    if (chance(rng, 0.3)) s.conditions.push_back(fixture_condition(rng, view));
    s.key = chance(rng, 0.9) ? pick_from(rng, view.keys) : std::string("no_such_field");
    s.descending = chance(rng, 0.5);
    Statement st;
    st.body = std::move(s);
    st.projection = fixture_projection(rng, view);
    fixture_modifiers(rng, st, view);
    return st;
}

}  // namespace

kgql::QueryProgram random_program(std::mt19937_64& rng, Coverage* coverage) {
    kgql::QueryProgram p;
    std::size_t n = 1 + pick(rng, 4);
    p.statements.push_back(random_call(rng, coverage));
    for (std::size_t i = 1; i < n; ++i)
        p.statements.push_back(chance(rng, 0.4) ? random_sort(rng, coverage) : random_call(rng, coverage));
    return p;
}

std::vector<std::string> grammar_labels() {
    std::vector<std::string> out;
    for (auto f : kFunctions) out.push_back("fn:" + std::string(kgql::to_string(f)));
    for (auto op : kOps) out.push_back("op:" + std::string(kgql::to_string(op)));
    for (const char* l : {"arg:none", "arg:star", "arg:string", "cond:none", "cond:some", "key:bare", "key:quoted",
                          "value:string", "value:number", "value:bool", "num:negative", "num:exponent", "mod:all",
                          "mod:avg", "mod:slice", "proj:len", "proj:key", "sort:asc", "sort:desc"})
        out.emplace_back(l);
    return out;
}

kgql::QueryProgram fixture_program(std::mt19937_64& rng, const kg::KgDatabase& db) {
    kgql::QueryProgram p;
    auto f = pick_from(rng, kFunctions);
    p.statements.push_back(fixture_call(rng, db, f, false));
    std::size_t extra = pick(rng, 3);
    for (std::size_t i = 0; i < extra; ++i) {
        if (chance(rng, 0.5)) {
            p.statements.push_back(fixture_sort(rng, db, f));
        } else {
            f = pick_from(rng, kFunctions);
            p.statements.push_back(fixture_call(rng, db, f, true));
        }
    }
    return p;
}

std::string random_text(std::mt19937_64& rng, std::size_t max_len) {
    static const std::vector<std::string> glyphs = {"\xc3\xa9", "\xe4\xb8\xad", "\xf0\x9f\x8e\xac", "\xc3\x9f"};
    const std::size_t n = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
    const std::size_t style = pick(rng, 4);
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
        double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        if (style == 1) {
            s.push_back(static_cast<char>('a' + pick(rng, 26)));
        } else if (style == 2 && r < 0.5) {
            s += pick_from(rng, std::vector<std::string>{" ", "\n", "\t", "  "}).front();
        } else if (r < 0.15) {
            s.push_back(' ');
        } else if (r < 0.18) {
            s.push_back('\n');
        } else if (r < 0.19) {
            s.push_back('\t');
        } else if (r < 0.23) {
            s += pick_from(rng, glyphs);
        } else {
            s.push_back(static_cast<char>('a' + pick(rng, 26)));
        }
    }
    return s;
}

}  // namespace crag::testing
