// SPDX-License-Identifier: Apache-2.0
#include "crag/kgql/exec.hpp"

#include <algorithm>
#include <set>

#include "crag/common/text.hpp"
#include "crag/kgql/parser.hpp"

namespace crag::kgql {
namespace {

using kg::KgDatabase;
using kg::StringList;

std::string oscar_descriptor(const kg::OscarRow& o) {
    return std::to_string(o.year) + " " + o.category + " for " + o.movie + " (" +
           (o.winner ? "won" : "nominated") + ")";
}

Record person_record(const KgDatabase& db, const kg::PersonRow& p) {
    Record r = p.attributes;
    StringList awards;
    for (auto i : p.oscar_awards) awards.push_back(oscar_descriptor(db.oscar()[i]));
    r["name"] = p.name;
    r["birthday"] = p.birthday;
    r["acted_movies"] = p.acted_movies;
    r["directed_movies"] = p.directed_movies;
    r["oscar_awards"] = std::move(awards);
    return r;
}

// Scalar movie columns; the list back-references are added only for the
// plain movie view.
Record movie_columns(const kg::MovieRow& m) {
    Record r = m.attributes;
    r["title"] = m.title;
    r["release_date"] = m.release_date;
    r["original_title"] = m.original_title;
    r["original_language"] = m.original_language;
    r["budget"] = m.budget;
    r["revenue"] = m.revenue;
    r["rating"] = m.rating;
    r["genres"] = m.genres;
    r["year"] = m.year;
    return r;
}

Record movie_record(const KgDatabase& db, const kg::MovieRow& m) {
    Record r = movie_columns(m);
    StringList awards, cast, crew;
    for (auto i : m.oscar_awards) awards.push_back(oscar_descriptor(db.oscar()[i]));
    for (auto i : m.cast) cast.push_back(db.cast()[i].name);
    for (auto i : m.crew) crew.push_back(db.crew()[i].name);
    r["oscar_awards"] = std::move(awards);
    r["cast"] = std::move(cast);
    r["crew"] = std::move(crew);
    return r;
}

// Link row fields win over movie columns, which win over person columns.
void merge_under(Record& base, const Record& lower) {
    for (const auto& [k, v] : lower) base.emplace(k, v);
}

void merge_person(Record& base, const kg::PersonRow* p) {
    if (!p) return;
    Record pr = p->attributes;
    pr["name"] = p->name;
    pr["birthday"] = p->birthday;
    merge_under(base, pr);
}

std::string describe_value(const Value& v) { return v.is_null() ? "unknown" : v.to_text(); }

std::string describe_literal(const Literal& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    return text::format_double(std::get<double>(v));
}

std::string_view op_symbol(CmpOp op) {
    switch (op) {
        case CmpOp::eq: return "=";
        case CmpOp::neq: return "!=";
        case CmpOp::ge: return ">=";
        case CmpOp::le: return "<=";
    }
    return "";
}

std::string where_clause(const std::vector<Condition>& conds) {
    if (conds.empty()) return {};
    std::vector<std::string> parts;
    for (const auto& c : conds)
        parts.push_back(c.key + " " + std::string(op_symbol(c.op)) + " " + describe_literal(c.value));
    return " where " + text::join(parts, " and ");
}

Value literal_value(const Literal& lit) {
    if (const auto* s = std::get_if<std::string>(&lit)) return Value(*s);
    if (const auto* b = std::get_if<bool>(&lit)) return Value(*b);
    return Value(std::get<double>(lit));
}

bool compare_scalar(const Value& field, const Value& lit, CmpOp op, const std::string& key) {
    auto fn = field.as_number();
    auto ln = lit.as_number();
    if (op == CmpOp::eq || op == CmpOp::neq) {
        bool equal = (fn && ln) ? *fn == *ln
                                : text::normalize_key(field.to_text()) == text::normalize_key(lit.to_text());
        return op == CmpOp::eq ? equal : !equal;
    }
    int cmp = 0;
    if (fn && ln) {
        cmp = *fn < *ln ? -1 : (*fn > *ln ? 1 : 0);
    } else {
        auto ft = field.to_text();
        auto lt = lit.to_text();
        if (!text::is_date_like(ft) || !text::is_date_like(lt))
            throw ExecError(ExecError::Kind::type_mismatch,
                            "cannot order '" + key + "' value '" + ft + "' against '" + lt + "'");
        cmp = ft.compare(lt);
    }
    return op == CmpOp::ge ? cmp >= 0 : cmp <= 0;
}

// Total order for sorting: numbers before text, text compared lowercased.
int compare_for_sort(const Value& a, const Value& b) {
    auto an = a.as_number();
    auto bn = b.as_number();
    if (an && bn) return *an < *bn ? -1 : (*an > *bn ? 1 : 0);
    if (an) return -1;
    if (bn) return 1;
    auto at = text::to_lower(a.to_text());
    auto bt = text::to_lower(b.to_text());
    return at < bt ? -1 : (at > bt ? 1 : 0);
}

const Value* field(const Record& r, std::string_view key) {
    auto it = r.find(key);
    if (it == r.end() || it->second.is_null()) return nullptr;
    return &it->second;
}

std::vector<std::string> schema_of(const std::vector<Record>& rows, std::initializer_list<const char*> base) {
    std::set<std::string> keys(base.begin(), base.end());
    for (const auto& r : rows)
        for (const auto& [k, v] : r) keys.insert(k);
    return {keys.begin(), keys.end()};
}

std::string quoted_list(const std::vector<std::string>& names) {
    std::vector<std::string> q;
    for (const auto& n : names) q.push_back("'" + n + "'");
    return text::join(q, ", ");
}

std::string link_label(ApiFunction f) {
    switch (f) {
        case ApiFunction::get_movie_person_cast: return "cast";
        case ApiFunction::get_movie_person_crew: return "crew";
        default: return "oscar awards";
    }
}

// Candidate values for one entity argument; nullopt means unconstrained.
struct ArgValues {
    bool unconstrained = false;
    std::vector<std::string> names;
};

class Executor {
public:
    explicit Executor(const KgDatabase& db) : db_(db) {}

    std::vector<ResultSet> run(const QueryProgram& program) {
        ExecutionContext ctx;
        for (std::size_t i = 0; i < program.statements.size(); ++i) {
            const auto& st = program.statements[i];
            ResultSet rs = st.is_sort() ? run_sort(st, ctx) : run_call(st, ctx);
            rs.source_statement = i;
            ctx.emitted.push_back(std::move(rs));
        }
        return std::move(ctx.emitted);
    }

private:
    ResultSet run_sort(const Statement& st, ExecutionContext& ctx) {
        if (ctx.emitted.empty() || ctx.emitted.back().matched.empty())
            throw ExecError(ExecError::Kind::empty_pipeline, "sort has no rows to consume");
        auto& prev = ctx.emitted.back();
        const auto& spec = *st.sort();
        auto rows = apply_sort(prev.matched, spec);
        ResultSet rs = project_and_aggregate(std::move(rows), prev.schema, st.projection, st.modifiers);
        rs.subject = prev.subject + where_clause(spec.conditions) + " sorted by " + spec.key +
                     (spec.descending ? " descending" : " ascending");
        prev.consumed = true;
        return rs;
    }

    ArgValues arg_values(const Arg& arg, kg::EntityTable table, const ExecutionContext& ctx) {
        ArgValues out;
        if (arg.kind == Arg::Kind::None) {
            out.unconstrained = true;
            return out;
        }
        std::vector<std::string> raw;
        if (arg.kind == Arg::Kind::String) {
            raw.push_back(arg.text);
        } else {
            const ResultSet* last = ctx.last_result();
            if (!last) throw ExecError(ExecError::Kind::empty_pipeline, "* used before any result");
            if (!last->projected() || last->aggregated)
                throw ExecError(ExecError::Kind::type_mismatch, "* needs a projected list result");
            for (const auto& v : last->presented_scalars()) {
                if (const auto* l = v.list()) raw.insert(raw.end(), l->begin(), l->end());
                else if (!v.is_null()) raw.push_back(v.to_text());
            }
        }
        for (const auto& r : raw) {
            auto resolved = kg::resolve_entity(db_, table, r);
            if (resolved && std::find(out.names.begin(), out.names.end(), *resolved) == out.names.end())
                out.names.push_back(*resolved);
        }
        return out;
    }

    ResultSet run_call(const Statement& st, const ExecutionContext& ctx) {
        const auto& call = *st.call();
        auto rows = view_rows(call.function, db_);
        auto schema = view_schema(call.function, db_);

        // Column each entity argument constrains, and the table it resolves against.
        std::vector<std::pair<std::string, kg::EntityTable>> slots;
        switch (call.function) {
            case ApiFunction::get_person: slots = {{"name", kg::EntityTable::person}}; break;
            case ApiFunction::get_movie: slots = {{"title", kg::EntityTable::movie}}; break;
            default: slots = {{"title", kg::EntityTable::movie}, {"name", kg::EntityTable::person}};
        }

        std::vector<ArgValues> values;
        bool unresolved = false;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            values.push_back(arg_values(call.args.at(i), slots[i].second, ctx));
            if (!values.back().unconstrained && values.back().names.empty()) unresolved = true;
        }

        // A row matches when every constrained slot holds one of that slot's
        // names; rows keep table order.
        std::vector<Record> matched;
        if (!unresolved) {
            for (auto& row : rows) {
                bool ok = true;
                for (std::size_t i = 0; i < slots.size() && ok; ++i) {
                    if (values[i].unconstrained) continue;
                    const Value* f = field(row, slots[i].first);
                    if (!f) {
                        ok = false;
                        break;
                    }
                    auto have = text::normalize_key(f->to_text());
                    ok = std::any_of(values[i].names.begin(), values[i].names.end(),
                                     [&](const std::string& n) { return text::normalize_key(n) == have; });
                }
                for (std::size_t c = 0; c < call.conditions.size() && ok; ++c)
                    ok = eval_condition(row, call.conditions[c]);
                if (ok) matched.push_back(std::move(row));
            }
        }

        ResultSet rs = project_and_aggregate(std::move(matched), schema, st.projection, st.modifiers);
        rs.subject = describe_call(call, values) + where_clause(call.conditions);
        return rs;
    }

    std::string describe_call(const ApiCall& call, const std::vector<ArgValues>& values) const {
        auto names_or_raw = [&](std::size_t i) {
            if (!values[i].names.empty()) return quoted_list(values[i].names);
            return quoted_list({call.args[i].kind == Arg::Kind::Star ? std::string("*") : call.args[i].text});
        };
        switch (call.function) {
            case ApiFunction::get_person:
                return values[0].unconstrained ? "all persons" : "person " + names_or_raw(0);
            case ApiFunction::get_movie:
                return values[0].unconstrained ? "all movies" : "movie " + names_or_raw(0);
            default: break;
        }
        std::vector<std::string> parts;
        if (!values[0].unconstrained) parts.push_back("movie " + names_or_raw(0));
        if (!values[1].unconstrained) parts.push_back("person " + names_or_raw(1));
        auto label = link_label(call.function);
        return parts.empty() ? label : label + " of " + text::join(parts, " and ");
    }

    const KgDatabase& db_;
};

}  // namespace

std::string_view ExecError::name(Kind k) {
    switch (k) {
        case Kind::unknown_key: return "unknown_key";
        case Kind::type_mismatch: return "type_mismatch";
        case Kind::empty_pipeline: return "empty_pipeline";
        case Kind::backend_miss: return "backend_miss";
    }
    return "";
}

std::span<const Value> ResultSet::presented_scalars() const {
    std::span<const Value> all(scalars);
    return take_first && !all.empty() ? all.first(1) : all;
}

std::span<const Record> ResultSet::presented_records() const {
    std::span<const Record> all(records);
    return take_first && !all.empty() ? all.first(1) : all;
}

bool ResultSet::same_rows(const ResultSet& o) const {
    return source_statement == o.source_statement && projected_key == o.projected_key &&
           aggregated == o.aggregated && records == o.records && scalars == o.scalars &&
           take_first == o.take_first;
}

std::vector<Record> view_rows(ApiFunction f, const KgDatabase& db) {
    std::vector<Record> rows;
    switch (f) {
        case ApiFunction::get_person:
            for (const auto& p : db.persons()) rows.push_back(person_record(db, p));
            return rows;
        case ApiFunction::get_movie:
            for (const auto& m : db.movies()) rows.push_back(movie_record(db, m));
            return rows;
        case ApiFunction::get_movie_person_cast:
            for (const auto& c : db.cast()) {
                Record r{{"movie_name", c.movie_name}, {"name", c.name}, {"character", c.character}, {"year", c.year}};
                merge_under(r, movie_columns(db.movies()[c.movie]));
                merge_person(r, db.find_person(c.name));
                rows.push_back(std::move(r));
            }
            return rows;
        case ApiFunction::get_movie_person_crew:
            for (const auto& c : db.crew()) {
                Record r{{"movie_name", c.movie_name}, {"name", c.name}, {"job", c.job}, {"year", c.year}};
                merge_under(r, movie_columns(db.movies()[c.movie]));
                merge_person(r, db.find_person(c.name));
                rows.push_back(std::move(r));
            }
            return rows;
        case ApiFunction::get_movie_person_oscar:
            for (const auto& o : db.oscar()) {
                Record r{{"year", o.year}, {"category", o.category}, {"name", o.name},
                         {"movie", o.movie}, {"movie_name", o.movie}, {"winner", o.winner}};
                merge_under(r, movie_columns(db.movies()[o.movie_index]));
                if (!o.name.empty()) merge_person(r, db.find_person(o.name));
                rows.push_back(std::move(r));
            }
            return rows;
    }
    return rows;
}

std::vector<std::string> view_schema(ApiFunction f, const KgDatabase& db) {
    auto rows = view_rows(f, db);
    switch (f) {
        case ApiFunction::get_person:
            return schema_of(rows, {"name", "birthday", "acted_movies", "directed_movies", "oscar_awards"});
        case ApiFunction::get_movie:
            return schema_of(rows, {"title", "release_date", "original_title", "original_language", "budget",
                                    "revenue", "rating", "genres", "year", "oscar_awards", "cast", "crew"});
        case ApiFunction::get_movie_person_cast:
            return schema_of(rows, {"movie_name", "name", "character", "year", "title", "release_date",
                                    "rating", "birthday"});
        case ApiFunction::get_movie_person_crew:
            return schema_of(rows, {"movie_name", "name", "job", "year", "title", "release_date", "rating",
                                    "birthday"});
        case ApiFunction::get_movie_person_oscar:
            return schema_of(rows, {"year", "category", "name", "movie", "movie_name", "winner", "title",
                                    "release_date", "rating"});
    }
    return {};
}

bool eval_condition(const Record& record, const Condition& condition) {
    const Value* f = field(record, condition.key);
    if (!f) return false;
    const Value lit = literal_value(condition.value);
    if (const auto* list = f->list()) {
        if (condition.op == CmpOp::neq) {
            for (const auto& e : *list)
                if (!compare_scalar(Value(e), lit, CmpOp::neq, condition.key)) return false;
            return true;
        }
        for (const auto& e : *list)
            if (compare_scalar(Value(e), lit, condition.op, condition.key)) return true;
        return false;
    }
    return compare_scalar(*f, lit, condition.op, condition.key);
}

std::vector<Record> apply_sort(std::vector<Record> rows, const SortSpec& spec) {
    std::vector<Record> kept;
    for (auto& r : rows) {
        bool ok = true;
        for (std::size_t c = 0; c < spec.conditions.size() && ok; ++c) ok = eval_condition(r, spec.conditions[c]);
        if (ok) kept.push_back(std::move(r));
    }
    std::stable_sort(kept.begin(), kept.end(), [&](const Record& a, const Record& b) {
        const Value* ka = field(a, spec.key);
        const Value* kb = field(b, spec.key);
        if (!ka) return false;
        if (!kb) return true;
        int c = compare_for_sort(*ka, *kb);
        return spec.descending ? c > 0 : c < 0;
    });
    return kept;
}

ResultSet project_and_aggregate(std::vector<Record> rows, const std::vector<std::string>& schema,
                                const std::optional<ProjectionSpec>& projection,
                                const ModifierSet& modifiers) {
    ResultSet rs;
    rs.schema = schema;
    if (projection && !projection->is_len() &&
        std::find(schema.begin(), schema.end(), projection->key) == schema.end())
        throw ExecError(ExecError::Kind::unknown_key, "no column '" + projection->key + "'");

    if (modifiers.avg) {
        if (!projection || projection->is_len())
            throw ExecError(ExecError::Kind::type_mismatch, "AVG needs a numeric column projection");
        if (rows.empty()) throw ExecError(ExecError::Kind::empty_pipeline, "AVG over no rows");
        double sum = 0.0;
        for (const auto& r : rows) {
            const Value* v = field(r, projection->key);
            auto n = (v && !v->is_list()) ? v->as_number() : std::nullopt;
            if (!n) throw ExecError(ExecError::Kind::type_mismatch, "AVG over non-numeric '" + projection->key + "'");
            sum += *n;
        }
        rs.projected_key = projection->key;
        rs.aggregated = true;
        rs.scalars.push_back(Value(sum / static_cast<double>(rows.size())));
    } else if (projection && projection->is_len()) {
        rs.projected_key = "len";
        rs.aggregated = true;
        rs.scalars.push_back(Value(static_cast<std::int64_t>(rows.size())));
    } else if (projection) {
        rs.projected_key = projection->key;
        for (const auto& r : rows) {
            const Value* v = field(r, projection->key);
            rs.scalars.push_back(v ? *v : Value{});
        }
        if (modifiers.slice && rs.scalars.size() > *modifiers.slice) rs.scalars.resize(*modifiers.slice);
        rs.take_first = !modifiers.all && !modifiers.slice;
    } else {
        rs.records = rows;
        if (modifiers.slice && rs.records.size() > *modifiers.slice) rs.records.resize(*modifiers.slice);
        rs.take_first = !modifiers.all && !modifiers.slice;
    }
    rs.matched = std::move(rows);
    return rs;
}

std::vector<ResultSet> execute_program(const QueryProgram& program, const KgDatabase& db) {
    return Executor(db).run(program);
}

std::string to_natural_language(const std::vector<ResultSet>& results, const QueryProgram& program) {
    std::vector<std::string> sentences;
    for (const auto& r : results) {
        if (r.consumed) continue;
        if (r.empty()) {
            std::string stmt = r.source_statement < program.statements.size()
                                   ? format_statement(program.statements[r.source_statement])
                                   : std::string("statement");
            sentences.push_back("No result found for " + stmt + ".");
            continue;
        }
        if (r.projected()) {
            std::vector<std::string> vals;
            for (const auto& v : r.presented_scalars()) vals.push_back(describe_value(v));
            std::string label = (r.aggregated && *r.projected_key != "len") ? "average " + *r.projected_key
                                                                           : *r.projected_key;
            sentences.push_back("The " + label + " of " + r.subject + " is " + text::join(vals, "; ") + ".");
        } else {
            std::vector<std::string> recs;
            for (const auto& rec : r.presented_records()) {
                std::vector<std::string> kv;
                for (const auto& [k, v] : rec) kv.push_back(k + ": " + describe_value(v));
                recs.push_back("(" + text::join(kv, ", ") + ")");
            }
            sentences.push_back("The record of " + r.subject + " is " + text::join(recs, "; ") + ".");
        }
    }
    return text::join(sentences, " ");
}

nlohmann::json to_json(const ResultSet& r) {
    nlohmann::json rows = nlohmann::json::array();
    if (r.projected()) {
        for (const auto& v : r.scalars) rows.push_back(kg::to_json(v));
    } else {
        for (const auto& rec : r.records) rows.push_back(kg::to_json(rec));
    }
    nlohmann::json j;
    j["statement"] = r.source_statement;
    j["projected_key"] = r.projected_key ? nlohmann::json(*r.projected_key) : nlohmann::json(nullptr);
    j["aggregated"] = r.aggregated;
    j["take_first"] = r.take_first;
    j["subject"] = r.subject;
    j["rows"] = std::move(rows);
    return j;
}

}  // namespace crag::kgql
