// SPDX-License-Identifier: Apache-2.0
#include "crag/common/text.hpp"
#include "crag/kgql/parser.hpp"

namespace crag::kgql {
namespace {

bool is_bare_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto start = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    if (!start(s.front())) return false;
    for (char c : s)
        if (!start(c) && !(c >= '0' && c <= '9')) return false;
    return s != "None" && s != "ALL" && s != "AVG";
}

std::string format_key(std::string_view key) {
    return is_bare_identifier(key) ? std::string(key) : quote_string(key);
}

std::string format_conditions(const std::vector<Condition>& conds) {
    std::string out = "[";
    for (std::size_t i = 0; i < conds.size(); ++i) {
        if (i) out += ", ";
        out += format_condition(conds[i]);
    }
    return out + "]";
}

std::string format_arg(const Arg& a) {
    switch (a.kind) {
        case Arg::Kind::String: return quote_string(a.text);
        case Arg::Kind::None: return "None";
        case Arg::Kind::Star: return "*";
    }
    return "";
}

}  // namespace

std::string quote_string(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    return out + "\"";
}

std::string format_literal(const Literal& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return quote_string(*s);
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    return text::format_double(std::get<double>(v));
}

std::string format_condition(const Condition& c) {
    return std::string(to_string(c.op)) + "(" + format_key(c.key) + ", " + format_literal(c.value) + ")";
}

std::string format_statement(const Statement& st, const Dialect& dialect) {
    std::string out;
    if (st.modifiers.all) out += "ALL ";
    if (st.modifiers.avg) out += "AVG ";
    if (const auto* call = st.call()) {
        const auto* spec = dialect.find(call->function);
        out += spec ? std::string(spec->name) : std::string(to_string(call->function));
        out += "(";
        for (std::size_t i = 0; i < call->args.size(); ++i) {
            if (i) out += ", ";
            out += format_arg(call->args[i]);
        }
        if (!call->conditions.empty()) out += ", " + format_conditions(call->conditions);
        out += ")";
    } else {
        const auto& s = *st.sort();
        out += "sort(";
        out += s.conditions.empty() ? "None" : format_conditions(s.conditions);
        out += ", ";
        if (s.descending) out += "-";
        out += format_key(s.key);
        out += ")";
    }
    if (st.projection) out += "[" + quote_string(st.projection->key) + "]";
    if (st.modifiers.slice) out += "[:" + std::to_string(*st.modifiers.slice) + "]";
    return out;
}

std::string format_program(const QueryProgram& program, const Dialect& dialect) {
    std::string out;
    for (std::size_t i = 0; i < program.statements.size(); ++i) {
        if (i) out += "\n";
        out += format_statement(program.statements[i], dialect);
    }
    return out;
}

}  // namespace crag::kgql
