// SPDX-License-Identifier: Apache-2.0
#include "crag/kgql/ast.hpp"

namespace crag::kgql {

const FunctionSpec* Dialect::find(std::string_view name) const {
    for (const auto& f : functions)
        if (f.name == name) return &f;
    return nullptr;
}

const FunctionSpec* Dialect::find(ApiFunction fn) const {
    for (const auto& f : functions)
        if (f.function == fn) return &f;
    return nullptr;
}

const Dialect& movie_dialect() {
    static const Dialect dialect{{
        {"get_person", ApiFunction::get_person, 1},
        {"get_movie", ApiFunction::get_movie, 1},
        {"get_movie_person_cast", ApiFunction::get_movie_person_cast, 2},
        {"get_movie_person_crew", ApiFunction::get_movie_person_crew, 2},
        {"get_movie_person_oscar", ApiFunction::get_movie_person_oscar, 2},
    }};
    return dialect;
}

std::string_view to_string(ApiFunction f) {
    switch (f) {
        case ApiFunction::get_person: return "get_person";
        case ApiFunction::get_movie: return "get_movie";
        case ApiFunction::get_movie_person_cast: return "get_movie_person_cast";
        case ApiFunction::get_movie_person_crew: return "get_movie_person_crew";
        case ApiFunction::get_movie_person_oscar: return "get_movie_person_oscar";
    }
    return "";
}

std::string_view to_string(CmpOp op) {
    switch (op) {
        case CmpOp::eq: return "eq";
        case CmpOp::neq: return "neq";
        case CmpOp::ge: return "ge";
        case CmpOp::le: return "le";
    }
    return "";
}

std::optional<CmpOp> parse_cmp_op(std::string_view name) {
    if (name == "eq") return CmpOp::eq;
    if (name == "neq") return CmpOp::neq;
    if (name == "ge") return CmpOp::ge;
    if (name == "le") return CmpOp::le;
    return std::nullopt;
}

}  // namespace crag::kgql
