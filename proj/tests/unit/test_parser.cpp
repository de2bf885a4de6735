// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "crag/kgql/parser.hpp"
#include "generators.hpp"

using namespace crag::kgql;

namespace {

std::vector<TokenKind> kinds(const std::vector<Token>& toks) {
    std::vector<TokenKind> out;
    for (const auto& t : toks) out.push_back(t.kind);
    return out;
}

Condition cond(CmpOp op, std::string key, Literal v) { return Condition{op, std::move(key), std::move(v)}; }

}  // namespace

TEST_CASE("tokenize a comparison") {
    auto toks = tokenize("eq(year,2012)");
    CHECK(kinds(toks) == std::vector<TokenKind>{TokenKind::Ident, TokenKind::LParen, TokenKind::Ident,
                                                TokenKind::Comma, TokenKind::Number, TokenKind::RParen});
    CHECK(toks[0].text == "eq");
    CHECK(toks[2].text == "year");
    CHECK(toks[4].number == 2012.0);
}

TEST_CASE("tokenize sort with descending key and projection") {
    auto toks = tokenize("sort(None,-year)[\"movie_name\"]");
    CHECK(kinds(toks) == std::vector<TokenKind>{TokenKind::Ident, TokenKind::LParen, TokenKind::None,
                                                TokenKind::Comma, TokenKind::Minus, TokenKind::Ident,
                                                TokenKind::RParen, TokenKind::Projection});
    CHECK(toks[5].text == "year");
    CHECK(toks[7].text == "movie_name");
}

TEST_CASE("tokenize distinguishes every punctuation kind") {
    auto toks = tokenize("ALL AVG * ; [:3] [x]\n");
    CHECK(kinds(toks) == std::vector<TokenKind>{TokenKind::All, TokenKind::Avg, TokenKind::Star,
                                                TokenKind::Semicolon, TokenKind::Slice, TokenKind::Projection,
                                                TokenKind::Newline});
    CHECK(toks[4].count == 3);
}

TEST_CASE("unterminated string reports the opening quote") {
    try {
        tokenize("\"unclosed");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 0);
    }
    try {
        parse_program("get_movie(\"x\")\nget_movie('abc)");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 25);
    }
}

TEST_CASE("tokenizer is total over random bytes") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> byte(0, 255), len(0, 64);
    for (int i = 0; i < 5000; ++i) {
        std::string s;
        for (int n = len(rng); n > 0; --n) s.push_back(static_cast<char>(byte(rng)));
        try {
            for (const auto& t : tokenize(s)) CHECK(t.offset < s.size());
        } catch (const ParseError& e) {
            CHECK(e.offset() <= s.size());
        }
        try {
            parse_program(s);
        } catch (const ParseError& e) {
            CHECK(e.offset() <= s.size());
        }
    }
}

TEST_CASE("release date example") {
    auto p = parse_program("get_movie(\"greater meaning of water\")[\"release_date\"]");
    REQUIRE(p.statements.size() == 1);
    const auto* call = p.statements[0].call();
    REQUIRE(call);
    CHECK(call->function == ApiFunction::get_movie);
    CHECK(call->args == std::vector<Arg>{Arg::string("greater meaning of water")});
    CHECK(call->conditions.empty());
    CHECK(p.statements[0].projection == ProjectionSpec{"release_date"});
}

TEST_CASE("oscar example") {
    auto p = parse_program(
        "get_movie_person_oscar(None,None,[eq(year,2012),eq(category,\"best actor\"),eq(winner,\"true\")])[\"name\"]");
    REQUIRE(p.statements.size() == 1);
    const auto* call = p.statements[0].call();
    REQUIRE(call);
    CHECK(call->function == ApiFunction::get_movie_person_oscar);
    CHECK(call->args == std::vector<Arg>{Arg::none(), Arg::none()});
    CHECK(call->conditions == std::vector<Condition>{cond(CmpOp::eq, "year", 2012.0),
                                                     cond(CmpOp::eq, "category", std::string("best actor")),
                                                     cond(CmpOp::eq, "winner", std::string("true"))});
    CHECK(p.statements[0].projection == ProjectionSpec{"name"});
}

TEST_CASE("walt becker example and its canonical form") {
    const char* src = "get_movie_person_crew(None,\"walt becker\", eq(job, \"Director\")); sort(None,-year)[\"movie_name\"]";
    auto p = parse_program(src);
    REQUIRE(p.statements.size() == 2);
    const auto* call = p.statements[0].call();
    REQUIRE(call);
    CHECK(call->args == std::vector<Arg>{Arg::none(), Arg::string("walt becker")});
    CHECK(call->conditions == std::vector<Condition>{cond(CmpOp::eq, "job", std::string("Director"))});
    const auto* sort = p.statements[1].sort();
    REQUIRE(sort);
    CHECK(sort->descending);
    CHECK(sort->key == "year");
    CHECK(sort->conditions.empty());
    CHECK(p.statements[1].projection == ProjectionSpec{"movie_name"});

    auto text = format_program(p);
    CHECK(text == "get_movie_person_crew(None, \"walt becker\", [eq(job, \"Director\")])\nsort(None, -year)[\"movie_name\"]");
    CHECK(parse_program(text) == p);
}

TEST_CASE("single call formats to one line") {
    auto text = format_program(parse_program("get_person(\"tom cruise\")"));
    CHECK(text == "get_person(\"tom cruise\")");
    CHECK(text.find('\n') == std::string::npos);
    CHECK(text.find(';') == std::string::npos);
}

TEST_CASE("ALL with a slice survives formatting") {
    auto p = parse_program("ALL get_movie_person_cast(None, \"tom cruise\")[\"movie_name\"][:3]");
    CHECK(p.statements[0].modifiers.all);
    CHECK(p.statements[0].modifiers.slice == 3u);
    auto text = format_program(p);
    CHECK(text == "ALL get_movie_person_cast(None, \"tom cruise\")[\"movie_name\"][:3]");
    CHECK(parse_program(text) == p);
}

TEST_CASE("quoted and bare literals are the same") {
    auto a = parse_program("get_person(None, eq(gender,male))");
    auto b = parse_program("get_person(None, eq(gender,\"male\"))");
    CHECK(a == b);
    CHECK(parse_program("get_movie(rain_man)") == parse_program("get_movie(\"rain_man\")"));
    auto c = parse_program("get_movie_person_oscar(None, None, eq(winner, true))");
    CHECK(c.statements[0].call()->conditions[0].value == Literal(true));
}

TEST_CASE("prose lines are skipped") {
    const std::string prog = "get_movie_person_crew(None,\"walt becker\", eq(job, \"Director\"))\nsort(None,-year)[\"movie_name\"]";
    CHECK(parse_program("Answer:\n" + prog) == parse_program(prog));
    CHECK(parse_program("Here is the query.\n" + prog + "\nHope this helps!") == parse_program(prog));
}

TEST_CASE("newline and semicolon separate statements alike") {
    CHECK(parse_program("get_movie(\"a\"); get_movie(\"b\")") == parse_program("get_movie(\"a\")\nget_movie(\"b\")"));
}

TEST_CASE("modifiers, negative numbers and star") {
    auto p = parse_program("AVG ALL get_movie(*, [ge(rating, -1.5), le(year, 2e3)])[rating]");
    const auto& st = p.statements[0];
    CHECK(st.modifiers.avg);
    CHECK(st.modifiers.all);
    CHECK(st.call()->args == std::vector<Arg>{Arg::star()});
    CHECK(st.call()->conditions[0].value == Literal(-1.5));
    CHECK(st.call()->conditions[1].value == Literal(2000.0));
    CHECK(st.projection == ProjectionSpec{"rating"});
    CHECK(parse_program("get_movie(None)[\"len\"]").statements[0].projection->is_len());
}

TEST_CASE("quoted sort key with a leading minus is descending") {
    auto p = parse_program("get_movie(None)\nsort(None, \"-year\")");
    CHECK(p.statements[1].sort()->descending);
    CHECK(p.statements[1].sort()->key == "year");
}

TEST_CASE("parse errors") {
    auto offset_of = [](const std::string& src) -> std::optional<std::string> {
        try {
            parse_program(src);
        } catch (const ParseError& e) {
            return std::string(e.what());
        }
        return std::nullopt;
    };
    CHECK(offset_of("") == "empty program");
    CHECK(offset_of("just some prose") == "empty program");
    CHECK(offset_of("sort(None, year)") == "sort must follow an API call");
    auto arity = offset_of("get_movie_person_cast(\"rain man\")");
    REQUIRE(arity);
    CHECK(arity->find("get_movie_person_cast") != std::string::npos);
    CHECK(offset_of("get_movie(\"a\")[\"x\"][\"y\"]") == "duplicate projection");
    CHECK(offset_of("get_movie(\"a\")[:0]") == "slice bound must be at least 1");
    CHECK(offset_of("get_movie(\"a\", eq(, 1))"));
    CHECK(offset_of("get_movie(\"a\", like(x, 1))"));
}

TEST_CASE("round trip over generated programs") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        auto p = crag::testing::random_program(rng);
        auto text = format_program(p);
        INFO(text);
        CHECK(parse_program(text) == p);
    }
}
