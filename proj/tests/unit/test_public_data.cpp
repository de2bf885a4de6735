// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>
#include <regex>

#include "crag/llm/client.hpp"
#include "crag/public_data/entity_index.hpp"
#include "crag/public_data/ingest.hpp"
#include "crag/public_data/routing.hpp"
#include "crag/web/scoring.hpp"
#include "paths.hpp"

using namespace crag;
using namespace crag::public_data;

namespace {

llm::ScriptedClient reply_always(const std::string& reply) { return llm::ScriptedClient({{"", reply, {}, false}}); }

struct Failing final : llm::GenerationClient {
    std::string generate(const std::vector<llm::Message>&, const llm::GenerationParams&) override {
        throw llm::GenerationError("down");
    }
};

std::vector<std::string> sentences(const std::string& paragraph) {
    static const std::regex boundary(R"((\.\"?) (?=The ))");
    std::vector<std::string> out;
    std::sregex_token_iterator it(paragraph.begin(), paragraph.end(), boundary, {-1, 1}), end;
    std::string cur;
    for (bool body = true; it != end; ++it, body = !body) {
        if (body) {
            cur = *it;
        } else {
            out.push_back(cur + it->str());
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

EntityIndex movie_index() {
    return EntityIndex({{Domain::movie, "rain man (1988)", "The title is \"Rain Man.\""},
                        {Domain::movie, "the notebook", "The title is \"The Notebook.\""},
                        {Domain::finance, "rain man", "finance doc"}});
}

}  // namespace

TEST_CASE("serialize_entity examples") {
    CHECK(serialize_entity({{"title", std::string("Rain Man")},
                            {"director", std::string("Barry Levinson")},
                            {"release year", std::string("1988")}}) ==
          "The title is \"Rain Man.\" The director is Barry Levinson. The release year is 1988.");
    CHECK(serialize_entity({{"director", std::string("Barry Levinson")}}) == "The director is Barry Levinson.");
    CHECK(serialize_entity({{"lead actors", std::vector<std::string>{"Dustin Hoffman", "Tom Cruise"}}}) ==
          "The lead actors are Dustin Hoffman and Tom Cruise.");
    CHECK(serialize_entity({{"genres", std::vector<std::string>{"drama"}}}) == "The genres is drama.");
    CHECK_THROWS_AS(serialize_entity({}), std::invalid_argument);
}

TEST_CASE("serialized paragraphs re-split into one sentence per attribute") {
    std::mt19937_64 rng(8);
    const char* names[] = {"title", "director", "release year", "genre", "label", "ticker"};
    const char* values[] = {"Rain Man", "1988", "Tom Cruise", "drama", "x.y", "A B C"};
    for (int i = 0; i < 300; ++i) {
        Attributes attrs;
        std::vector<std::string> expected;
        for (int n = 1 + rng() % 5; n > 0; --n) {
            std::string name = names[rng() % 6];
            if (rng() % 3 == 0) {
                if (name == "title") name = "genre";
                std::vector<std::string> list;
                for (int k = 1 + rng() % 3; k > 0; --k) list.push_back(values[rng() % 6]);
                std::string joined = list[0];
                for (std::size_t k = 1; k < list.size(); ++k) joined += " and " + list[k];
                std::string verb = list.size() > 1 ? " are " : " is ";
                expected.push_back("The " + name + verb + joined + ".");
                attrs.emplace_back(name, list);
            } else {
                std::string v = values[rng() % 6];
                expected.push_back(name == "title" ? "The title is \"" + v + ".\"" : "The " + name + " is " + v + ".");
                attrs.emplace_back(name, v);
            }
        }
        auto para = serialize_entity(attrs);
        CHECK(sentences(para) == expected);
    }
}

TEST_CASE("domain routing") {
    auto movie = reply_always("movie");
    auto basketball = reply_always("basketball");
    auto finance = reply_always("Finance.");
    auto open = reply_always("open");
    CHECK(classify_domain("who directed rain man?", movie) == Domain::movie);
    CHECK(classify_domain("who won?", basketball) == Domain::other);
    CHECK(classify_domain("pe ratio of msft?", finance) == Domain::finance);
    CHECK(classify_domain("anything", open) == Domain::other);
    Failing failing;
    bool degraded = false;
    CHECK(classify_domain("x", failing, &degraded) == Domain::other);
    CHECK(degraded);
    CHECK(domain_from_reply("  sports ") == Domain::sports);
    CHECK(domain_from_reply("music and movie") == Domain::music);
    CHECK(domain_from_reply("") == Domain::other);
}

TEST_CASE("entity extraction") {
    auto two = reply_always("a walk to remember && the notebook");
    CHECK(extract_entities("q", Domain::movie, two) == std::vector<std::string>{"a walk to remember", "the notebook"});
    auto idk = reply_always("i don't know");
    CHECK(extract_entities("q", Domain::movie, idk).empty());
    auto spaced = reply_always(" Rain Man ");
    CHECK(extract_entities("q", Domain::music, spaced) == std::vector<std::string>{"rain man"});
    CHECK(extract_entities("q", Domain::sports, spaced).empty());
    Failing failing;
    bool degraded = false;
    CHECK(extract_entities("q", Domain::movie, failing, &degraded).empty());
    CHECK(degraded);
    CHECK(entities_from_reply("a &&  && b") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("lookup levels") {
    EntityIndex exact_key({{Domain::movie, "rain man", "P"}});
    std::vector<std::string> rain{"rain man"};
    CHECK(lookup_paragraphs(rain, exact_key, Domain::movie, {MatchLevel::exact}) == std::vector<std::string>{"P"});

    auto idx = movie_index();
    CHECK(lookup_paragraphs(rain, idx, Domain::movie, {MatchLevel::exact}).empty());
    CHECK(lookup_paragraphs(rain, idx, Domain::movie, {MatchLevel::substring}) ==
          std::vector<std::string>{"The title is \"Rain Man.\""});
    CHECK(lookup_paragraphs(rain, idx, Domain::finance, {MatchLevel::exact}) ==
          std::vector<std::string>{"finance doc"});
    CHECK(lookup_paragraphs(rain, idx, Domain::sports, {MatchLevel::substring}).empty());

    std::vector<std::string> both{"rain man", "rain man (1988)", "  "};
    CHECK(lookup_paragraphs(both, idx, Domain::movie, {MatchLevel::substring}).size() == 1);

    CHECK_THROWS_AS(lookup_paragraphs(rain, idx, Domain::movie, {MatchLevel::embedding, 0.5}), ConfigError);
    web::HashedTfEmbedder emb;
    std::vector<std::string> notebook{"notebook the"};
    CHECK(lookup_paragraphs(notebook, idx, Domain::movie, {MatchLevel::embedding, 0.99}, &emb) ==
          std::vector<std::string>{"The title is \"The Notebook.\""});
    CHECK_THROWS_AS((MatchPolicy{MatchLevel::embedding, 0.0}.validate()), ConfigError);
    CHECK_THROWS_AS((MatchPolicy{MatchLevel::embedding, 1.5}.validate()), ConfigError);
}

TEST_CASE("exact matches are a subset of substring matches") {
    auto index = EntityIndex::load(testing::data_path("public/index.jsonl"));
    std::vector<std::string> keys;
    for (const auto& d : index.docs()) keys.push_back(d.key);
    std::mt19937_64 rng(6);
    for (int i = 0; i < 300; ++i) {
        std::vector<std::string> ents;
        for (int n = rng() % 4; n > 0; --n) {
            auto k = keys[rng() % keys.size()];
            auto cut = rng() % (k.size() + 1);
            ents.push_back(rng() % 2 ? k : k.substr(0, cut));
        }
        for (auto d : {Domain::movie, Domain::finance, Domain::music}) {
            auto ex = lookup_paragraphs(ents, index, d, {MatchLevel::exact});
            auto sub = lookup_paragraphs(ents, index, d, {MatchLevel::substring});
            for (const auto& p : ex) CHECK(std::find(sub.begin(), sub.end(), p) != sub.end());
            CHECK(sub == lookup_paragraphs(ents, index, d, {MatchLevel::substring}));
        }
    }
}

TEST_CASE("default policies") {
    CHECK(default_policy(Domain::movie).level == MatchLevel::substring);
    CHECK(default_policy(Domain::music).level == MatchLevel::substring);
    CHECK(default_policy(Domain::finance).level == MatchLevel::exact);
    CHECK_FALSE(has_index(Domain::sports));
    CHECK_FALSE(has_index(Domain::other));
}

TEST_CASE("csv parsing") {
    CHECK(parse_csv("a,b\n1,2\n") == std::vector<std::vector<std::string>>{{"a", "b"}, {"1", "2"}});
    CHECK(parse_csv("a,\"x, \"\"y\"\"\nz\"\r\n") == std::vector<std::vector<std::string>>{{"a", "x, \"y\"\nz"}});
    CHECK(parse_csv("a,,b") == std::vector<std::vector<std::string>>{{"a", "", "b"}});
    CHECK(parse_csv("").empty());
}

TEST_CASE("bundled fixtures ingest to the committed index") {
    EntityIndex built;
    auto dir = testing::data_path("public");
    built.merge(EntityIndex(ingest_rows(Domain::movie, read_rows(dir / "movies.csv"), load_mapping(dir / "movies_mapping.json"))));
    built.merge(EntityIndex(ingest_rows(Domain::finance, read_rows(dir / "finance.json"), load_mapping(dir / "finance_mapping.json"))));
    built.merge(EntityIndex(ingest_rows(Domain::music, read_rows(dir / "music.csv"), load_mapping(dir / "music_mapping.json"))));
    auto committed = EntityIndex::load(dir / "index.jsonl");
    CHECK(built.docs() == committed.docs());

    testing::TempDir tmp("index");
    built.save(tmp.path() / "out.jsonl");
    CHECK(EntityIndex::load(tmp.path() / "out.jsonl").docs() == built.docs());
    for (const auto& d : committed.docs()) CHECK(entity_doc_from_json(to_json(d)) == d);
}

TEST_CASE("ingest rejects rows without a key") {
    IngestMapping m;
    m.key_column = "title";
    m.fields = {{"title", "title", std::nullopt}};
    std::vector<nlohmann::json> rows{{{"title", ""}}};
    CHECK_THROWS_AS(ingest_rows(Domain::movie, rows, m), std::runtime_error);
}
