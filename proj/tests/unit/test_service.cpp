// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>
#include <httplib.h>

#include "crag/kg/service.hpp"
#include "paths.hpp"

using namespace crag;
using namespace crag::kg;

namespace {

const KgDatabase& fixture() {
    static const auto db = load_kg(testing::data_path("kg/movie_fixture.json"));
    return db;
}

}  // namespace

TEST_CASE("request handler mirrors coarse_get") {
    bool ok = false;
    auto out = handle_coarse_request(fixture(), R"({"call": "movie_info", "key": "rain man"})", ok);
    CHECK(ok);
    CHECK(out == to_json(coarse_get(fixture(), CoarseCall::movie_info, std::string("rain man"))));

    out = handle_coarse_request(fixture(), R"({"call": "year_info", "key": 1950})", ok);
    CHECK(ok);
    CHECK(out["found"] == false);
}

TEST_CASE("malformed requests are bad_request") {
    for (const char* body : {"{not json", "[]", R"({"call": "movie_info"})", R"({"call": "fly", "key": "x"})",
                             R"({"call": "year_info", "key": "1988"})", R"({"call": "movie_info", "key": 1.5})"}) {
        bool ok = true;
        auto out = handle_coarse_request(fixture(), body, ok);
        CHECK_FALSE(ok);
        CHECK(out["error"]["code"] == "bad_request");
    }
}

TEST_CASE("service over HTTP stays up after a bad request") {
    KgService svc(fixture());
    svc.start("127.0.0.1", 0);
    httplib::Client client("127.0.0.1", svc.port());

    auto bad = client.Post("/coarse", "{oops", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    CHECK(nlohmann::json::parse(bad->body)["error"]["code"] == "bad_request");

    auto good = client.Post("/coarse", R"({"call": "person_info", "key": "walt becker"})", "application/json");
    REQUIRE(good);
    CHECK(good->status == 200);
    CHECK(nlohmann::json::parse(good->body) ==
          to_json(coarse_get(fixture(), CoarseCall::person_info, std::string("walt becker"))));

    auto absent = client.Post("/", R"({"call": "year_info", "key": 1931})", "application/json");
    REQUIRE(absent);
    CHECK(nlohmann::json::parse(absent->body)["found"] == false);
    svc.stop();
}

TEST_CASE("binding an unresolvable host fails") {
    KgService svc(fixture());
    CHECK_THROWS_AS(svc.start("256.256.256.256", 0), ServiceError);
}
