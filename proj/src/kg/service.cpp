// SPDX-License-Identifier: Apache-2.0
#include "crag/kg/service.hpp"

#include <httplib.h>

namespace crag::kg {
namespace {

nlohmann::json bad_request(const std::string& message) {
    return nlohmann::json{{"error", {{"code", "bad_request"}, {"message", message}}}};
}

}  // namespace

nlohmann::json handle_coarse_request(const KgDatabase& db, std::string_view body, bool& ok) {
    ok = false;
    nlohmann::json req;
    try {
        req = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        return bad_request(std::string("malformed JSON: ") + e.what());
    }
    if (!req.is_object() || !req.contains("call") || !req["call"].is_string() || !req.contains("key"))
        return bad_request("request must be {\"call\": string, \"key\": string|int}");
    auto call = parse_coarse_call(req["call"].get<std::string>());
    if (!call) return bad_request("unknown call '" + req["call"].get<std::string>() + "'");

    CoarseKey key;
    const auto& k = req["key"];
    if (k.is_string()) key = k.get<std::string>();
    else if (k.is_number_integer()) key = k.get<std::int64_t>();
    else return bad_request("key must be a string or an integer");

    try {
        auto resp = coarse_get(db, *call, key);
        ok = true;
        return to_json(resp);
    } catch (const std::invalid_argument& e) {
        return bad_request(e.what());
    }
}

struct KgService::Impl {
    explicit Impl(const KgDatabase& db) : db(db) {
        auto handler = [this](const httplib::Request& req, httplib::Response& res) {
            bool ok = false;
            auto out = handle_coarse_request(this->db, req.body, ok);
            res.status = ok ? 200 : 400;
            res.set_content(out.dump(), "application/json");
        };
        server.Post("/coarse", handler);
        server.Post("/", handler);
    }

    const KgDatabase& db;
    httplib::Server server;
};

KgService::KgService(const KgDatabase& db) : impl_(std::make_unique<Impl>(db)) {}

KgService::~KgService() { stop(); }

void KgService::start(const std::string& host, int port) {
    int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw ServiceError("cannot bind " + host + ":" + std::to_string(port));
    port_ = bound;
    worker_ = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
}

void KgService::serve_forever(const std::string& host, int port) {
    int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw ServiceError("cannot bind " + host + ":" + std::to_string(port));
    port_ = bound;
    impl_->server.listen_after_bind();
}

void KgService::stop() {
    if (impl_) impl_->server.stop();
    if (worker_.joinable()) worker_.join();
}

}  // namespace crag::kg
