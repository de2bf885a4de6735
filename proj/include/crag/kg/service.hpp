// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>

#include <nlohmann/json.hpp>

#include "crag/kg/store.hpp"

namespace crag::kg {

class ServiceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Handles one wire request {"call": str, "key": str|int}.
/// Returns {"found", "payload"} or {"error": {"code": "bad_request", ...}};
/// `ok` is set false for the error form.
nlohmann::json handle_coarse_request(const KgDatabase& db, std::string_view body, bool& ok);

/// HTTP front end for coarse_get. POST /coarse (or /) with a JSON body.
/// The database must outlive the service.
class KgService {
public:
    explicit KgService(const KgDatabase& db);
    ~KgService();

    KgService(const KgService&) = delete;
    KgService& operator=(const KgService&) = delete;

    /// Binds and starts serving on a background thread. Port 0 picks a free
    /// port. Throws ServiceError when the bind fails.
    void start(const std::string& host, int port);
    void stop();
    int port() const { return port_; }

    /// Blocks in the calling thread until stop() is called elsewhere.
    void serve_forever(const std::string& host, int port);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::thread worker_;
    int port_ = 0;
};

}  // namespace crag::kg
