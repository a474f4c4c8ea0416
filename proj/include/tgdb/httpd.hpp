#pragma once
// Read-only HTTP export of the graph component around an anchor node:
//   GET /{db}/{role}/{Type}/{COL}='{value}'?NODE[&depth=k]

#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include "tgdb/store.hpp"
#include "json.hpp"

namespace tgdb {

inline constexpr int kDefaultHttpPort = 8180;

struct HttpResponse {
    int status = 200;
    std::string body;  // always JSON
};

// JSON form of a value: numbers, strings, booleans, null; dates as ISO
// strings, currencies as {amount, code}, records as objects.
nlohmann::json value_json(const Value& v);

// {anchor, representative, nodes: [{uid, type, key, properties}],
//  edges: [{uid, type, leaving, arriving, leaving_uid, arriving_uid, properties}]}
// covering the anchor's component, or the part within `depth` hops of it.
nlohmann::json graph_json(const Snapshot& snap, Uid anchor, std::optional<std::size_t> depth = std::nullopt);

// Handles one request target (path plus query, still percent-encoded).
HttpResponse handle_graph_request(const Database& db, std::string_view target);

class HttpServer {
public:
    explicit HttpServer(const Database& db);
    ~HttpServer();

    // Binds and serves on a background thread; returns the bound port.
    int start(const std::string& host, int port);
    // Serves on the calling thread until stop().
    bool listen(const std::string& host, int port);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::thread thread_;
};

}  // namespace tgdb
