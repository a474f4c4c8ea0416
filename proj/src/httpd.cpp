#include "tgdb/httpd.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

#include "httplib.h"
#include "tgdb/parser.hpp"

namespace tgdb {

using nlohmann::json;

json value_json(const Value& v) {
    return std::visit(
        [](const auto& x) -> json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
            else if constexpr (std::is_same_v<T, Date>) return x.to_string();
            else if constexpr (std::is_same_v<T, Currency>) return json{{"amount", x.amount}, {"code", x.code}};
            else if constexpr (std::is_same_v<T, Record>) {
                json o = json::object();
                for (const auto& [k, fv] : *x.fields) o[k] = value_json(fv);
                return o;
            } else return x;
        },
        v.storage());
}

namespace {

json properties(const Row& r, bool edge) {
    json o = json::object();
    for (const auto& [k, v] : r.values) {
        if (edge && (k == kLeavingColumn || k == kArrivingColumn)) continue;
        o[k] = value_json(v);
    }
    return o;
}

HttpResponse error(int status, const std::string& message) {
    return {status, json{{"error", message}}.dump()};
}

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t i = s.find(sep, start);
        out.emplace_back(s.substr(start, i == std::string_view::npos ? s.npos : i - start));
        if (i == std::string_view::npos) break;
        start = i + 1;
    }
    return out;
}

std::string decode(const std::string& s) { return httplib::detail::decode_url(s, false); }

}  // namespace

json graph_json(const Snapshot& snap, Uid anchor, std::optional<std::size_t> depth) {
    const GraphComponent& comp = snap.graphs().component_of(anchor);
    std::set<Uid> nodes(comp.nodes.begin(), comp.nodes.end());
    std::set<Uid> edges(comp.edges.begin(), comp.edges.end());
    if (depth) {
        std::set<Uid> reached{anchor};
        std::set<Uid> used;
        std::deque<std::pair<Uid, std::size_t>> queue{{anchor, 0}};
        while (!queue.empty()) {
            auto [n, d] = queue.front();
            queue.pop_front();
            if (d == *depth) continue;
            auto visit = [&](Uid e, Uid other) {
                used.insert(e);
                if (reached.insert(other).second) queue.emplace_back(other, d + 1);
            };
            for (Uid e : snap.out_edges(n)) visit(e, snap.endpoints(e)->arriving);
            for (Uid e : snap.in_edges(n)) visit(e, snap.endpoints(e)->leaving);
        }
        nodes = std::move(reached);
        edges = std::move(used);
    }

    const Catalog& cat = snap.catalog();
    json doc;
    doc["anchor"] = anchor;
    doc["representative"] = comp.representative;
    doc["nodes"] = json::array();
    doc["edges"] = json::array();
    for (Uid n : nodes) {
        const Row& r = *snap.row(n);
        doc["nodes"].push_back({{"uid", n},
                                {"type", cat.get(r.type).label},
                                {"key", value_json(snap.key_of(r))},
                                {"properties", properties(r, false)}});
    }
    for (Uid e : edges) {
        const Row& r = *snap.row(e);
        auto ends = *snap.endpoints(e);
        doc["edges"].push_back({{"uid", e},
                                {"type", cat.get(r.type).label},
                                {"leaving", value_json(r.value_or_null(kLeavingColumn))},
                                {"arriving", value_json(r.value_or_null(kArrivingColumn))},
                                {"leaving_uid", ends.leaving},
                                {"arriving_uid", ends.arriving},
                                {"properties", properties(r, true)}});
    }
    return doc;
}

HttpResponse handle_graph_request(const Database& db, std::string_view target) {
    std::size_t q = target.find('?');
    std::string_view path = target.substr(0, q);
    std::string_view query = q == std::string_view::npos ? std::string_view() : target.substr(q + 1);

    if (path.empty() || path.front() != '/') return error(400, "path must start with /");
    auto parts = split(path.substr(1), '/');
    if (parts.size() != 4)
        return error(400, "expected /{db}/{role}/{Type}/{COL}='{value}'");

    std::optional<std::size_t> depth;
    bool node_flag = false;
    if (!query.empty()) {
        for (const auto& p : split(query, '&')) {
            if (p == "NODE") {
                node_flag = true;
            } else if (p.rfind("depth=", 0) == 0) {
                const std::string n = p.substr(6);
                if (n.empty() || !std::all_of(n.begin(), n.end(), ::isdigit) || n.size() > 9)
                    return error(400, "depth must be a non-negative integer");
                depth = std::stoul(n);
            } else {
                return error(400, "unsupported query flag " + p);
            }
        }
    }
    if (!node_flag) return error(400, "the ?NODE flag is required");

    if (decode(parts[0]) != db.name()) return error(404, "unknown database " + decode(parts[0]));
    // The role segment is accepted and ignored.
    std::string type_name = decode(parts[2]);
    std::string selector = decode(parts[3]);
    std::size_t eq = selector.find('=');
    if (eq == std::string::npos || eq == 0) return error(400, "expected {COL}='{value}'");
    std::string column = selector.substr(0, eq);
    std::string literal = selector.substr(eq + 1);

    Value key;
    try {
        Expr e = parse_expression(literal);
        if (e.kind == Expr::Kind::Unary && e.name == "-" && e.args[0].kind == Expr::Kind::Literal)
            e = Expr::lit(e.args[0].literal.is_int() ? Value(-e.args[0].literal.as_int())
                                                     : Value(-e.args[0].literal.to_double()));
        if (e.kind != Expr::Kind::Literal) return error(400, "value must be a literal");
        key = e.literal;
    } catch (const Error& ex) {
        return error(400, std::string("bad value: ") + ex.what());
    }

    Snapshot snap = db.snapshot();
    const Catalog& cat = snap.catalog();
    const TypeDescriptor* td = cat.lookup_label(type_name, TypeKind::Node);
    if (!td) td = cat.lookup_label(upper(type_name), TypeKind::Node);
    if (!td) return error(404, "unknown node type " + type_name);
    if (!cat.effective_column(td->id, column)) {
        column = upper(column);
        if (!cat.effective_column(td->id, column))
            return error(404, "unknown column " + selector.substr(0, eq) + " in " + td->label);
    }
    auto hits = snap.index_lookup(td->id, column, key);
    if (hits.empty()) return error(404, "no " + td->label + " node with " + column + "=" + to_literal(key));
    return {200, graph_json(snap, hits.front(), depth).dump()};
}

struct HttpServer::Impl {
    httplib::Server server;
};

HttpServer::HttpServer(const Database& db) : impl_(std::make_unique<Impl>()) {
    impl_->server.Get(".*", [&db](const httplib::Request& req, httplib::Response& res) {
        HttpResponse r = handle_graph_request(db, req.target);
        res.status = r.status;
        res.set_content(r.body, "application/json");
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = impl_->server.bind_to_any_port(host);
    } else if (!impl_->server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0) throw Error("cannot bind HTTP port " + std::to_string(port));
    thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

void HttpServer::stop() {
    impl_->server.stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace tgdb
