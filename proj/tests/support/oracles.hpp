#pragma once
// Independent reference implementations used by unit tests and the
// acceptance runner: a generate-and-test enumerator for chain patterns and
// an offline union-find for graph components.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tgdb/matcher.hpp"
#include "tgdb/parser.hpp"
#include "tgdb/store.hpp"

namespace tgdb::testkit {

// ---- random typed graphs ----

struct RandomGraph {
    std::vector<Uid> nodes;
    std::vector<Uid> edges;
    std::vector<std::string> node_labels;
    std::vector<std::string> edge_labels;
};

// Node types A, B, C (under a common root N) and edge types R, S, T over N.
inline RandomGraph make_random_graph(Database& db, std::mt19937_64& rng, int max_nodes = 8,
                                     int max_edges = 12, int max_labels = 3) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    RandomGraph g;
    const char* nl[] = {"A", "B", "C"};
    const char* el[] = {"R", "S", "T"};
    int n_node_labels = pick(1, max_labels);
    int n_edge_labels = pick(1, max_labels);
    Transaction tx = db.begin();
    Catalog& cat = tx.mutable_catalog();
    cat.define_node_type("N", {});
    for (int i = 0; i < n_node_labels; ++i) {
        cat.define_node_type(nl[i], {}, std::string("N"));
        g.node_labels.push_back(nl[i]);
    }
    for (int i = 0; i < n_edge_labels; ++i) {
        tx.mutable_catalog().define_edge_type(el[i], {}, "N", "N");
        g.edge_labels.push_back(el[i]);
    }
    int n = pick(1, max_nodes);
    for (int i = 0; i < n; ++i) {
        TypeId t = tx.catalog().lookup_label(g.node_labels[pick(0, n_node_labels - 1)])->id;
        g.nodes.push_back(tx.insert_node(t, {}));
    }
    int m = pick(0, max_edges);
    for (int i = 0; i < m; ++i) {
        TypeId t = tx.catalog().lookup_label(g.edge_labels[pick(0, n_edge_labels - 1)])->id;
        Uid a = g.nodes[pick(0, n - 1)];
        Uid b = g.nodes[pick(0, n - 1)];
        g.edges.push_back(tx.insert_edge(t, a, b, {}));
    }
    db.commit(tx);
    return g;
}

// ---- random chain patterns ----

struct StepSpec {
    bool quantified = false;
    bool forward = true;
    std::optional<std::string> edge_label;
    std::string edge_alias;  // single edges only
    std::string head_alias;  // quantified body head, collects an array
    std::uint32_t min = 1;
    std::optional<std::uint32_t> max = 1;
    std::string quantifier_text;
    std::optional<std::string> node_label;
    std::string node_alias;
};

struct PatternSpec {
    RepetitionMode mode = RepetitionMode::None;
    std::optional<std::string> head_label;
    std::string head_alias = "X0";
    std::vector<StepSpec> steps;

    std::string text() const {
        std::string s = "MATCH ";
        if (mode == RepetitionMode::Trail) s += "TRAIL ";
        if (mode == RepetitionMode::Acyclic) s += "ACYCLIC ";
        auto node = [](const std::string& alias, const std::optional<std::string>& label) {
            return "(" + alias + (label ? ":" + *label : "") + ")";
        };
        auto edge = [](bool forward, const std::string& alias, const std::optional<std::string>& label) {
            std::string inner = alias + (label ? ":" + *label : "");
            return forward ? "-[" + inner + "]->" : "<-[" + inner + "]-";
        };
        s += node(head_alias, head_label);
        for (const auto& st : steps) {
            if (st.quantified)
                s += " [(" + st.head_alias + ")" + edge(st.forward, "", st.edge_label) + "()]" +
                     st.quantifier_text + " ";
            else
                s += edge(st.forward, st.edge_alias, st.edge_label);
            s += node(st.node_alias, st.node_label);
        }
        return s;
    }
};

inline PatternSpec make_random_pattern(const RandomGraph& g, RepetitionMode mode, std::mt19937_64& rng) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto maybe = [&](const std::vector<std::string>& labels) -> std::optional<std::string> {
        if (pick(0, 2) == 0) return labels[pick(0, static_cast<int>(labels.size()) - 1)];
        return std::nullopt;
    };
    PatternSpec p;
    p.mode = mode;
    p.head_label = maybe(g.node_labels);
    int len = pick(1, 3);
    for (int i = 1; i <= len; ++i) {
        StepSpec st;
        st.quantified = pick(0, 1) == 1;
        st.forward = pick(0, 1) == 1;
        st.edge_label = maybe(g.edge_labels);
        st.node_label = maybe(g.node_labels);
        st.node_alias = "X" + std::to_string(i);
        if (st.quantified) {
            st.head_alias = "Q" + std::to_string(i);
            switch (pick(0, 3)) {
                case 0: st.min = 0, st.max = 1, st.quantifier_text = "?"; break;
                case 1: st.min = 0, st.max = std::nullopt, st.quantifier_text = "*"; break;
                case 2: st.min = 1, st.max = std::nullopt, st.quantifier_text = "+"; break;
                default: st.min = 1, st.max = 2, st.quantifier_text = "{1,2}"; break;
            }
        } else {
            st.edge_alias = "E" + std::to_string(i);
        }
        p.steps.push_back(std::move(st));
    }
    return p;
}

// ---- generate-and-test enumeration ----

using OracleRow = std::map<std::string, std::string>;

class PatternOracle {
public:
    PatternOracle(const PatternSpec& p, const Snapshot& s) : p_(p), s_(s) {
        for (Uid e : s.all_edges()) {
            auto ends = *s.endpoints(e);
            edges_.push_back({e, ends.leaving, ends.arriving, s.catalog().get(s.row(e)->type).label});
        }
    }

    std::set<OracleRow> run() {
        for (Uid n : s_.all_nodes()) {
            if (!label_ok(n, p_.head_label)) continue;
            walk_nodes_ = {n};
            walk_edges_.clear();
            OracleRow row{{p_.head_alias, "n" + std::to_string(n)}};
            step(0, n, row);
        }
        return rows_;
    }

private:
    struct E {
        Uid uid, from, to;
        std::string label;
    };

    bool label_ok(Uid n, const std::optional<std::string>& label) const {
        return !label || s_.catalog().get(s_.row(n)->type).label == *label;
    }

    // Edges usable from `cur` for a step, with the node they lead to.
    std::vector<std::pair<Uid, Uid>> moves(Uid cur, const StepSpec& st) const {
        std::vector<std::pair<Uid, Uid>> out;
        for (const auto& e : edges_) {
            if (st.edge_label && e.label != *st.edge_label) continue;
            if (st.forward && e.from == cur) out.emplace_back(e.uid, e.to);
            if (!st.forward && e.to == cur) out.emplace_back(e.uid, e.from);
        }
        return out;
    }

    bool allowed(Uid edge, Uid next) const {
        if (p_.mode == RepetitionMode::Trail &&
            std::count(walk_edges_.begin(), walk_edges_.end(), edge))
            return false;
        if (p_.mode == RepetitionMode::Acyclic &&
            std::count(walk_nodes_.begin(), walk_nodes_.end(), next))
            return false;
        return true;
    }

    // Key of everything that decides what a search state can still emit.
    // Walks that reach the same state by a different order are pruned.
    std::string state_key(char tag, std::size_t i, Uid cur, const OracleRow& row,
                          const std::vector<Uid>* heads = nullptr) const {
        std::string k{tag};
        k += std::to_string(i) + ":" + std::to_string(cur) + "|";
        for (const auto& [a, v] : row) k += a + "=" + v + ";";
        if (heads) {
            k += "|h";
            for (Uid h : *heads) k += "," + std::to_string(h);
        }
        if (p_.mode == RepetitionMode::Trail) {
            std::set<Uid> es(walk_edges_.begin(), walk_edges_.end());
            k += "|e";
            for (Uid e : es) k += "," + std::to_string(e);
        }
        if (p_.mode == RepetitionMode::Acyclic) {
            std::set<Uid> ns(walk_nodes_.begin(), walk_nodes_.end());
            k += "|n";
            for (Uid n : ns) k += "," + std::to_string(n);
        }
        return k;
    }

    void step(std::size_t i, Uid cur, OracleRow& row) {
        if (!visited_.insert(state_key('s', i, cur, row)).second) return;
        if (i == p_.steps.size()) {
            rows_.insert(row);
            return;
        }
        const StepSpec& st = p_.steps[i];
        if (!st.quantified) {
            for (auto [e, next] : moves(cur, st)) {
                if (!allowed(e, next) || !label_ok(next, st.node_label)) continue;
                walk_edges_.push_back(e);
                walk_nodes_.push_back(next);
                row[st.edge_alias] = "e" + std::to_string(e);
                row[st.node_alias] = "n" + std::to_string(next);
                step(i + 1, next, row);
                row.erase(st.edge_alias);
                row.erase(st.node_alias);
                walk_edges_.pop_back();
                walk_nodes_.pop_back();
            }
            return;
        }
        std::vector<Uid> heads;
        repeat(i, cur, heads, row);
    }

    // One quantified step. Unbounded steps never start two iterations at
    // the same node.
    void repeat(std::size_t i, Uid cur, std::vector<Uid>& heads, OracleRow& row) {
        if (!visited_.insert(state_key('r', i, cur, row, &heads)).second) return;
        const StepSpec& st = p_.steps[i];
        auto count = static_cast<std::uint32_t>(heads.size());
        if (count >= st.min && label_ok(cur, st.node_label)) {
            std::string arr = "[";
            for (std::size_t k = 0; k < heads.size(); ++k) arr += (k ? "," : "") + ("n" + std::to_string(heads[k]));
            row[st.head_alias] = arr + "]";
            row[st.node_alias] = "n" + std::to_string(cur);
            step(i + 1, cur, row);
            row.erase(st.head_alias);
            row.erase(st.node_alias);
        }
        if (st.max && count >= *st.max) return;
        if (!st.max && std::count(heads.begin(), heads.end(), cur)) return;
        for (auto [e, next] : moves(cur, st)) {
            if (!allowed(e, next)) continue;
            heads.push_back(cur);
            walk_edges_.push_back(e);
            walk_nodes_.push_back(next);
            repeat(i, next, heads, row);
            walk_nodes_.pop_back();
            walk_edges_.pop_back();
            heads.pop_back();
        }
    }

    const PatternSpec& p_;
    const Snapshot& s_;
    std::vector<E> edges_;
    std::vector<Uid> walk_nodes_;
    std::vector<Uid> walk_edges_;
    std::set<OracleRow> rows_;
    std::set<std::string> visited_;
};

inline std::string encode(const BoundValue& v) {
    switch (v.kind) {
        case BoundValue::Kind::Node: return "n" + std::to_string(v.uid);
        case BoundValue::Kind::Edge: return "e" + std::to_string(v.uid);
        case BoundValue::Kind::Array: {
            std::string s = "[";
            for (std::size_t i = 0; i < v.elements().size(); ++i) s += (i ? "," : "") + encode(v.elements()[i]);
            return s + "]";
        }
        case BoundValue::Kind::Scalar: return "v" + to_literal(v.scalar);
    }
    return {};
}

inline std::set<OracleRow> matcher_rows(const std::string& text, const Snapshot& s) {
    Statement st = parse_statement(text);
    MatchOutput out = find_bindings(*st.as<MatchStmt>(), s);
    std::set<OracleRow> rows;
    for (const auto& r : out.rows) {
        OracleRow row;
        for (std::size_t i = 0; i < out.columns.size(); ++i) row[out.columns[i]] = encode(r[i]);
        rows.insert(std::move(row));
    }
    return rows;
}

// ---- union-find ----

struct Partition {
    std::map<Uid, std::set<Uid>> nodes;  // representative -> nodes
    std::map<Uid, std::set<Uid>> edges;  // representative -> edges

    bool operator==(const Partition&) const = default;
};

inline Partition union_find_partition(const Snapshot& s) {
    std::vector<Uid> nodes = s.all_nodes();
    std::map<Uid, Uid> parent;
    for (Uid n : nodes) parent[n] = n;
    auto find = [&](Uid x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (Uid e : s.all_edges()) {
        auto ends = *s.endpoints(e);
        Uid a = find(ends.leaving), b = find(ends.arriving);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    Partition p;
    std::map<Uid, Uid> rep;
    for (Uid n : nodes) {
        // Roots are always the smaller uid, so the root is the minimum.
        rep[n] = find(n);
        p.nodes[rep[n]].insert(n);
        p.edges[rep[n]];
    }
    for (Uid e : s.all_edges()) p.edges[rep[s.endpoints(e)->leaving]].insert(e);
    return p;
}

inline Partition registry_partition(const Snapshot& s) {
    Partition p;
    for (const auto& c : s.graphs().components()) {
        p.nodes[c.representative] = {c.nodes.begin(), c.nodes.end()};
        p.edges[c.representative] = {c.edges.begin(), c.edges.end()};
    }
    return p;
}

}  // namespace tgdb::testkit
