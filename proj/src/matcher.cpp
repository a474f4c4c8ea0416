#include "tgdb/matcher.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_map>

namespace tgdb {

Bindings MatchOutput::binding(std::size_t row) const {
    Bindings b;
    for (std::size_t i = 0; i < columns.size(); ++i) b.emplace(columns[i], rows[row][i]);
    return b;
}

namespace {

enum class IdKind { Node, Edge, Value, Path };

class IdentifierCollector {
public:
    explicit IdentifierCollector(const Bindings& outer) : outer_(outer) {}

    void items(const std::vector<MatchItem>& items) {
        for (const auto& m : items) {
            if (m.path_alias) add(*m.path_alias, IdKind::Path);
            chain(m.chain);
        }
    }

    void chain(const MatchChain& c) {
        item(c.head, IdKind::Node);
        for (const auto& seg : c.tail) {
            if (const auto* e = std::get_if<EdgePattern>(&seg.link))
                item(e->item, IdKind::Edge);
            else
                chain(*std::get<PathPattern>(seg.link).body);
            item(seg.node, IdKind::Node);
        }
    }

    std::vector<std::string> order;

private:
    void item(const ItemPattern& p, IdKind k) {
        if (p.alias) add(*p.alias, k);
        for (const auto& [key, e] : p.doc)
            if (e.is_ident()) add(e.name, IdKind::Value);
    }

    void add(const std::string& name, IdKind k) {
        if (outer_.contains(name)) return;
        auto [it, fresh] = kinds_.emplace(name, k);
        if (fresh) {
            order.push_back(name);
            return;
        }
        bool clash = (it->second == IdKind::Node && k == IdKind::Edge) ||
                     (it->second == IdKind::Edge && k == IdKind::Node);
        if (clash) throw ExecutionError("identifier " + name + " is used both as a node and as an edge");
    }

    const Bindings& outer_;
    std::map<std::string, IdKind> kinds_;
};

// Identifiers a quantified body binds on its own (aliases and doc values).
void body_identifiers(const MatchChain& c, std::vector<std::string>& out) {
    auto item = [&](const ItemPattern& p) {
        if (p.alias && std::find(out.begin(), out.end(), *p.alias) == out.end()) out.push_back(*p.alias);
        for (const auto& [k, e] : p.doc)
            if (e.is_ident() && std::find(out.begin(), out.end(), e.name) == out.end())
                out.push_back(e.name);
    };
    item(c.head);
    for (const auto& seg : c.tail) {
        if (const auto* e = std::get_if<EdgePattern>(&seg.link))
            item(e->item);
        else
            body_identifiers(*std::get<PathPattern>(seg.link).body, out);
        item(seg.node);
    }
}

// The elements visited by one Match item, with the repetition-mode checks.
class Walk {
public:
    explicit Walk(RepetitionMode mode = RepetitionMode::None) : mode_(mode) {}

    bool push_node(Uid n) {
        if (closed_) return false;
        bool closing = false;
        if (seen(n)) {
            if (mode_ == RepetitionMode::Acyclic) return false;
            if (mode_ == RepetitionMode::Simple) {
                if (n != elems_.front() || edges_ == 0) return false;
                closing = true;
            }
        }
        push(n, false);
        if (closing) closed_ = true;
        return true;
    }

    bool push_edge(Uid e) {
        if (closed_) return false;
        if (seen(e) && mode_ == RepetitionMode::Trail) return false;
        push(e, true);
        ++edges_;
        return true;
    }

    void pop() {
        Uid u = elems_.back();
        if (--count_[u] == 0) count_.erase(u);
        if (is_edge_.back()) --edges_;
        closed_ = closed_hist_.back();
        elems_.pop_back();
        is_edge_.pop_back();
        closed_hist_.pop_back();
    }

    RepetitionMode mode() const { return mode_; }
    std::size_t size() const { return elems_.size(); }
    const std::vector<Uid>& elems() const { return elems_; }
    bool is_edge(std::size_t i) const { return is_edge_[i]; }

private:
    bool seen(Uid u) const { return count_.contains(u); }

    void push(Uid u, bool edge) {
        closed_hist_.push_back(closed_);
        elems_.push_back(u);
        is_edge_.push_back(edge);
        ++count_[u];
    }

    RepetitionMode mode_;
    std::vector<Uid> elems_;
    std::vector<bool> is_edge_;
    std::vector<bool> closed_hist_;
    std::unordered_map<Uid, int> count_;
    std::size_t edges_ = 0;
    bool closed_ = false;
};

using NodeK = std::function<void(Uid)>;

// Everything the rest of a quantified expansion depends on. Two iterations
// that reach the same state produce the same rows, so only the first one is
// explored.
struct ExpansionState {
    bool finished = false;
    std::uint32_t count = 0;
    Uid at = 0;
    std::vector<Uid> heads;  // sorted
    std::vector<Uid> walk;                   // sorted; empty unless the mode inspects it
    std::vector<std::vector<BoundValue>> acc;
};

int compare_values(const std::vector<BoundValue>& a, const std::vector<BoundValue>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (int c = compare_bound(a[i], b[i])) return c;
    return 0;
}

struct ExpansionStateLess {
    bool operator()(const ExpansionState& a, const ExpansionState& b) const {
        if (auto c = std::tie(a.finished, a.count, a.at, a.heads, a.walk) <=>
                     std::tie(b.finished, b.count, b.at, b.heads, b.walk);
            c != 0)
            return c < 0;
        if (a.acc.size() != b.acc.size()) return a.acc.size() < b.acc.size();
        for (std::size_t i = 0; i < a.acc.size(); ++i)
            if (int c = compare_values(a.acc[i], b.acc[i])) return c < 0;
        return false;
    }
};

class Matcher {
public:
    Matcher(const MatchStmt& stmt, const Snapshot& s, const Bindings& outer)
        : stmt_(stmt), s_(s), cat_(s.catalog()), scope_(outer) {
        IdentifierCollector ids(outer);
        ids.items(stmt.matches);
        out_.columns = ids.order;
        // Pruning repeated states is only sound when no row depends on the
        // order of the walk that produced it.
        memo_ = std::all_of(stmt.matches.begin(), stmt.matches.end(), [](const MatchItem& m) {
            return !m.path_alias && m.selection == SelectionMode::None &&
                   m.repetition != RepetitionMode::Simple;
        });
        lookup_ = [this](const std::string& name) -> const BoundValue* {
            auto it = scope_.find(name);
            return it == scope_.end() ? nullptr : &it->second;
        };
    }

    MatchOutput run() {
        auto less = [](const std::vector<BoundValue>& a, const std::vector<BoundValue>& b) {
            return compare_values(a, b) < 0;
        };
        std::set<std::vector<BoundValue>, decltype(less)> seen(less);
        SelectionMode sel = stmt_.matches.size() == 1 ? stmt_.matches.front().selection
                                                      : SelectionMode::None;

        std::vector<std::pair<std::vector<BoundValue>, std::vector<Uid>>> found;
        run_items(0, [&] {
            if (stmt_.where && !evaluate_predicate(*stmt_.where, lookup_, &s_)) return;
            std::vector<BoundValue> row;
            row.reserve(out_.columns.size());
            for (const auto& c : out_.columns) {
                auto it = scope_.find(c);
                row.push_back(it == scope_.end() ? BoundValue::of(Value()) : it->second);
            }
            // Without a selection filter, duplicates can be dropped right away.
            if (sel == SelectionMode::None && !seen.insert(row).second) return;
            found.emplace_back(std::move(row), walk_.elems());
        });
        if (sel == SelectionMode::None) {
            for (auto& [row, walk] : found) {
                out_.rows.push_back(std::move(row));
                out_.walks.push_back(std::move(walk));
            }
            return std::move(out_);
        }

        if (sel == SelectionMode::Shortest && !found.empty()) {
            auto edges = [](const std::vector<Uid>& w) { return w.size() / 2; };
            std::size_t best = edges(found.front().second);
            for (const auto& f : found) best = std::min(best, edges(f.second));
            std::erase_if(found, [&](const auto& f) { return edges(f.second) != best; });
        } else if (sel == SelectionMode::Any && !found.empty()) {
            auto best = std::min_element(found.begin(), found.end(), [](const auto& a, const auto& b) {
                return a.second < b.second;
            });
            auto keep = *best;
            found.assign(1, std::move(keep));
        }

        for (auto& [row, walk] : found) {
            if (!seen.insert(row).second) continue;
            out_.rows.push_back(std::move(row));
            out_.walks.push_back(std::move(walk));
        }
        return std::move(out_);
    }

private:
    // ---- scope with undo trail ----

    void bind(const std::string& name, BoundValue v) {
        auto it = scope_.find(name);
        trail_.emplace_back(name, it == scope_.end() ? std::nullopt : std::optional(it->second));
        scope_[name] = std::move(v);
    }

    void unbind(const std::string& name) {
        auto it = scope_.find(name);
        if (it == scope_.end()) return;
        trail_.emplace_back(name, it->second);
        scope_.erase(it);
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            auto& [name, prev] = trail_.back();
            if (prev)
                scope_[name] = std::move(*prev);
            else
                scope_.erase(name);
            trail_.pop_back();
        }
    }

    const BoundValue* bound(const std::string& name) const {
        auto it = scope_.find(name);
        return it == scope_.end() ? nullptr : &it->second;
    }

    // ---- items ----

    void run_items(std::size_t i, const std::function<void()>& done) {
        if (i == stmt_.matches.size()) {
            done();
            return;
        }
        const MatchItem& m = stmt_.matches[i];
        Walk saved = std::move(walk_);
        walk_ = Walk(m.repetition);
        match_chain(m.chain, std::nullopt, [&](Uid) {
            std::size_t mark = trail_.size();
            bool ok = true;
            if (m.path_alias) {
                std::vector<BoundValue> elems;
                for (std::size_t k = 0; k < walk_.size(); ++k)
                    elems.push_back(walk_.is_edge(k) ? BoundValue::edge(walk_.elems()[k])
                                                     : BoundValue::node(walk_.elems()[k]));
                BoundValue path = BoundValue::array(std::move(elems));
                if (const BoundValue* b = bound(*m.path_alias))
                    ok = *b == path;
                else
                    bind(*m.path_alias, std::move(path));
            }
            if (ok) run_items(i + 1, done);
            undo(mark);
        });
        walk_ = std::move(saved);
    }

    void match_chain(const MatchChain& c, std::optional<Uid> start, const NodeK& k) {
        match_node(c.head, start, start.has_value(),
                   [&](Uid n) { match_segments(c, 0, n, k); });
    }

    void match_segments(const MatchChain& c, std::size_t idx, Uid cur, const NodeK& k) {
        if (idx == c.tail.size()) {
            k(cur);
            return;
        }
        const Segment& seg = c.tail[idx];
        NodeK after_node = [&](Uid n) { match_segments(c, idx + 1, n, k); };
        if (const auto* ep = std::get_if<EdgePattern>(&seg.link)) {
            match_edge(*ep, cur, [&](Uid next) { match_node(seg.node, next, false, after_node); });
        } else {
            const auto& pp = std::get<PathPattern>(seg.link);
            expand(pp, cur, [&](Uid end) { match_node(seg.node, end, true, after_node); });
        }
    }

    // ---- nodes ----

    std::vector<Uid> candidates(const ItemPattern& p) const {
        if (p.alias) {
            if (const BoundValue* b = bound(*p.alias)) {
                if (b->kind == BoundValue::Kind::Node) return {b->uid};
                return {};
            }
        }
        if (p.labels.empty()) return s_.all_nodes();
        const TypeDescriptor* most = nullptr;
        for (const auto& l : p.labels) {
            const TypeDescriptor* t = cat_.lookup_label(l, TypeKind::Node);
            if (!t) return {};
            if (!most || cat_.is_subtype_of(t->id, most->id)) most = t;
        }
        const auto& key = cat_.effective_key(most->id);
        if (key.size() == 1) {
            for (const auto& [k, e] : p.doc)
                if (k == key.front() && e.kind == Expr::Kind::Literal)
                    return s_.index_lookup(most->id, k, e.literal);
        }
        return s_.scan(most->id, true);
    }

    bool item_matches(const ItemPattern& p, const Row& row) {
        for (const auto& l : p.labels) {
            const TypeDescriptor* t = cat_.lookup_label(l);
            if (!t || !cat_.is_subtype_of(row.type, t->id)) return false;
        }
        for (const auto& [key, e] : p.doc) {
            const Value* v = row.get(key);
            if (!v || v->is_null()) return false;
            if (e.is_ident() && !bound(e.name)) {
                bind(e.name, BoundValue::of(*v));
                continue;
            }
            BoundValue want = evaluate(e, lookup_, &s_);
            if (!want.is_scalar() || !values_equal(*v, want.scalar)) return false;
        }
        return true;
    }

    bool alias_matches(const ItemPattern& p, BoundValue self) {
        if (!p.alias) return true;
        if (const BoundValue* b = bound(*p.alias)) return *b == self;
        bind(*p.alias, std::move(self));
        return true;
    }

    void match_node(const ItemPattern& p, std::optional<Uid> fixed, bool junction, const NodeK& k) {
        std::vector<Uid> cands = fixed ? std::vector<Uid>{*fixed} : candidates(p);
        for (Uid c : cands) {
            const Row* row = s_.row(c);
            if (!row || !s_.is_node(c)) continue;
            std::size_t mark = trail_.size();
            bool ok = alias_matches(p, BoundValue::node(c)) && item_matches(p, *row) &&
                      (!p.where || evaluate_predicate(*p.where, lookup_, &s_));
            bool pushed = false;
            if (ok && !junction) ok = pushed = walk_.push_node(c);
            if (ok) k(c);
            if (pushed) walk_.pop();
            undo(mark);
        }
    }

    // ---- edges ----

    void match_edge(const EdgePattern& ep, Uid cur, const NodeK& k) {
        bool forward = ep.direction == Direction::Forward;
        PSet<Uid> edges = forward ? s_.out_edges(cur) : s_.in_edges(cur);
        const TypeDescriptor* want = nullptr;
        for (const auto& l : ep.item.labels) {
            want = cat_.lookup_label(l, TypeKind::Edge);
            if (!want) return;
        }
        for (Uid e : edges) {
            const Row* row = s_.row(e);
            if (want && !cat_.is_subtype_of(row->type, want->id)) continue;
            auto ends = s_.endpoints(e);
            Uid next = forward ? ends->arriving : ends->leaving;
            std::size_t mark = trail_.size();
            bool ok = alias_matches(ep.item, BoundValue::edge(e)) && item_matches(ep.item, *row) &&
                      (!ep.item.where || evaluate_predicate(*ep.item.where, lookup_, &s_));
            bool pushed = false;
            if (ok) ok = pushed = walk_.push_edge(e);
            if (ok) k(next);
            if (pushed) walk_.pop();
            undo(mark);
        }
    }

    // ---- quantified paths ----

    struct Expansion {
        const PathPattern* pp;
        std::vector<std::string> fresh;             // identifiers collected per iteration
        std::vector<std::vector<BoundValue>> acc;   // per identifier, one value per iteration
        std::vector<Uid> heads;                     // start node of each iteration so far
        std::size_t walk_start = 0;
        std::set<ExpansionState, ExpansionStateLess> visited;
    };

    // False when an equivalent state of this expansion was already explored.
    bool first_visit(Expansion& x, bool finished, std::uint32_t count, Uid u) {
        if (!memo_) return true;
        ExpansionState st;
        st.finished = finished;
        st.count = count;
        st.at = u;
        if (!finished) {
            st.heads = x.heads;
            std::sort(st.heads.begin(), st.heads.end());
        }
        if (walk_.mode() != RepetitionMode::None) {
            st.walk.assign(walk_.elems().begin() + static_cast<std::ptrdiff_t>(x.walk_start), walk_.elems().end());
            std::sort(st.walk.begin(), st.walk.end());
        }
        st.acc = x.acc;
        return x.visited.insert(std::move(st)).second;
    }

    void expand(const PathPattern& pp, Uid start, const NodeK& k) {
        Expansion x;
        x.pp = &pp;
        std::vector<std::string> ids;
        body_identifiers(*pp.body, ids);
        for (const auto& id : ids)
            if (!bound(id)) x.fresh.push_back(id);
        x.acc.resize(x.fresh.size());
        x.walk_start = walk_.size();
        iterate(x, 0, start, k);
    }

    void iterate(Expansion& x, std::uint32_t count, Uid u, const NodeK& k) {
        if (!first_visit(x, false, count, u)) return;
        const Quantifier& q = x.pp->quantifier;
        // `?` tries the empty path first; the other quantifiers are greedy.
        bool stop_first = q.form == Quantifier::Form::Optional;
        if (stop_first) finish(x, count, u, k);
        // No-repeat rule for unbounded quantifiers: an expansion never starts
        // two iterations at the same node.
        bool more = q.max ? count < *q.max : std::find(x.heads.begin(), x.heads.end(), u) == x.heads.end();
        if (more) {
            std::size_t mark = trail_.size();
            match_chain(*x.pp->body, u, [&](Uid t) {
                std::size_t inner = trail_.size();
                for (std::size_t i = 0; i < x.fresh.size(); ++i) {
                    const BoundValue* b = bound(x.fresh[i]);
                    x.acc[i].push_back(b ? *b : BoundValue::of(Value()));
                    unbind(x.fresh[i]);
                }
                x.heads.push_back(u);
                iterate(x, count + 1, t, k);
                x.heads.pop_back();
                for (auto& a : x.acc) a.pop_back();
                undo(inner);
            });
            undo(mark);
        }
        if (!stop_first) finish(x, count, u, k);
    }

    void finish(Expansion& x, std::uint32_t count, Uid u, const NodeK& k) {
        if (count >= x.pp->quantifier.min && first_visit(x, true, 0, u)) {
            std::size_t mark = trail_.size();
            bool ok = true;
            for (std::size_t i = 0; i < x.fresh.size() && ok; ++i) {
                BoundValue arr = BoundValue::array(x.acc[i]);
                if (const BoundValue* b = bound(x.fresh[i]))
                    ok = *b == arr;
                else
                    bind(x.fresh[i], std::move(arr));
            }
            if (ok) k(u);
            undo(mark);
        }
    }

    const MatchStmt& stmt_;
    const Snapshot& s_;
    const Catalog& cat_;
    Bindings scope_;
    std::vector<std::pair<std::string, std::optional<BoundValue>>> trail_;
    Lookup lookup_;
    Walk walk_;
    MatchOutput out_;
    bool memo_ = true;
};

}  // namespace

std::vector<std::string> match_identifiers(const std::vector<MatchItem>& items,
                                           const Bindings& outer) {
    IdentifierCollector c(outer);
    c.items(items);
    return c.order;
}

MatchOutput find_bindings(const MatchStmt& stmt, const Snapshot& snap, const Bindings& outer) {
    return Matcher(stmt, snap, outer).run();
}

}  // namespace tgdb
