#include "tgdb/store.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "tgdb/eval.hpp"

namespace tgdb {

namespace {

const PSet<Uid>& empty_uid_set() {
    static const PSet<Uid> empty;
    return empty;
}

void adj_add(PMap<Uid, PSet<Uid>>& adj, Uid node, Uid edge) {
    const PSet<Uid>* cur = adj.find(node);
    PSet<Uid> s = cur ? *cur : PSet<Uid>();
    s.insert(edge);
    adj.set(node, std::move(s));
}

void adj_remove(PMap<Uid, PSet<Uid>>& adj, Uid node, Uid edge) {
    const PSet<Uid>* cur = adj.find(node);
    if (!cur) return;
    PSet<Uid> s = *cur;
    s.erase(edge);
    if (s.empty())
        adj.erase(node);
    else
        adj.set(node, std::move(s));
}

bool conforms_deep(const Catalog& cat, const Value& v, const DataType& t) {
    if (v.is_null()) return true;
    if (t.base != BaseType::Structured) return conforms(v, t);
    if (!v.is_record()) return false;
    for (const auto& [k, fv] : *v.as_record().fields) {
        auto col = cat.effective_column(t.structured, k);
        if (!col || !conforms_deep(cat, fv, col->type)) return false;
    }
    return true;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += v[i];
    }
    return s;
}

}  // namespace

// ---- Snapshot ---------------------------------------------------------------

Snapshot::Snapshot() : catalog_(std::make_shared<const Catalog>()) {}

const Row* Snapshot::row(Uid uid) const {
    const RowPtr* r = rows_.find(uid);
    return r ? r->get() : nullptr;
}

bool Snapshot::is_node(Uid uid) const {
    const Row* r = row(uid);
    if (!r) return false;
    const TypeDescriptor* t = catalog_->find(r->type);
    return t && t->kind == TypeKind::Node;
}

std::vector<Uid> Snapshot::scan(TypeId type, bool include_subtypes) const {
    std::vector<Uid> out;
    std::set<TypeId> types =
        include_subtypes && catalog_->find(type) ? catalog_->subtype_closure(type) : std::set<TypeId>{type};
    for (TypeId t : types)
        if (const PSet<Uid>* s = by_type_.find(t))
            for (Uid u : *s) out.push_back(u);
    if (types.size() > 1) std::sort(out.begin(), out.end());
    return out;
}

std::vector<Uid> Snapshot::all_nodes() const {
    std::vector<Uid> out;
    for (const auto& [id, d] : catalog_->types())
        if (d.kind == TypeKind::Node)
            if (const PSet<Uid>* s = by_type_.find(id))
                for (Uid u : *s) out.push_back(u);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Uid> Snapshot::all_edges() const {
    std::vector<Uid> out;
    out.reserve(edge_ends_.size());
    for (auto it = edge_ends_.begin(); it != edge_ends_.end(); ++it) out.push_back(it.key());
    return out;
}

std::string Snapshot::index_name(TypeId root, const std::vector<std::string>& cols) {
    return std::to_string(root) + ":" + join(cols, ",");
}

std::vector<std::vector<std::string>> Snapshot::index_specs(TypeId root) const {
    const TypeDescriptor& d = catalog_->get(root);
    std::vector<std::vector<std::string>> specs;
    if (!d.primary_key.empty()) specs.push_back(d.primary_key);
    for (const auto& k : d.unique_keys)
        if (!k.empty()) specs.push_back(k);
    return specs;
}

std::optional<Value> Snapshot::key_value(const Row& row,
                                         const std::vector<std::string>& cols) const {
    if (cols.empty()) return std::nullopt;
    if (cols.size() == 1) {
        const Value* v = row.get(cols.front());
        if (!v || v->is_null()) return std::nullopt;
        return *v;
    }
    std::vector<std::pair<std::string, Value>> fields;
    for (const auto& c : cols) {
        const Value* v = row.get(c);
        if (!v || v->is_null()) return std::nullopt;
        fields.emplace_back(c, *v);
    }
    return Value::record(std::move(fields));
}

Value Snapshot::key_of(const Row& row) const {
    if (!catalog_->find(row.type)) return Value();
    auto v = key_value(row, catalog_->effective_key(row.type));
    return v ? *v : Value();
}

void Snapshot::index_insert(const Row& r) {
    const TypeDescriptor* t = catalog_->find(r.type);
    if (!t || t->kind == TypeKind::Plain) return;
    TypeId root = catalog_->root_of(r.type);
    for (const auto& spec : index_specs(root)) {
        auto kv = key_value(r, spec);
        if (!kv) continue;
        std::string name = index_name(root, spec);
        const auto* cur = indexes_.find(name);
        PSet<KeyEntry, KeyEntryLess> s = cur ? *cur : PSet<KeyEntry, KeyEntryLess>();
        s.insert({std::move(*kv), r.uid});
        indexes_.set(std::move(name), std::move(s));
    }
}

void Snapshot::index_remove(const Row& r) {
    const TypeDescriptor* t = catalog_->find(r.type);
    if (!t || t->kind == TypeKind::Plain) return;
    TypeId root = catalog_->root_of(r.type);
    for (const auto& spec : index_specs(root)) {
        auto kv = key_value(r, spec);
        if (!kv) continue;
        std::string name = index_name(root, spec);
        const auto* cur = indexes_.find(name);
        if (!cur) continue;
        PSet<KeyEntry, KeyEntryLess> s = *cur;
        s.erase({std::move(*kv), r.uid});
        indexes_.set(std::move(name), std::move(s));
    }
}

void Snapshot::rebuild_indexes(TypeId root) {
    std::string prefix = std::to_string(root) + ":";
    std::vector<std::string> stale;
    for (auto it = indexes_.lower_bound(prefix); it != indexes_.end(); ++it) {
        if (it.key().compare(0, prefix.size(), prefix) != 0) break;
        stale.push_back(it.key());
    }
    for (const auto& name : stale) indexes_.erase(name);
    std::vector<Uid> members = scan(root, true);
    for (const auto& spec : index_specs(root)) {
        PSet<KeyEntry, KeyEntryLess> s;
        for (Uid u : members)
            if (auto kv = key_value(*row(u), spec)) s.insert({std::move(*kv), u});
        indexes_.set(index_name(root, spec), std::move(s));
    }
}

std::vector<Uid> Snapshot::lookup_index(const std::string& name, const Value& key) const {
    std::vector<Uid> out;
    const auto* idx = indexes_.find(name);
    if (!idx) return out;
    for (auto it = idx->lower_bound({key, 0}); it != idx->end(); ++it) {
        if (compare_total(it->key, key) != 0) break;
        out.push_back(it->uid);
    }
    return out;
}

std::vector<std::pair<std::vector<std::string>, std::vector<Uid>>> Snapshot::key_matches(
    const Row& r) const {
    std::vector<std::pair<std::vector<std::string>, std::vector<Uid>>> out;
    if (!catalog_->find(r.type)) return out;
    TypeId root = catalog_->root_of(r.type);
    for (const auto& spec : index_specs(root)) {
        auto kv = key_value(r, spec);
        if (!kv) continue;
        out.emplace_back(spec, lookup_index(index_name(root, spec), *kv));
    }
    return out;
}

std::optional<Uid> Snapshot::find_by_key(TypeId type, const Value& key) const {
    if (!catalog_->find(type) || key.is_null()) return std::nullopt;
    TypeId root = catalog_->root_of(type);
    const auto& pk = catalog_->effective_key(type);
    for (Uid u : lookup_index(index_name(root, pk), key))
        if (catalog_->is_subtype_of(row(u)->type, type)) return u;
    return std::nullopt;
}

Uid Snapshot::resolve_endpoint(TypeId node_type, const Value* key) const {
    if (!key || key->is_null()) return 0;
    auto u = find_by_key(node_type, *key);
    return u ? *u : 0;
}

std::vector<Uid> Snapshot::index_lookup(TypeId type, const std::string& column,
                                        const Value& value) const {
    std::vector<Uid> out;
    if (!catalog_->find(type) || value.is_null()) return out;
    TypeId root = catalog_->root_of(type);
    auto col = catalog_->effective_column(type, column);
    if (!col) return out;
    bool exact_kind = (col->type.base == BaseType::String && value.is_string()) ||
                      (col->type.base == BaseType::Integer && value.is_int());
    if (exact_kind) {
        for (const auto& spec : index_specs(root)) {
            if (spec.size() != 1 || spec.front() != column) continue;
            for (Uid u : lookup_index(index_name(root, spec), value))
                if (catalog_->is_subtype_of(row(u)->type, type)) out.push_back(u);
            return out;
        }
    }
    for (Uid u : scan(type, true)) {
        const Value* v = row(u)->get(column);
        if (v && values_equal(*v, value)) out.push_back(u);
    }
    return out;
}

const PSet<Uid>& Snapshot::out_edges(Uid node) const {
    const PSet<Uid>* s = out_.find(node);
    return s ? *s : empty_uid_set();
}

const PSet<Uid>& Snapshot::in_edges(Uid node) const {
    const PSet<Uid>* s = in_.find(node);
    return s ? *s : empty_uid_set();
}

std::optional<Endpoints> Snapshot::endpoints(Uid edge) const {
    const Endpoints* e = edge_ends_.find(edge);
    if (!e) return std::nullopt;
    return *e;
}

void Snapshot::put_row(RowPtr r, std::optional<Endpoints> ends) {
    Uid uid = r->uid;
    if (const RowPtr* old = rows_.find(uid)) {
        index_remove(**old);
        if (const Endpoints* e = edge_ends_.find(uid)) {
            adj_remove(out_, e->leaving, uid);
            adj_remove(in_, e->arriving, uid);
            edge_ends_.erase(uid);
        }
    } else {
        const PSet<Uid>* cur = by_type_.find(r->type);
        PSet<Uid> s = cur ? *cur : PSet<Uid>();
        s.insert(uid);
        by_type_.set(r->type, std::move(s));
    }
    rows_.set(uid, r);
    index_insert(*r);
    const TypeDescriptor* t = catalog_->find(r->type);
    if (t && t->kind == TypeKind::Edge) {
        Endpoints e = ends ? *ends
                           : Endpoints{resolve_endpoint(t->leaving_type, r->get(kLeavingColumn)),
                                       resolve_endpoint(t->arriving_type, r->get(kArrivingColumn))};
        edge_ends_.set(uid, e);
        if (e.leaving) adj_add(out_, e.leaving, uid);
        if (e.arriving) adj_add(in_, e.arriving, uid);
    }
}

void Snapshot::erase_row(Uid uid) {
    const RowPtr* old = rows_.find(uid);
    if (!old) return;
    RowPtr keep = *old;
    index_remove(*keep);
    if (const PSet<Uid>* cur = by_type_.find(keep->type)) {
        PSet<Uid> s = *cur;
        s.erase(uid);
        by_type_.set(keep->type, std::move(s));
    }
    if (const Endpoints* e = edge_ends_.find(uid)) {
        adj_remove(out_, e->leaving, uid);
        adj_remove(in_, e->arriving, uid);
        edge_ends_.erase(uid);
    }
    out_.erase(uid);
    in_.erase(uid);
    rows_.erase(uid);
}

std::string Snapshot::canonical_bytes() const {
    std::string out = "TGDBSTATE";
    auto u64 = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    u64(next_uid_);
    u64(catalog_->next_type_id());
    u64(catalog_->types().size());
    for (const auto& [id, d] : catalog_->types()) encode_type(out, d);
    u64(rows_.size());
    for (auto it = rows_.begin(); it != rows_.end(); ++it) encode_row(out, *it.value());
    return out;
}

std::string Snapshot::digest() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_bytes()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---- graph registry maintenance ---------------------------------------------

namespace {

void update_graphs(const Snapshot& before, GraphSet& graphs, const Snapshot& after,
                   const std::vector<Uid>& uids) {
    std::vector<Uid> removed_edges, removed_nodes, added_nodes;
    std::vector<std::pair<Uid, Endpoints>> added_edges;
    for (Uid u : uids) {
        bool bn = before.is_node(u), an = after.is_node(u);
        auto be = before.endpoints(u), ae = after.endpoints(u);
        if (be && (!ae || !(*ae == *be))) removed_edges.push_back(u);
        if (bn && !an) removed_nodes.push_back(u);
        if (!bn && an) added_nodes.push_back(u);
        if (ae && (!be || !(*ae == *be))) added_edges.emplace_back(u, *ae);
    }
    for (Uid e : removed_edges) graphs.on_edge_removed(e);
    for (Uid n : removed_nodes) graphs.on_node_removed(n);
    for (Uid n : added_nodes) graphs.on_node_added(n);
    for (const auto& [e, ends] : added_edges) graphs.on_edge_added(e, ends.leaving, ends.arriving);
}

}  // namespace

void apply_delta(Snapshot& s, const CommitDelta& d) {
    Snapshot before = s;
    auto cat = std::make_shared<Catalog>(s.catalog());
    std::vector<TypeId> rekey;
    for (const auto& t : d.types) {
        const TypeDescriptor* old = cat->find(t.id);
        if (t.kind != TypeKind::Plain && !t.supertype &&
            (!old || old->primary_key != t.primary_key || old->unique_keys != t.unique_keys))
            rekey.push_back(t.id);
        cat->put(t);
    }
    cat->set_next_type_id(d.next_type_id);
    s.set_catalog(cat);
    for (TypeId r : rekey) s.rebuild_indexes(r);

    auto is_edge_type = [&](TypeId t) {
        const TypeDescriptor* td = cat->find(t);
        return td && td->kind == TypeKind::Edge;
    };
    std::vector<Uid> uids;
    for (const auto& [uid, row] : d.rows) {
        uids.push_back(uid);
        if (!row && s.is_edge(uid)) s.erase_row(uid);
    }
    for (const auto& [uid, row] : d.rows)
        if (!row) s.erase_row(uid);
    for (const auto& [uid, row] : d.rows)
        if (row && !is_edge_type(row->type)) s.put_row(std::make_shared<const Row>(*row));
    for (const auto& [uid, row] : d.rows)
        if (row && is_edge_type(row->type)) s.put_row(std::make_shared<const Row>(*row));
    s.next_uid_ = d.next_uid;
    s.commit_seq_ = d.seq;
    update_graphs(before, s.graphs_, s, uids);
}

// ---- validation -----------------------------------------------------------

namespace {

class Validator {
public:
    explicit Validator(const Snapshot& s) : s_(s), cat_(s.catalog()) {}

    void run(const std::set<Uid>& rows, const std::set<Uid>& nodes) {
        for (Uid u : rows) check_types(*s_.row(u));
        for (Uid u : rows) check_unique(*s_.row(u));
        for (Uid u : rows)
            if (s_.is_edge(u)) check_references(*s_.row(u));
        for (Uid u : nodes) check_multiplicity(*s_.row(u));
        for (Uid u : rows) check_constraints(*s_.row(u));
    }

private:
    const TypeDescriptor& type_of(const Row& r) const {
        const TypeDescriptor* t = cat_.find(r.type);
        if (!t || t->kind == TypeKind::Plain)
            throw ValidationError("type#" + std::to_string(r.type), "type", {r.uid},
                                  "row has no live node or edge type");
        return *t;
    }

    void check_types(const Row& r) const {
        const TypeDescriptor& t = type_of(r);
        auto cols = cat_.effective_columns(r.type);
        for (const auto& [name, v] : r.values) {
            auto it = std::find_if(cols.begin(), cols.end(),
                                   [&](const auto& c) { return c.name == name; });
            if (it == cols.end())
                throw ValidationError(t.label, "type", {r.uid}, "unknown column " + name);
            if (!conforms_deep(cat_, v, it->type))
                throw ValidationError(t.label, "type", {r.uid},
                                      "column " + name + " holds " + to_literal(v) +
                                          ", declared " + to_string(it->type));
        }
        for (const auto& c : cols) {
            if (c.nullable) continue;
            const Value* v = r.get(c.name);
            if (!v || v->is_null())
                throw ValidationError(t.label, "not null", {r.uid}, "column " + c.name + " is NULL");
        }
        for (const auto& k : cat_.effective_key(r.type)) {
            const Value* v = r.get(k);
            if (!v || v->is_null())
                throw ValidationError(t.label, "not null", {r.uid}, "key column " + k + " is NULL");
        }
    }

    void check_unique(const Row& r) const {
        for (const auto& [spec, uids] : s_.key_matches(r)) {
            if (uids.size() < 2) continue;
            throw ValidationError(type_of(r).label, "key uniqueness", uids,
                                  "duplicate value for key (" + join(spec, ",") + ")");
        }
    }

    void check_references(const Row& r) const {
        const TypeDescriptor& t = type_of(r);
        auto ends = s_.endpoints(r.uid);
        auto side = [&](Uid node, TypeId want, const char* col) {
            const Value* kv = r.get(col);
            std::string v = kv ? to_literal(*kv) : "NULL";
            const Row* n = node ? s_.row(node) : nullptr;
            if (!n || !cat_.is_subtype_of(n->type, want))
                throw ValidationError(t.label, "referential integrity", {r.uid},
                                      std::string(col) + " value " + v + " matches no " +
                                          cat_.get(want).label + " node");
            if (!kv || compare_total(s_.key_of(*n), *kv) != 0)
                throw ValidationError(t.label, "referential integrity", {r.uid},
                                      std::string(col) + " value " + v + " does not match the key of node " +
                                          std::to_string(node));
        };
        side(ends ? ends->leaving : 0, t.leaving_type, kLeavingColumn);
        side(ends ? ends->arriving : 0, t.arriving_type, kArrivingColumn);
    }

    void check_multiplicity(const Row& n) const {
        for (TypeId e : cat_.referencing_edge_types(n.type)) {
            const TypeDescriptor& et = cat_.get(e);
            const Multiplicity& m = et.multiplicity;
            if (m.is_default()) continue;
            auto count = [&](const PSet<Uid>& edges) {
                std::uint64_t k = 0;
                for (Uid x : edges)
                    if (cat_.is_subtype_of(s_.row(x)->type, e)) ++k;
                return k;
            };
            auto check = [&](const char* side, std::uint64_t k, std::uint64_t lo,
                             const std::optional<std::uint64_t>& hi) {
                if (k >= lo && (!hi || k <= *hi)) return;
                std::string range = std::to_string(lo) + ".." + (hi ? std::to_string(*hi) : "*");
                throw ValidationError(et.label, "multiplicity", {n.uid},
                                      cat_.get(n.type).label + " node " + std::to_string(n.uid) +
                                          " has " + std::to_string(k) + " " + side + " " +
                                          et.label + " edge(s), allowed " + range);
            };
            if (cat_.is_subtype_of(n.type, et.leaving_type))
                check("leaving", count(s_.out_edges(n.uid)), m.leaving_min, m.leaving_max);
            if (cat_.is_subtype_of(n.type, et.arriving_type))
                check("arriving", count(s_.in_edges(n.uid)), m.arriving_min, m.arriving_max);
        }
    }

    void check_constraints(const Row& r) const {
        auto constraints = cat_.effective_constraints(r.type);
        if (constraints.empty()) return;
        std::map<std::string, BoundValue> scope;
        for (const auto& c : cat_.effective_columns(r.type))
            scope.emplace(c.name, BoundValue::of(r.value_or_null(c.name)));
        Lookup lookup = [&](const std::string& name) -> const BoundValue* {
            auto it = scope.find(name);
            return it == scope.end() ? nullptr : &it->second;
        };
        for (const auto& c : constraints) {
            std::string detail = "CHECK (" + to_source(c.condition) + ") failed";
            try {
                Value v = evaluate_scalar(c.condition, lookup, &s_);
                if (v.is_bool() && !v.as_bool())
                    throw ValidationError(type_of(r).label, "constraint " + c.name, {r.uid}, detail);
            } catch (const ValidationError&) {
                throw;
            } catch (const Error& e) {
                throw ValidationError(type_of(r).label, "constraint " + c.name, {r.uid},
                                      detail + ": " + e.what());
            }
        }
    }

    const Snapshot& s_;
    const Catalog& cat_;
};

bool needs_full_check(const TypeDescriptor* old, const TypeDescriptor& d) {
    if (!old)
        return (d.kind == TypeKind::Edge && !d.multiplicity.is_default()) || !d.constraints.empty();
    if (old->primary_key != d.primary_key || old->unique_keys != d.unique_keys ||
        !(old->multiplicity == d.multiplicity) || !(old->constraints == d.constraints) ||
        old->supertype != d.supertype || old->leaving_type != d.leaving_type ||
        old->arriving_type != d.arriving_type)
        return true;
    if (d.columns.size() < old->columns.size()) return true;
    return !std::equal(old->columns.begin(), old->columns.end(), d.columns.begin());
}

void validate_commit(const Snapshot& base, const Snapshot& work, const PSet<Uid>& touched) {
    const Catalog& cat = work.catalog();
    std::set<Uid> rows, nodes;
    for (Uid u : touched) {
        if (work.contains(u)) {
            rows.insert(u);
            if (work.is_node(u)) nodes.insert(u);
        }
        for (const Snapshot* s : {&base, &work}) {
            if (auto e = s->endpoints(u)) {
                if (work.is_node(e->leaving)) nodes.insert(e->leaving);
                if (work.is_node(e->arriving)) nodes.insert(e->arriving);
            }
        }
    }
    if (work.catalog_ptr() != base.catalog_ptr()) {
        for (const auto& [id, d] : cat.types()) {
            if (d.kind == TypeKind::Plain || !needs_full_check(base.catalog().find(id), d)) continue;
            for (Uid u : work.scan(id, true)) {
                rows.insert(u);
                if (d.kind == TypeKind::Node) nodes.insert(u);
            }
            if (d.kind == TypeKind::Edge) {
                for (Uid u : work.scan(d.leaving_type, true)) nodes.insert(u);
                for (Uid u : work.scan(d.arriving_type, true)) nodes.insert(u);
            }
        }
    }
    Validator(work).run(rows, nodes);
}

}  // namespace

void validate_full(const Snapshot& s) {
    std::set<Uid> rows, nodes;
    for (auto u : s.all_nodes()) {
        rows.insert(u);
        nodes.insert(u);
    }
    for (auto u : s.all_edges()) rows.insert(u);
    Validator(s).run(rows, nodes);
}

// ---- Transaction ------------------------------------------------------------

Transaction::Transaction(const Database* db, Snapshot base)
    : db_(db), base_(base), work_(std::move(base)) {}

void Transaction::require_open() const {
    if (status_ != Status::Open) throw ExecutionError("transaction is no longer open");
}

bool Transaction::has_changes() const {
    if (!touched_.empty()) return true;
    if (work_.catalog_ptr() == base_.catalog_ptr()) return false;
    return !(work_.catalog() == base_.catalog());
}

Catalog& Transaction::mutable_catalog() {
    require_open();
    if (!owned_catalog_) {
        auto c = std::make_shared<Catalog>(work_.catalog());
        owned_catalog_ = c.get();
        work_.set_catalog(std::move(c));
    }
    return *owned_catalog_;
}

void Transaction::restore(const Savepoint& sp) {
    work_ = sp.work;
    touched_ = sp.touched;
    owned_catalog_ = nullptr;
}

Value Transaction::conform_value(TypeId type, const std::string& column, const Value& v) const {
    const Catalog& cat = catalog();
    auto col = cat.effective_column(type, column);
    if (!col) throw ExecutionError("unknown column " + column + " in " + cat.get(type).label);
    if (v.is_null()) return v;
    if (col->type.base == BaseType::Decimal && v.is_int())
        return Value(static_cast<double>(v.as_int()));
    if (col->type.base == BaseType::Structured) {
        if (conforms_deep(cat, v, col->type)) return v;
    } else if (auto c = coerce(v, col->type)) {
        return *c;
    }
    throw ExecutionError("type mismatch: column " + column + " of " + cat.get(type).label +
                         " is " + to_string(col->type) + ", got " + to_literal(v));
}

Uid Transaction::insert_node(TypeId type, std::map<std::string, Value> values) {
    require_open();
    const TypeDescriptor& td = catalog().get(type);
    if (td.kind != TypeKind::Node) throw ExecutionError(td.label + " is not a node type");
    auto row = std::make_shared<Row>();
    row->type = type;
    for (auto& [k, v] : values)
        if (!v.is_null()) row->values[k] = conform_value(type, k, v);
    const std::string autokey = catalog().get(catalog().root_of(type)).autokey_column;
    if (!autokey.empty()) {
        auto it = row->values.find(autokey);
        if (it == row->values.end())
            row->values[autokey] = Value(mutable_catalog().allocate_autokey(type));
        else if (it->second.is_int())
            mutable_catalog().observe_autokey(type, it->second.as_int());
    }
    row->uid = work_.next_uid_++;
    Uid uid = row->uid;
    work_.put_row(std::move(row));
    touch(uid);
    return uid;
}

Uid Transaction::insert_edge(TypeId type, Uid leaving, Uid arriving,
                             std::map<std::string, Value> values) {
    require_open();
    const Catalog& cat = catalog();
    const TypeDescriptor& td = cat.get(type);
    if (td.kind != TypeKind::Edge) throw ExecutionError(td.label + " is not an edge type");
    auto endpoint = [&](Uid u, TypeId want, const char* side) -> const Row& {
        const Row* r = work_.row(u);
        if (!r || !work_.is_node(u))
            throw ExecutionError(std::string(side) + " endpoint " + std::to_string(u) + " is not a node");
        if (!cat.is_subtype_of(r->type, want))
            throw ExecutionError("edge type " + td.label + " " + side + " " + cat.get(want).label +
                                 ", not " + cat.get(r->type).label);
        return *r;
    };
    const Row& from = endpoint(leaving, td.leaving_type, "leaves");
    const Row& to = endpoint(arriving, td.arriving_type, "arrives at");

    auto row = std::make_shared<Row>();
    row->type = type;
    for (auto& [k, v] : values) {
        if (k == kLeavingColumn || k == kArrivingColumn)
            throw ExecutionError("column " + k + " is maintained by the engine");
        if (!v.is_null()) row->values[k] = conform_value(type, k, v);
    }
    auto key = [&](const Row& n) {
        Value k = work_.key_of(n);
        if (k.is_null())
            throw ExecutionError("node " + std::to_string(n.uid) + " has no key value to reference");
        return k;
    };
    row->values[kLeavingColumn] = key(from);
    row->values[kArrivingColumn] = key(to);
    if (!td.autokey_column.empty()) {
        auto it = row->values.find(td.autokey_column);
        if (it == row->values.end())
            row->values[td.autokey_column] = Value(mutable_catalog().allocate_autokey(type));
        else if (it->second.is_int())
            mutable_catalog().observe_autokey(type, it->second.as_int());
    }
    row->uid = work_.next_uid_++;
    Uid uid = row->uid;
    work_.put_row(std::move(row), Endpoints{leaving, arriving});
    touch(uid);
    return uid;
}

void Transaction::update_row(Uid uid, const std::map<std::string, Value>& changes) {
    require_open();
    const Row* r = work_.row(uid);
    if (!r) throw ExecutionError("unknown element " + std::to_string(uid));
    const Catalog& cat = catalog();
    bool edge = work_.is_edge(uid);
    const auto& key = cat.effective_key(r->type);
    bool key_changed = false;
    auto nr = std::make_shared<Row>(*r);
    std::optional<std::int64_t> observed;
    for (const auto& [k, v] : changes) {
        if (edge && (k == kLeavingColumn || k == kArrivingColumn))
            throw ExecutionError("column " + k + " is maintained by the engine");
        if (v.is_null()) {
            if (!cat.effective_column(r->type, k))
                throw ExecutionError("unknown column " + k + " in " + cat.get(r->type).label);
            nr->values.erase(k);
        } else {
            nr->values[k] = conform_value(r->type, k, v);
        }
        if (!edge && std::find(key.begin(), key.end(), k) != key.end()) key_changed = true;
        if (k == cat.get(cat.root_of(r->type)).autokey_column && v.is_int()) observed = v.as_int();
    }
    if (observed) mutable_catalog().observe_autokey(r->type, *observed);
    work_.put_row(std::move(nr), work_.endpoints(uid));
    touch(uid);
    if (key_changed) rewrite_edge_refs(uid);
}

void Transaction::rewrite_edge_refs(Uid node) {
    Value key = work_.key_of(*work_.row(node));
    auto rewrite = [&](Uid e, const char* col) {
        auto nr = std::make_shared<Row>(*work_.row(e));
        if (key.is_null())
            nr->values.erase(col);
        else
            nr->values[col] = key;
        work_.put_row(std::move(nr), work_.endpoints(e));
        touch(e);
    };
    PSet<Uid> out = work_.out_edges(node);
    PSet<Uid> in = work_.in_edges(node);
    for (Uid e : out) rewrite(e, kLeavingColumn);
    for (Uid e : in) rewrite(e, kArrivingColumn);
}

void Transaction::delete_row(Uid uid, bool cascade) {
    require_open();
    const Row* r = work_.row(uid);
    if (!r) throw ExecutionError("unknown element " + std::to_string(uid));
    if (work_.is_node(uid)) {
        std::set<Uid> edges;
        for (Uid e : work_.out_edges(uid)) edges.insert(e);
        for (Uid e : work_.in_edges(uid)) edges.insert(e);
        if (!edges.empty() && !cascade)
            throw ExecutionError("cannot delete " + catalog().get(r->type).label + " node " +
                                 std::to_string(uid) + ": it has " + std::to_string(edges.size()) +
                                 " incident edge(s); use DELETE ... CASCADE");
        for (Uid e : edges) {
            work_.erase_row(e);
            touch(e);
        }
    }
    work_.erase_row(uid);
    touch(uid);
}

CascadeReport Transaction::alter_primary_key(TypeId type, std::vector<std::string> columns) {
    require_open();
    const Catalog& cat = catalog();
    const TypeDescriptor& td = cat.get(type);
    if (td.kind == TypeKind::Node && !td.supertype) {
        std::map<Value, Uid, ValueLess> seen;
        for (Uid u : work_.scan(type, true)) {
            const Row* r = work_.row(u);
            std::vector<std::pair<std::string, Value>> fields;
            for (const auto& c : columns) {
                const Value* v = r->get(c);
                if (!v || v->is_null())
                    throw ValidationError(td.label, "not null", {u},
                                          "new key column " + c + " is NULL");
                fields.emplace_back(c, *v);
            }
            Value kv = columns.size() == 1 ? fields.front().second : Value::record(fields);
            auto [it, fresh] = seen.emplace(kv, u);
            if (!fresh)
                throw ValidationError(td.label, "key uniqueness", {it->second, u},
                                      "duplicate value " + to_literal(kv) + " for new key");
        }
    }

    Catalog& mc = mutable_catalog();
    mc.set_primary_key(type, columns);
    TypeId root = mc.root_of(type);
    CascadeReport report;
    report.edge_types = mc.referencing_edge_types(type);
    if (columns.size() == 1) {
        DataType kt = mc.effective_column(type, columns.front())->type;
        for (TypeId e : report.edge_types) {
            const TypeDescriptor& ed = mc.get(e);
            if (mc.root_of(ed.leaving_type) == root) mc.retype_column(e, kLeavingColumn, kt);
            if (mc.root_of(ed.arriving_type) == root) mc.retype_column(e, kArrivingColumn, kt);
        }
    }
    work_.rebuild_indexes(root);
    for (TypeId e : report.edge_types) {
        const TypeDescriptor& ed = mc.get(e);
        bool from = mc.root_of(ed.leaving_type) == root;
        bool to = mc.root_of(ed.arriving_type) == root;
        for (Uid u : work_.scan(e, false)) {
            Endpoints ends = *work_.endpoints(u);
            auto nr = std::make_shared<Row>(*work_.row(u));
            if (from) nr->values[kLeavingColumn] = work_.key_of(*work_.row(ends.leaving));
            if (to) nr->values[kArrivingColumn] = work_.key_of(*work_.row(ends.arriving));
            work_.put_row(std::move(nr), ends);
            touch(u);
            ++report.edges_rewritten;
        }
    }
    return report;
}

void Transaction::drop_column(TypeId type, const std::string& column) {
    require_open();
    Catalog& mc = mutable_catalog();
    mc.drop_column(type, column);
    work_.rebuild_indexes(mc.root_of(type));
    for (Uid u : work_.scan(type, true)) {
        const Row* r = work_.row(u);
        if (!r->get(column)) continue;
        auto nr = std::make_shared<Row>(*r);
        nr->values.erase(column);
        work_.put_row(std::move(nr), work_.endpoints(u));
        touch(u);
    }
}

// ---- Database ---------------------------------------------------------------

Database::Database() = default;

Database::Database(const std::filesystem::path& path, DatabaseOptions options) {
    name_ = path.stem().string();
    auto [log, replay] = CommitLog::open(path, options.sync);
    for (const auto& rec : replay.records) apply_delta(head_, rec);
    warnings_ = std::move(replay.warnings);
    log_.emplace(std::move(log));
}

Database::~Database() = default;

Snapshot Database::snapshot() const {
    std::shared_lock lock(head_mu_);
    return head_;
}

Transaction Database::begin() const { return Transaction(this, snapshot()); }

void Database::rollback(Transaction& tx) {
    tx.require_open();
    tx.status_ = Transaction::Status::Aborted;
}

CommitRecord Database::commit(Transaction& tx) {
    tx.require_open();
    if (tx.db_ != this) throw ExecutionError("transaction belongs to another database");
    std::lock_guard lock(commit_mu_);
    try {
        Snapshot head = snapshot();
        CommitRecord rec;
        rec.seq = head.commit_seq();
        if (!tx.has_changes()) {
            tx.status_ = Transaction::Status::Committed;
            return rec;
        }
        if (head.commit_seq() != tx.base_.commit_seq())
            throw ExecutionError("serialization failure: another transaction committed first");
        validate_commit(tx.base_, tx.work_, tx.touched_);

        CommitDelta d;
        d.seq = head.commit_seq() + 1;
        d.next_uid = tx.work_.next_uid();
        d.next_type_id = tx.work_.catalog().next_type_id();
        if (tx.work_.catalog_ptr() != tx.base_.catalog_ptr()) {
            for (const auto& [id, t] : tx.work_.catalog().types()) {
                const TypeDescriptor* old = tx.base_.catalog().find(id);
                if (!old || !(*old == t)) d.types.push_back(t);
            }
        }
        std::vector<Uid> uids;
        for (Uid u : tx.touched_) {
            const Row* before = tx.base_.row(u);
            const Row* after = tx.work_.row(u);
            if (!before && !after) continue;
            if (before && after && *before == *after) continue;
            uids.push_back(u);
            d.rows.emplace_back(u, after ? std::optional<Row>(*after) : std::nullopt);
        }

        Snapshot next = tx.work_;
        next.commit_seq_ = d.seq;
        update_graphs(tx.base_, next.graphs_, next, uids);
        rec.seq = d.seq;
        rec.rows_written = d.rows.size();
        rec.types_written = d.types.size();
        if (log_) rec.bytes = log_->append(d);
        {
            std::unique_lock wl(head_mu_);
            head_ = std::move(next);
        }
        tx.status_ = Transaction::Status::Committed;
        return rec;
    } catch (...) {
        tx.status_ = Transaction::Status::Aborted;
        throw;
    }
}

}  // namespace tgdb
