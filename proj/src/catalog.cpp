#include "tgdb/catalog.hpp"

#include <algorithm>

namespace tgdb {

std::string to_string(TypeKind k) {
    switch (k) {
        case TypeKind::Node: return "node";
        case TypeKind::Edge: return "edge";
        case TypeKind::Plain: return "plain";
    }
    return "?";
}

const ColumnDescriptor* TypeDescriptor::own_column(const std::string& name) const {
    for (const auto& c : columns)
        if (c.name == name) return &c;
    return nullptr;
}

const TypeDescriptor& Catalog::get(TypeId id) const {
    auto it = types_.find(id);
    if (it == types_.end()) throw SchemaError("unknown type id " + std::to_string(id));
    return it->second;
}

const TypeDescriptor* Catalog::find(TypeId id) const {
    auto it = types_.find(id);
    return it == types_.end() ? nullptr : &it->second;
}

TypeDescriptor& Catalog::mutable_get(TypeId id) {
    auto it = types_.find(id);
    if (it == types_.end()) throw SchemaError("unknown type id " + std::to_string(id));
    return it->second;
}

const TypeDescriptor* Catalog::lookup_label(const std::string& label,
                                            std::optional<TypeKind> kind) const {
    for (const auto& [id, d] : types_)
        if (d.label == label) return !kind || d.kind == *kind ? &d : nullptr;
    return nullptr;
}

const TypeDescriptor& Catalog::require_label(const std::string& label,
                                             std::optional<TypeKind> kind) const {
    const TypeDescriptor* d = lookup_label(label, kind);
    if (!d) {
        throw SchemaError("unknown " + (kind ? to_string(*kind) + " " : std::string()) + "type " +
                          label);
    }
    return *d;
}

std::set<TypeId> Catalog::subtype_closure(TypeId id) const {
    std::set<TypeId> out{id};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& [tid, d] : types_)
            if (d.supertype && out.contains(*d.supertype) && out.insert(tid).second) grew = true;
    }
    return out;
}

bool Catalog::is_subtype_of(TypeId sub, TypeId super) const {
    for (std::optional<TypeId> t = sub; t; t = get(*t).supertype)
        if (*t == super) return true;
    return false;
}

std::optional<TypeId> Catalog::common_supertype(TypeId a, TypeId b) const {
    for (std::optional<TypeId> t = a; t; t = get(*t).supertype)
        if (is_subtype_of(b, *t)) return *t;
    return std::nullopt;
}

TypeId Catalog::root_of(TypeId id) const {
    const TypeDescriptor* d = &get(id);
    while (d->supertype) d = &get(*d->supertype);
    return d->id;
}

std::vector<ColumnDescriptor> Catalog::effective_columns(TypeId id) const {
    std::vector<const TypeDescriptor*> chain;
    for (std::optional<TypeId> t = id; t; t = get(*t).supertype) chain.push_back(&get(*t));
    std::vector<ColumnDescriptor> out;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
        out.insert(out.end(), (*it)->columns.begin(), (*it)->columns.end());
    return out;
}

std::optional<ColumnDescriptor> Catalog::effective_column(TypeId id,
                                                          const std::string& name) const {
    for (std::optional<TypeId> t = id; t; t = get(*t).supertype)
        if (const auto* c = get(*t).own_column(name)) return *c;
    return std::nullopt;
}

const std::vector<std::string>& Catalog::effective_key(TypeId id) const {
    return get(root_of(id)).primary_key;
}

std::vector<std::vector<std::string>> Catalog::effective_unique_keys(TypeId id) const {
    return get(root_of(id)).unique_keys;
}

std::vector<Constraint> Catalog::effective_constraints(TypeId id) const {
    std::vector<Constraint> out;
    for (std::optional<TypeId> t = id; t; t = get(*t).supertype) {
        const auto& cs = get(*t).constraints;
        out.insert(out.end(), cs.begin(), cs.end());
    }
    return out;
}

std::vector<TypeId> Catalog::referencing_edge_types(TypeId node_type) const {
    TypeId root = root_of(node_type);
    std::vector<TypeId> out;
    for (const auto& [id, d] : types_) {
        if (d.kind != TypeKind::Edge) continue;
        if (root_of(d.leaving_type) == root || root_of(d.arriving_type) == root) out.push_back(id);
    }
    return out;
}

void Catalog::check_label_free(const std::string& label) const {
    if (label.empty()) throw SchemaError("empty type label");
    if (const auto* d = lookup_label(label))
        throw SchemaError("duplicate label " + label + " (already a " + to_string(d->kind) + " type)");
}

void Catalog::check_column_free(TypeId id, const std::string& name) const {
    if (effective_column(id, name))
        throw SchemaError("column " + name + " already exists in " + get(id).label);
    for (TypeId sub : subtype_closure(id))
        if (get(sub).own_column(name))
            throw SchemaError("column " + name + " already exists in subtype " + get(sub).label);
}

void Catalog::check_data_type(const DataType& t) const {
    if (t.base != BaseType::Structured) return;
    const TypeDescriptor* d = find(t.structured);
    if (!d || d->kind != TypeKind::Plain)
        throw SchemaError("structured column must reference a plain type");
}

namespace {

void check_unique_names(const std::vector<ColumnDescriptor>& cols) {
    std::set<std::string> seen;
    for (const auto& c : cols) {
        if (c.name.empty()) throw SchemaError("empty column name");
        if (!seen.insert(c.name).second) throw SchemaError("duplicate column " + c.name);
    }
}

void check_multiplicity(const Multiplicity& m) {
    auto side = [](std::uint64_t lo, const std::optional<std::uint64_t>& hi, const char* name) {
        if (hi && *hi < 1)
            throw SchemaError(std::string(name) + " maximum multiplicity must be at least 1");
        if (hi && lo > *hi)
            throw SchemaError(std::string(name) + " minimum multiplicity exceeds maximum");
    };
    side(m.leaving_min, m.leaving_max, "leaving");
    side(m.arriving_min, m.arriving_max, "arriving");
}

}  // namespace

TypeId Catalog::define_node_type(const std::string& label, std::vector<ColumnDescriptor> columns,
                                 const std::optional<std::string>& supertype) {
    check_label_free(label);
    check_unique_names(columns);
    for (const auto& c : columns) check_data_type(c.type);

    TypeDescriptor d;
    d.label = label;
    d.kind = TypeKind::Node;
    if (supertype) {
        if (*supertype == label) throw SchemaError("supertype cycle through " + label);
        const TypeDescriptor& sup = require_label(*supertype, TypeKind::Node);
        d.supertype = sup.id;
        for (const auto& c : columns)
            if (effective_column(sup.id, c.name))
                throw SchemaError("column " + c.name + " collides with inherited column of " +
                                  sup.label);
        d.columns = std::move(columns);
    } else {
        auto id_col = std::find_if(columns.begin(), columns.end(),
                                   [](const auto& c) { return c.name == kIdColumn; });
        if (id_col == columns.end()) {
            columns.insert(columns.begin(),
                           ColumnDescriptor{kIdColumn, DataType{BaseType::Integer}, false});
            d.autokey_column = kIdColumn;
        } else {
            id_col->nullable = false;
            if (id_col->type.base == BaseType::Integer) d.autokey_column = kIdColumn;
        }
        d.primary_key = {kIdColumn};
        d.columns = std::move(columns);
    }
    d.id = next_type_id_++;
    TypeId id = d.id;
    types_.emplace(id, std::move(d));
    return id;
}

TypeId Catalog::define_edge_type(const std::string& label, std::vector<ColumnDescriptor> columns,
                                 const std::string& leaving, const std::string& arriving,
                                 std::optional<Multiplicity> multiplicity) {
    check_label_free(label);
    const TypeDescriptor& from = require_label(leaving, TypeKind::Node);
    const TypeDescriptor& to = require_label(arriving, TypeKind::Node);
    for (const auto& c : columns) {
        if (c.name == kIdColumn || c.name == kLeavingColumn || c.name == kArrivingColumn)
            throw SchemaError("column " + c.name + " is reserved in edge types");
        check_data_type(c.type);
    }
    check_unique_names(columns);
    if (multiplicity) check_multiplicity(*multiplicity);

    auto key_type = [&](const TypeDescriptor& n) {
        const auto& key = effective_key(n.id);
        if (key.size() != 1)
            throw SchemaError("node type " + n.label + " has a composite key and cannot be an edge endpoint");
        return effective_column(n.id, key.front())->type;
    };

    TypeDescriptor d;
    d.label = label;
    d.kind = TypeKind::Edge;
    d.columns.push_back({kIdColumn, DataType{BaseType::Integer}, false});
    d.columns.push_back({kLeavingColumn, key_type(from), false});
    d.columns.push_back({kArrivingColumn, key_type(to), false});
    d.columns.insert(d.columns.end(), columns.begin(), columns.end());
    d.primary_key = {kIdColumn};
    d.autokey_column = kIdColumn;
    d.leaving_type = from.id;
    d.arriving_type = to.id;
    if (multiplicity) d.multiplicity = *multiplicity;
    d.id = next_type_id_++;
    TypeId id = d.id;
    types_.emplace(id, std::move(d));
    return id;
}

TypeId Catalog::define_plain_type(const std::string& label, std::vector<ColumnDescriptor> columns,
                                  const std::optional<std::string>& supertype) {
    check_label_free(label);
    check_unique_names(columns);
    for (const auto& c : columns) check_data_type(c.type);
    TypeDescriptor d;
    d.label = label;
    d.kind = TypeKind::Plain;
    if (supertype) d.supertype = require_label(*supertype, TypeKind::Plain).id;
    d.columns = std::move(columns);
    d.id = next_type_id_++;
    TypeId id = d.id;
    types_.emplace(id, std::move(d));
    return id;
}

void Catalog::widen_type(TypeId id, ColumnDescriptor column) {
    check_column_free(id, column.name);
    if (column.type.base == BaseType::Structured && column.type.structured == id) {
        if (!column.nullable) throw SchemaError("recursive column " + column.name + " must be nullable");
    } else {
        check_data_type(column.type);
    }
    column.nullable = true;
    mutable_get(id).columns.push_back(std::move(column));
}

void Catalog::retype_column(TypeId id, const std::string& column, DataType type) {
    for (std::optional<TypeId> t = id; t; t = get(*t).supertype) {
        auto& d = mutable_get(*t);
        for (auto& c : d.columns) {
            if (c.name == column) {
                c.type = type;
                return;
            }
        }
    }
    throw SchemaError("unknown column " + column + " in " + get(id).label);
}

void Catalog::set_edge_endpoint(TypeId edge, bool leaving, TypeId node_type) {
    auto& d = mutable_get(edge);
    if (d.kind != TypeKind::Edge) throw SchemaError(d.label + " is not an edge type");
    (leaving ? d.leaving_type : d.arriving_type) = node_type;
}

void Catalog::set_primary_key(TypeId id, std::vector<std::string> key) {
    auto& d = mutable_get(id);
    if (d.kind != TypeKind::Node) throw SchemaError("primary key can only be changed on node types");
    if (d.supertype)
        throw SchemaError(d.label + " inherits its key from " + get(*d.supertype).label);
    if (key.empty()) throw SchemaError("empty primary key");
    std::set<std::string> seen;
    for (const auto& k : key) {
        if (!seen.insert(k).second) throw SchemaError("duplicate key column " + k);
        if (!d.own_column(k)) throw SchemaError("unknown column " + k + " in " + d.label);
    }
    if (key == d.primary_key) return;
    if (key.size() > 1 && !referencing_edge_types(id).empty())
        throw SchemaError("node type " + d.label +
                          " is referenced by edge types and cannot take a composite key");
    auto& uks = d.unique_keys;
    uks.erase(std::remove(uks.begin(), uks.end(), key), uks.end());
    if (std::find(uks.begin(), uks.end(), d.primary_key) == uks.end())
        uks.push_back(d.primary_key);
    d.primary_key = std::move(key);
    for (auto& c : d.columns)
        if (seen.contains(c.name)) c.nullable = false;
}

void Catalog::drop_column(TypeId id, const std::string& column) {
    auto& d = mutable_get(id);
    auto it = std::find_if(d.columns.begin(), d.columns.end(),
                           [&](const auto& c) { return c.name == column; });
    if (it == d.columns.end()) {
        if (effective_column(id, column))
            throw SchemaError("column " + column + " is inherited and must be dropped from the supertype");
        throw SchemaError("unknown column " + column + " in " + d.label);
    }
    if (d.kind == TypeKind::Edge && (column == kLeavingColumn || column == kArrivingColumn))
        throw SchemaError("cannot drop endpoint column " + column + " of " + d.label);
    const auto& key = effective_key(id);
    if (std::find(key.begin(), key.end(), column) != key.end())
        throw SchemaError("cannot drop primary key column " + column + " of " + d.label);
    for (TypeId sub : subtype_closure(id)) {
        for (const auto& c : get(sub).constraints)
            if (expression_identifiers(c.condition).contains(column))
                throw SchemaError("column " + column + " is used by a constraint on " + get(sub).label);
    }
    d.columns.erase(it);
    auto& uks = d.unique_keys;
    uks.erase(std::remove_if(uks.begin(), uks.end(),
                             [&](const auto& k) {
                                 return std::find(k.begin(), k.end(), column) != k.end();
                             }),
              uks.end());
    if (d.autokey_column == column) d.autokey_column.clear();
}

void Catalog::set_multiplicity(TypeId edge, const Multiplicity& m) {
    auto& d = mutable_get(edge);
    if (d.kind != TypeKind::Edge) throw SchemaError(d.label + " is not an edge type");
    check_multiplicity(m);
    d.multiplicity = m;
}

std::set<std::string> Catalog::expression_identifiers(const Expr& e) const {
    std::set<std::string> out;
    if (e.kind == Expr::Kind::Ident) out.insert(e.name);
    for (const auto& a : e.args) {
        auto sub = expression_identifiers(a);
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

void Catalog::add_constraint(TypeId id, Constraint c) {
    auto& d = mutable_get(id);
    for (const auto& name : expression_identifiers(c.condition))
        if (!effective_column(id, name))
            throw SchemaError("constraint on " + d.label + " references unknown column " + name);
    if (c.name.empty()) c.name = d.label + "_CHECK" + std::to_string(d.constraints.size() + 1);
    d.constraints.push_back(std::move(c));
}

std::int64_t Catalog::allocate_autokey(TypeId id) {
    auto& root = mutable_get(root_of(id));
    return root.next_autokey++;
}

void Catalog::observe_autokey(TypeId id, std::int64_t value) {
    auto& root = mutable_get(root_of(id));
    if (value >= root.next_autokey) root.next_autokey = value + 1;
}

void Catalog::put(TypeDescriptor d) {
    TypeId id = d.id;
    types_[id] = std::move(d);
    if (id >= next_type_id_) next_type_id_ = id + 1;
}

DataType resolve_type_name(const Catalog& catalog, const std::string& name) {
    static const std::map<std::string, BaseType> builtin = {
        {"INT", BaseType::Integer},      {"INTEGER", BaseType::Integer},
        {"BIGINT", BaseType::Integer},   {"SMALLINT", BaseType::Integer},
        {"DECIMAL", BaseType::Decimal},  {"NUMERIC", BaseType::Decimal},
        {"REAL", BaseType::Decimal},     {"FLOAT", BaseType::Decimal},
        {"DOUBLE", BaseType::Decimal},   {"CHAR", BaseType::String},
        {"VARCHAR", BaseType::String},   {"STRING", BaseType::String},
        {"TEXT", BaseType::String},      {"BOOLEAN", BaseType::Boolean},
        {"BOOL", BaseType::Boolean},     {"DATE", BaseType::Date},
        {"CURRENCY", BaseType::Currency}};
    if (auto it = builtin.find(name); it != builtin.end()) return DataType{it->second};
    if (const auto* d = catalog.lookup_label(name, TypeKind::Plain))
        return DataType{BaseType::Structured, d->id};
    throw SchemaError("unknown data type " + name);
}

}  // namespace tgdb
