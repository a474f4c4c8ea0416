#pragma once
// Typed graph schema: node, edge and plain (structured) type descriptors.
//
// Each node or edge type owns one base table. A subtype's table holds the
// inherited columns plus its own; the primary key of a node hierarchy is
// declared on its root and shared by every subtype. Edge types carry the
// automatic LEAVING and ARRIVING reference columns, holding the key value of
// the tail and head node respectively.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tgdb/ast.hpp"
#include "tgdb/error.hpp"
#include "tgdb/value.hpp"

namespace tgdb {

inline constexpr const char* kIdColumn = "ID";
inline constexpr const char* kLeavingColumn = "LEAVING";
inline constexpr const char* kArrivingColumn = "ARRIVING";

enum class TypeKind { Node, Edge, Plain };

std::string to_string(TypeKind k);

struct ColumnDescriptor {
    std::string name;
    DataType type;
    bool nullable = true;

    bool operator==(const ColumnDescriptor&) const = default;
};

// Min–max counts of incident edges of one edge type, per endpoint side.
// A missing maximum means unbounded.
struct Multiplicity {
    std::uint64_t leaving_min = 0;
    std::optional<std::uint64_t> leaving_max;
    std::uint64_t arriving_min = 0;
    std::optional<std::uint64_t> arriving_max;

    bool is_default() const {
        return leaving_min == 0 && !leaving_max && arriving_min == 0 && !arriving_max;
    }
    bool operator==(const Multiplicity&) const = default;
};

struct Constraint {
    std::string name;
    Expr condition;

    bool operator==(const Constraint&) const = default;
};

struct TypeDescriptor {
    TypeId id = 0;
    std::string label;
    TypeKind kind = TypeKind::Node;
    std::vector<ColumnDescriptor> columns;  // own columns only
    std::optional<TypeId> supertype;
    std::vector<std::string> primary_key;   // empty on subtypes (inherited)
    std::vector<std::vector<std::string>> unique_keys;  // superseded keys
    std::string autokey_column;             // engine-allocated integer key column, if any
    std::int64_t next_autokey = 1;
    TypeId leaving_type = 0;                // edge kind only
    TypeId arriving_type = 0;               // edge kind only
    Multiplicity multiplicity;              // edge kind only
    std::vector<Constraint> constraints;

    const ColumnDescriptor* own_column(const std::string& name) const;

    bool operator==(const TypeDescriptor&) const = default;
};

class Catalog {
public:
    const TypeDescriptor& get(TypeId id) const;
    const TypeDescriptor* find(TypeId id) const;
    const std::map<TypeId, TypeDescriptor>& types() const { return types_; }
    TypeId next_type_id() const { return next_type_id_; }

    // Label lookup; labels are case-normalized by the lexer, so this is an
    // exact match. Returns nullptr when absent or of another kind.
    const TypeDescriptor* lookup_label(const std::string& label,
                                       std::optional<TypeKind> kind = std::nullopt) const;
    const TypeDescriptor& require_label(const std::string& label,
                                        std::optional<TypeKind> kind = std::nullopt) const;

    // The type itself and all its (transitive) subtypes.
    std::set<TypeId> subtype_closure(TypeId id) const;
    bool is_subtype_of(TypeId sub, TypeId super) const;
    std::optional<TypeId> common_supertype(TypeId a, TypeId b) const;
    TypeId root_of(TypeId id) const;

    // Inherited columns first (root to leaf), then own columns.
    std::vector<ColumnDescriptor> effective_columns(TypeId id) const;
    std::optional<ColumnDescriptor> effective_column(TypeId id, const std::string& name) const;
    const std::vector<std::string>& effective_key(TypeId id) const;
    std::vector<std::vector<std::string>> effective_unique_keys(TypeId id) const;
    // All constraints of the type and its supertypes.
    std::vector<Constraint> effective_constraints(TypeId id) const;
    // Edge types whose LEAVING or ARRIVING references a type in the hierarchy of `node_type`.
    std::vector<TypeId> referencing_edge_types(TypeId node_type) const;

    TypeId define_node_type(const std::string& label, std::vector<ColumnDescriptor> columns,
                            const std::optional<std::string>& supertype = std::nullopt);
    TypeId define_edge_type(const std::string& label, std::vector<ColumnDescriptor> columns,
                            const std::string& leaving, const std::string& arriving,
                            std::optional<Multiplicity> multiplicity = std::nullopt);
    TypeId define_plain_type(const std::string& label, std::vector<ColumnDescriptor> columns,
                             const std::optional<std::string>& supertype = std::nullopt);

    // Appends a nullable column. Existing rows read as NULL for it.
    void widen_type(TypeId id, ColumnDescriptor column);
    // Changes the declared type of an own or inherited column (numeric widening).
    void retype_column(TypeId id, const std::string& column, DataType type);
    // Generalizes an edge type's endpoint to `node_type` (used when later
    // instances attach to a sibling subtype).
    void set_edge_endpoint(TypeId edge, bool leaving, TypeId node_type);

    // Installs a new primary key on a hierarchy root; the old one is kept as a
    // unique key. Row-level checks and the edge cascade are the store's job.
    void set_primary_key(TypeId id, std::vector<std::string> key);
    void drop_column(TypeId id, const std::string& column);
    void set_multiplicity(TypeId edge, const Multiplicity& m);
    void add_constraint(TypeId id, Constraint c);

    std::int64_t allocate_autokey(TypeId id);
    void observe_autokey(TypeId id, std::int64_t value);

    // Low-level replacement used by log replay.
    void put(TypeDescriptor d);
    void set_next_type_id(TypeId id) { next_type_id_ = id; }

    bool operator==(const Catalog&) const = default;

private:
    TypeDescriptor& mutable_get(TypeId id);
    void check_label_free(const std::string& label) const;
    void check_column_free(TypeId id, const std::string& name) const;
    void check_data_type(const DataType& t) const;
    std::set<std::string> expression_identifiers(const Expr& e) const;

    std::map<TypeId, TypeDescriptor> types_;
    TypeId next_type_id_ = 1;
};

// Resolves a column type name as written in CREATE TYPE / ALTER … ADD.
DataType resolve_type_name(const Catalog& catalog, const std::string& name);

}  // namespace tgdb
