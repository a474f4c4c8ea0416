#pragma once
// Expression evaluation over bound identifiers.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tgdb/ast.hpp"
#include "tgdb/value.hpp"

namespace tgdb {

class Snapshot;

// What an identifier is bound to: a scalar, a node or edge (by uid), or the
// per-iteration list an identifier collects inside a quantified path.
struct BoundValue {
    enum class Kind { Scalar, Node, Edge, Array };

    Kind kind = Kind::Scalar;
    Value scalar;
    Uid uid = 0;
    std::shared_ptr<const std::vector<BoundValue>> items;

    static BoundValue of(Value v);
    static BoundValue node(Uid uid);
    static BoundValue edge(Uid uid);
    static BoundValue array(std::vector<BoundValue> items);

    bool is_scalar() const { return kind == Kind::Scalar; }
    bool is_element() const { return kind == Kind::Node || kind == Kind::Edge; }
    const std::vector<BoundValue>& elements() const;

    friend bool operator==(const BoundValue& a, const BoundValue& b);
};

// Total order (kind, then content) used to de-duplicate binding rows.
int compare_bound(const BoundValue& a, const BoundValue& b);

using Lookup = std::function<const BoundValue*(const std::string&)>;

// Field access on nodes and edges reads from `snap`, which may be null when
// no element can be bound (e.g. row constraints).
BoundValue evaluate(const Expr& e, const Lookup& lookup, const Snapshot* snap);
Value evaluate_scalar(const Expr& e, const Lookup& lookup, const Snapshot* snap);
// SQL truth: only TRUE passes. NULL is not true; a non-boolean is an error.
bool evaluate_predicate(const Expr& e, const Lookup& lookup, const Snapshot* snap);

// Equality used when matching doc entries and comparing bindings: numeric
// promotion, NULL never equal, incomparable kinds unequal.
bool values_equal(const Value& a, const Value& b);

}  // namespace tgdb
