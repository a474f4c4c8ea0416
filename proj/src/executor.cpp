#include "tgdb/executor.hpp"

#include <algorithm>

namespace tgdb {

namespace {

Lookup lookup_in(const Bindings& scope) {
    return [&scope](const std::string& name) -> const BoundValue* {
        auto it = scope.find(name);
        return it == scope.end() ? nullptr : &it->second;
    };
}

Bindings merged(const Bindings& outer, const Bindings& inner) {
    Bindings out = outer;
    for (const auto& [k, v] : inner) out[k] = v;
    return out;
}

// Element uids a bound identifier denotes; arrays contribute their elements.
void collect_elements(const BoundValue& b, std::vector<Uid>& out) {
    if (b.is_element()) {
        out.push_back(b.uid);
    } else if (b.kind == BoundValue::Kind::Array) {
        for (const auto& item : b.elements()) collect_elements(item, out);
    }
}

Value with_field(const Value& base, const std::vector<std::string>& path, std::size_t i,
                 const Value& v) {
    if (i == path.size()) return v;
    if (!base.is_null() && !base.is_record())
        throw ExecutionError("cannot set field " + path[i] + " of " + to_literal(base));
    std::vector<std::pair<std::string, Value>> fields;
    if (base.is_record()) fields = *base.as_record().fields;
    auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == path[i]; });
    if (it == fields.end()) {
        fields.emplace_back(path[i], with_field(Value(), path, i + 1, v));
    } else {
        it->second = with_field(it->second, path, i + 1, v);
    }
    return Value::record(std::move(fields));
}

std::string bounds_text(std::uint64_t lo, const std::optional<std::uint64_t>& hi) {
    return std::to_string(lo) + ".." + (hi ? std::to_string(*hi) : "*");
}

}  // namespace

std::string return_column_name(const ReturnItem& item) {
    if (item.alias) return *item.alias;
    if (item.expr.kind == Expr::Kind::Field || item.expr.kind == Expr::Kind::Ident) return item.expr.name;
    return to_source(item.expr);
}

StatementResult Executor::execute(const Statement& stmt, const Bindings& scope) {
    return std::visit(
        [&](const auto& s) -> StatementResult {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CreateStmt>) return exec_create(s, scope);
            else if constexpr (std::is_same_v<T, MatchStmt>) return exec_match(s, scope);
            else if constexpr (std::is_same_v<T, SetStmt>) return exec_set(s, scope);
            else if constexpr (std::is_same_v<T, DeleteStmt>) return exec_delete(s, scope);
            else if constexpr (std::is_same_v<T, CreateTypeStmt>) return exec_create_type(s);
            else if constexpr (std::is_same_v<T, AlterStmt>) return exec_alter(s);
            else if constexpr (std::is_same_v<T, ShowStmt>) return exec_show(s);
            else if constexpr (std::is_same_v<T, NoopStmt>) return StatementResult::none();
            else throw ExecutionError("transaction control is not allowed here");
        },
        stmt.node);
}

// ---- CREATE ----

StatementResult Executor::exec_create(const CreateStmt& s, Bindings scope) {
    for (const auto& chain : s.graphs) {
        Uid cur = create_node(chain.head, scope);
        for (const auto& seg : chain.tail) {
            const auto* ep = std::get_if<EdgePattern>(&seg.link);
            if (!ep) throw ExecutionError("path patterns are not allowed in CREATE");
            Uid next = create_node(seg.node, scope);
            create_edge(*ep, cur, next, scope);
            cur = next;
        }
    }
    for (const auto& t : s.then) execute(t, scope);
    return StatementResult::none();
}

TypeId Executor::resolve_node_labels(const std::vector<std::string>& labels) {
    const TypeDescriptor* prev = nullptr;
    TypeId current = 0;
    for (const auto& label : labels) {
        const TypeDescriptor* t = tx_.catalog().lookup_label(label, TypeKind::Node);
        if (!t) {
            std::optional<std::string> under;
            if (prev) under = prev->label;
            current = tx_.mutable_catalog().define_node_type(label, {}, under);
        } else {
            if (prev && !tx_.catalog().is_subtype_of(t->id, prev->id))
                throw ExecutionError("label " + label + " is not a subtype of " + prev->label);
            current = t->id;
        }
        prev = &tx_.catalog().get(current);
    }
    return current;
}

std::map<std::string, Value> Executor::evaluate_doc(TypeId type, const DocEntries& doc,
                                                    const Bindings& scope) {
    std::map<std::string, Value> values;
    Lookup lookup = lookup_in(scope);
    for (const auto& [key, e] : doc) {
        if (values.contains(key)) throw ExecutionError("property " + key + " is given twice");
        values[key] = evaluate_scalar(e, lookup, &tx_.view());
    }
    fit_columns(type, values);
    return values;
}

void Executor::fit_columns(TypeId type, const std::map<std::string, Value>& values) {
    for (const auto& [key, v] : values) {
        if (v.is_null()) continue;
        auto col = tx_.catalog().effective_column(type, key);
        if (!col) {
            auto dt = infer_type(v);
            if (!dt) throw ExecutionError("cannot infer a column type for " + key + " from " + to_literal(v));
            tx_.mutable_catalog().widen_type(type, ColumnDescriptor{key, *dt, true});
        } else if (col->type.base == BaseType::Integer && v.is_decimal()) {
            tx_.mutable_catalog().retype_column(type, key, DataType{BaseType::Decimal});
        }
    }
}

Uid Executor::create_node(const ItemPattern& p, Bindings& scope) {
    if (p.where) throw ExecutionError("WHERE is not allowed in CREATE patterns");
    if (p.alias) {
        if (auto it = scope.find(*p.alias); it != scope.end()) {
            if (it->second.kind != BoundValue::Kind::Node)
                throw ExecutionError(*p.alias + " is not bound to a node");
            if (!p.labels.empty() || !p.doc.empty())
                throw ExecutionError(*p.alias + " is already bound; a reference takes no labels or properties");
            return it->second.uid;
        }
    }
    if (p.labels.empty()) {
        if (p.alias) throw ExecutionError("unbound identifier " + *p.alias);
        throw ExecutionError("a new node needs a label");
    }
    TypeId type = resolve_node_labels(p.labels);
    auto values = evaluate_doc(type, p.doc, scope);
    Uid uid = tx_.insert_node(type, std::move(values));
    if (p.alias) scope[*p.alias] = BoundValue::node(uid);
    return uid;
}

void Executor::create_edge(const EdgePattern& p, Uid left, Uid right, Bindings& scope) {
    const ItemPattern& item = p.item;
    if (item.where) throw ExecutionError("WHERE is not allowed in CREATE patterns");
    if (item.alias && scope.contains(*item.alias))
        throw ExecutionError(*item.alias + " is already bound; CREATE makes new edges only");
    if (item.labels.size() != 1) throw ExecutionError("a new edge needs exactly one label");
    bool forward = p.direction == Direction::Forward;
    Uid leaving = forward ? left : right;
    Uid arriving = forward ? right : left;
    TypeId from = tx_.view().row(leaving)->type;
    TypeId to = tx_.view().row(arriving)->type;

    const std::string& label = item.labels.front();
    const TypeDescriptor* td = tx_.catalog().lookup_label(label, TypeKind::Edge);
    TypeId type;
    if (!td) {
        type = tx_.mutable_catalog().define_edge_type(label, {}, tx_.catalog().get(from).label,
                                                      tx_.catalog().get(to).label);
    } else {
        type = td->id;
        auto generalize = [&](bool side_leaving, TypeId actual) {
            const TypeDescriptor& d = tx_.catalog().get(type);
            TypeId declared = side_leaving ? d.leaving_type : d.arriving_type;
            if (tx_.catalog().is_subtype_of(actual, declared)) return;
            auto common = tx_.catalog().common_supertype(declared, actual);
            if (!common)
                throw ExecutionError("edge type " + d.label + (side_leaving ? " leaves " : " arrives at ") +
                                     tx_.catalog().get(declared).label + ", not " +
                                     tx_.catalog().get(actual).label);
            tx_.mutable_catalog().set_edge_endpoint(type, side_leaving, *common);
        };
        generalize(true, from);
        generalize(false, to);
    }
    auto values = evaluate_doc(type, item.doc, scope);
    Uid uid = tx_.insert_edge(type, leaving, arriving, std::move(values));
    if (item.alias) scope[*item.alias] = BoundValue::edge(uid);
}

// ---- MATCH ----

StatementResult Executor::exec_match(const MatchStmt& s, const Bindings& scope) {
    MatchOutput out = find_bindings(s, tx_.view(), scope);
    if (s.returns) {
        ResultTable table;
        for (const auto& item : *s.returns) table.columns.push_back(return_column_name(item));
        for (std::size_t i = 0; i < out.rows.size(); ++i) {
            Bindings b = merged(scope, out.binding(i));
            Lookup lookup = lookup_in(b);
            std::vector<BoundValue> row;
            for (const auto& item : *s.returns) row.push_back(evaluate(item.expr, lookup, &tx_.view()));
            table.rows.push_back(std::move(row));
        }
        return StatementResult::of(std::move(table));
    }
    if (!s.dependent.empty() || s.then_block) {
        for (std::size_t i = 0; i < out.rows.size(); ++i) {
            Bindings b = merged(scope, out.binding(i));
            for (const auto& d : s.dependent) execute(d, b);
            if (s.then_block)
                for (const auto& t : *s.then_block) execute(t, b);
        }
        return StatementResult::none();
    }
    if (out.columns.empty()) return StatementResult::boolean(!out.rows.empty());
    return StatementResult::of(ResultTable{out.columns, std::move(out.rows)});
}

// ---- SET / DELETE ----

StatementResult Executor::exec_set(const SetStmt& s, const Bindings& scope) {
    Lookup lookup = lookup_in(scope);
    std::map<Uid, std::map<std::string, Value>> changes;
    for (const auto& a : s.assignments) {
        auto it = scope.find(a.target);
        if (it == scope.end()) throw ExecutionError("unbound identifier " + a.target);
        if (a.path.empty()) throw ExecutionError("SET needs a property of " + a.target);
        std::vector<Uid> targets;
        collect_elements(it->second, targets);
        if (targets.empty()) throw ExecutionError(a.target + " is not bound to a node or edge");
        Value v = evaluate_scalar(a.value, lookup, &tx_.view());
        for (Uid u : targets) {
            const Row* r = tx_.view().row(u);
            if (!r) throw ExecutionError("element " + std::to_string(u) + " no longer exists");
            const std::string& column = a.path.front();
            auto& pending = changes[u];
            if (a.path.size() == 1) {
                fit_columns(r->type, {{column, v}});
                pending[column] = v;
            } else {
                auto prior = pending.find(column);
                Value base = prior != pending.end() ? prior->second : r->value_or_null(column);
                Value rec = with_field(base, a.path, 1, v);
                fit_columns(r->type, {{column, rec}});
                pending[column] = rec;
            }
        }
    }
    for (const auto& [uid, c] : changes) tx_.update_row(uid, c);
    return StatementResult::none();
}

StatementResult Executor::exec_delete(const DeleteStmt& s, const Bindings& scope) {
    std::vector<Uid> targets;
    for (const auto& name : s.targets) {
        auto it = scope.find(name);
        if (it == scope.end()) throw ExecutionError("unbound identifier " + name);
        std::size_t before = targets.size();
        collect_elements(it->second, targets);
        if (targets.size() == before) throw ExecutionError(name + " is not bound to a node or edge");
    }
    // Edges first, so that deleting an edge and its endpoint together needs no CASCADE.
    std::stable_sort(targets.begin(), targets.end(),
                     [&](Uid a, Uid b) { return tx_.view().is_edge(a) > tx_.view().is_edge(b); });
    for (Uid u : targets)
        if (tx_.view().contains(u)) tx_.delete_row(u, s.cascade);
    return StatementResult::none();
}

// ---- schema ----

StatementResult Executor::exec_create_type(const CreateTypeStmt& s) {
    Catalog& cat = tx_.mutable_catalog();
    std::vector<ColumnDescriptor> columns;
    for (const auto& c : s.columns)
        columns.push_back(ColumnDescriptor{c.name, resolve_type_name(cat, c.type_name), !c.not_null});
    switch (s.kind) {
        case CreateTypeStmt::Kind::Node:
            cat.define_node_type(s.name, std::move(columns), s.under);
            break;
        case CreateTypeStmt::Kind::Edge:
            if (s.under) throw ExecutionError("edge types cannot be declared UNDER another type");
            cat.define_edge_type(s.name, std::move(columns), s.leaving, s.arriving);
            break;
        case CreateTypeStmt::Kind::Unspecified: {
            const TypeDescriptor* super = s.under ? cat.lookup_label(*s.under) : nullptr;
            if (s.under && !super) throw SchemaError("unknown supertype " + *s.under);
            if (super && super->kind == TypeKind::Node)
                cat.define_node_type(s.name, std::move(columns), s.under);
            else if (super && super->kind == TypeKind::Edge)
                throw ExecutionError("edge types cannot be declared UNDER another type");
            else
                cat.define_plain_type(s.name, std::move(columns), s.under);
            break;
        }
    }
    return StatementResult::none();
}

StatementResult Executor::exec_alter(const AlterStmt& s) {
    TypeId id = tx_.catalog().require_label(s.name).id;
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, AlterStmt::AddPrimaryKey>) {
                tx_.alter_primary_key(id, a.columns);
            } else if constexpr (std::is_same_v<T, AlterStmt::DropColumn>) {
                tx_.drop_column(id, a.column);
            } else if constexpr (std::is_same_v<T, AlterStmt::AddColumn>) {
                if (a.column.not_null)
                    throw ExecutionError("cannot add NOT NULL column " + a.column.name +
                                         ": existing rows have no value for it");
                Catalog& cat = tx_.mutable_catalog();
                cat.widen_type(id, ColumnDescriptor{a.column.name,
                                                    resolve_type_name(cat, a.column.type_name), true});
            } else if constexpr (std::is_same_v<T, AlterStmt::AddCheck>) {
                tx_.mutable_catalog().add_constraint(id, Constraint{a.name.value_or(""), a.condition});
            } else if constexpr (std::is_same_v<T, AlterStmt::SetCardinality>) {
                const TypeDescriptor& d = tx_.catalog().get(id);
                if (d.kind != TypeKind::Edge) throw SchemaError(d.label + " is not an edge type");
                Multiplicity m = d.multiplicity;
                if (a.leaving) {
                    m.leaving_min = a.leaving->min;
                    m.leaving_max = a.leaving->max;
                }
                if (a.arriving) {
                    m.arriving_min = a.arriving->min;
                    m.arriving_max = a.arriving->max;
                }
                tx_.mutable_catalog().set_multiplicity(id, m);
            }
        },
        s.action);
    return StatementResult::none();
}

StatementResult Executor::exec_show(const ShowStmt& s) {
    const Snapshot& view = tx_.view();
    const Catalog& cat = view.catalog();
    ResultTable t;
    if (s.kind == ShowStmt::Kind::Graphs) {
        t.columns = {"REPRESENTATIVE", "NODES", "EDGES"};
        for (const auto& c : view.graphs().components())
            t.rows.push_back({BoundValue::node(c.representative),
                              BoundValue::of(Value(static_cast<std::int64_t>(c.nodes.size()))),
                              BoundValue::of(Value(static_cast<std::int64_t>(c.edges.size())))});
        return StatementResult::of(std::move(t));
    }
    t.columns = {"LABEL", "KIND", "UNDER", "KEY", "COLUMNS", "DETAIL", "ROWS"};
    for (const auto& [id, d] : cat.types()) {
        std::string columns, key, detail;
        for (const auto& c : cat.effective_columns(id))
            columns += (columns.empty() ? "" : ",") + c.name + " " + to_string(c.type);
        for (const auto& k : cat.effective_key(id)) key += (key.empty() ? "" : ",") + k;
        if (d.kind == TypeKind::Edge) {
            const auto& m = d.multiplicity;
            detail = cat.get(d.leaving_type).label + "->" + cat.get(d.arriving_type).label +
                     " LEAVING " + bounds_text(m.leaving_min, m.leaving_max) + " ARRIVING " +
                     bounds_text(m.arriving_min, m.arriving_max);
        }
        for (const auto& c : d.constraints) detail += (detail.empty() ? "" : "; ") + c.name + ": " + to_source(c.condition);
        std::int64_t rows = d.kind == TypeKind::Plain ? 0 : static_cast<std::int64_t>(view.scan(id, false).size());
        t.rows.push_back({BoundValue::of(Value(d.label)), BoundValue::of(Value(to_string(d.kind))),
                          BoundValue::of(d.supertype ? Value(cat.get(*d.supertype).label) : Value()),
                          BoundValue::of(Value(key)), BoundValue::of(Value(columns)),
                          BoundValue::of(Value(detail)), BoundValue::of(Value(rows))});
    }
    return StatementResult::of(std::move(t));
}

}  // namespace tgdb
