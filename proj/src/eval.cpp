#include "tgdb/eval.hpp"

#include <cmath>
#include <limits>

#include "tgdb/store.hpp"

namespace tgdb {

BoundValue BoundValue::of(Value v) {
    BoundValue b;
    b.scalar = std::move(v);
    return b;
}

BoundValue BoundValue::node(Uid uid) {
    BoundValue b;
    b.kind = Kind::Node;
    b.uid = uid;
    return b;
}

BoundValue BoundValue::edge(Uid uid) {
    BoundValue b;
    b.kind = Kind::Edge;
    b.uid = uid;
    return b;
}

BoundValue BoundValue::array(std::vector<BoundValue> items) {
    BoundValue b;
    b.kind = Kind::Array;
    b.items = std::make_shared<const std::vector<BoundValue>>(std::move(items));
    return b;
}

const std::vector<BoundValue>& BoundValue::elements() const {
    static const std::vector<BoundValue> empty;
    return items ? *items : empty;
}

int compare_bound(const BoundValue& a, const BoundValue& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    switch (a.kind) {
        case BoundValue::Kind::Scalar: return compare_total(a.scalar, b.scalar);
        case BoundValue::Kind::Node:
        case BoundValue::Kind::Edge: return a.uid < b.uid ? -1 : a.uid > b.uid ? 1 : 0;
        case BoundValue::Kind::Array: {
            const auto& x = a.elements();
            const auto& y = b.elements();
            for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
                if (int c = compare_bound(x[i], y[i])) return c;
            return x.size() < y.size() ? -1 : x.size() > y.size() ? 1 : 0;
        }
    }
    return 0;
}

bool operator==(const BoundValue& a, const BoundValue& b) { return compare_bound(a, b) == 0; }

bool values_equal(const Value& a, const Value& b) {
    try {
        auto c = compare_sql(a, b);
        return c && *c == 0;
    } catch (const ExecutionError&) {
        return false;
    }
}

namespace {

Value field_of_value(const Value& v, const std::string& name) {
    if (v.is_null()) return Value();
    if (!v.is_record()) throw ExecutionError("cannot read field " + name + " of " + to_literal(v));
    for (const auto& [k, fv] : *v.as_record().fields)
        if (k == name) return fv;
    return Value();
}

BoundValue field_of(const BoundValue& b, const std::string& name, const Snapshot* snap) {
    switch (b.kind) {
        case BoundValue::Kind::Scalar: return BoundValue::of(field_of_value(b.scalar, name));
        case BoundValue::Kind::Node:
        case BoundValue::Kind::Edge: {
            const Row* r = snap ? snap->row(b.uid) : nullptr;
            if (!r) throw ExecutionError("element " + std::to_string(b.uid) + " no longer exists");
            return BoundValue::of(r->value_or_null(name));
        }
        case BoundValue::Kind::Array: {
            std::vector<BoundValue> out;
            for (const auto& item : b.elements()) out.push_back(field_of(item, name, snap));
            return BoundValue::array(std::move(out));
        }
    }
    return {};
}

std::int64_t checked(bool overflow, std::int64_t v) {
    if (overflow) throw ExecutionError("integer overflow");
    return v;
}

Value arithmetic(const std::string& op, const Value& a, const Value& b) {
    if (a.is_null() || b.is_null()) return Value();
    if (op == "||") return Value(to_display(a) + to_display(b));
    if (a.is_currency() || b.is_currency()) {
        if (a.is_currency() && b.is_currency()) {
            const auto& x = a.as_currency();
            const auto& y = b.as_currency();
            if (!x.code.empty() && !y.code.empty() && x.code != y.code)
                throw ExecutionError("currency mismatch: " + x.code + " and " + y.code);
            std::string code = x.code.empty() ? y.code : x.code;
            if (op == "+") return Value(Currency{x.amount + y.amount, code});
            if (op == "-") return Value(Currency{x.amount - y.amount, code});
            if (op == "/") {
                if (y.amount == 0) throw ExecutionError("division by zero");
                return Value(x.amount / y.amount);
            }
        } else if (a.is_currency() && b.is_numeric()) {
            const auto& x = a.as_currency();
            if (op == "*") return Value(Currency{x.amount * b.to_double(), x.code});
            if (op == "/") {
                if (b.to_double() == 0) throw ExecutionError("division by zero");
                return Value(Currency{x.amount / b.to_double(), x.code});
            }
        } else if (b.is_currency() && a.is_numeric() && op == "*") {
            const auto& y = b.as_currency();
            return Value(Currency{a.to_double() * y.amount, y.code});
        }
        throw ExecutionError("unsupported currency operation " + op);
    }
    if (!a.is_numeric() || !b.is_numeric())
        throw ExecutionError("operator " + op + " needs numbers, got " + to_literal(a) + " and " +
                             to_literal(b));
    if (a.is_int() && b.is_int()) {
        std::int64_t x = a.as_int(), y = b.as_int(), r = 0;
        if (op == "+") return Value(checked(__builtin_add_overflow(x, y, &r), r));
        if (op == "-") return Value(checked(__builtin_sub_overflow(x, y, &r), r));
        if (op == "*") return Value(checked(__builtin_mul_overflow(x, y, &r), r));
        if (op == "/") {
            if (y == 0) throw ExecutionError("division by zero");
            if (x % y == 0) return Value(x / y);
            return Value(static_cast<double>(x) / static_cast<double>(y));
        }
    }
    double x = a.to_double(), y = b.to_double();
    if (op == "+") return Value(x + y);
    if (op == "-") return Value(x - y);
    if (op == "*") return Value(x * y);
    if (op == "/") {
        if (y == 0) throw ExecutionError("division by zero");
        return Value(x / y);
    }
    throw ExecutionError("unknown operator " + op);
}

Value truth(std::optional<bool> b) { return b ? Value(*b) : Value(); }

std::optional<bool> as_truth(const Value& v, const char* op) {
    if (v.is_null()) return std::nullopt;
    if (!v.is_bool()) throw ExecutionError(std::string(op) + " needs a boolean, got " + to_literal(v));
    return v.as_bool();
}

BoundValue compare(const std::string& op, const BoundValue& a, const BoundValue& b) {
    if (!a.is_scalar() || !b.is_scalar()) {
        if (op != "=" && op != "<>") throw ExecutionError("operator " + op + " needs scalar operands");
        bool eq = a == b;
        return BoundValue::of(Value(op == "=" ? eq : !eq));
    }
    std::optional<int> c;
    if (op == "=" || op == "<>") {
        if (a.scalar.is_null() || b.scalar.is_null()) return BoundValue::of(Value());
        bool eq = values_equal(a.scalar, b.scalar);
        return BoundValue::of(Value(op == "=" ? eq : !eq));
    }
    c = compare_sql(a.scalar, b.scalar);
    if (!c) return BoundValue::of(Value());
    bool r = op == "<" ? *c < 0 : op == "<=" ? *c <= 0 : op == ">" ? *c > 0 : *c >= 0;
    return BoundValue::of(Value(r));
}

}  // namespace

BoundValue evaluate(const Expr& e, const Lookup& lookup, const Snapshot* snap) {
    switch (e.kind) {
        case Expr::Kind::Literal: return BoundValue::of(e.literal);
        case Expr::Kind::Ident: {
            const BoundValue* b = lookup ? lookup(e.name) : nullptr;
            if (!b) throw ExecutionError("unbound identifier " + e.name);
            return *b;
        }
        case Expr::Kind::Field: return field_of(evaluate(e.args[0], lookup, snap), e.name, snap);
        case Expr::Kind::Unary: {
            Value v = evaluate_scalar(e.args[0], lookup, snap);
            if (e.name == "NOT") {
                auto t = as_truth(v, "NOT");
                return BoundValue::of(truth(t ? std::optional<bool>(!*t) : std::nullopt));
            }
            if (v.is_null()) return BoundValue::of(Value());
            if (v.is_int()) {
                if (v.as_int() == std::numeric_limits<std::int64_t>::min())
                    throw ExecutionError("integer overflow");
                return BoundValue::of(Value(-v.as_int()));
            }
            if (v.is_decimal()) return BoundValue::of(Value(-v.as_decimal()));
            if (v.is_currency()) {
                Currency c = v.as_currency();
                c.amount = -c.amount;
                return BoundValue::of(Value(c));
            }
            throw ExecutionError("cannot negate " + to_literal(v));
        }
        case Expr::Kind::Binary: {
            const std::string& op = e.name;
            if (op == "AND" || op == "OR") {
                auto l = as_truth(evaluate_scalar(e.args[0], lookup, snap), op.c_str());
                bool is_and = op == "AND";
                if (l && *l != is_and) return BoundValue::of(Value(!is_and));
                auto r = as_truth(evaluate_scalar(e.args[1], lookup, snap), op.c_str());
                if (r && *r != is_and) return BoundValue::of(Value(!is_and));
                if (!l || !r) return BoundValue::of(Value());
                return BoundValue::of(Value(is_and));
            }
            BoundValue a = evaluate(e.args[0], lookup, snap);
            BoundValue b = evaluate(e.args[1], lookup, snap);
            if (op == "=" || op == "<>" || op == "<" || op == "<=" || op == ">" || op == ">=")
                return compare(op, a, b);
            if (!a.is_scalar() || !b.is_scalar())
                throw ExecutionError("operator " + op + " needs scalar operands");
            return BoundValue::of(arithmetic(op, a.scalar, b.scalar));
        }
        case Expr::Kind::IsNull: {
            BoundValue v = evaluate(e.args[0], lookup, snap);
            bool null = v.is_scalar() && v.scalar.is_null();
            return BoundValue::of(Value(e.negated ? !null : null));
        }
        case Expr::Kind::Doc: {
            std::vector<std::pair<std::string, Value>> fields;
            for (std::size_t i = 0; i < e.keys.size(); ++i)
                fields.emplace_back(e.keys[i], evaluate_scalar(e.args[i], lookup, snap));
            return BoundValue::of(Value::record(std::move(fields)));
        }
    }
    return {};
}

Value evaluate_scalar(const Expr& e, const Lookup& lookup, const Snapshot* snap) {
    BoundValue b = evaluate(e, lookup, snap);
    if (!b.is_scalar()) throw ExecutionError("expected a scalar value in " + to_source(e));
    return b.scalar;
}

bool evaluate_predicate(const Expr& e, const Lookup& lookup, const Snapshot* snap) {
    auto t = as_truth(evaluate_scalar(e, lookup, snap), "WHERE");
    return t && *t;
}

}  // namespace tgdb
