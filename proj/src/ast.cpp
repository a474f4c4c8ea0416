#include "tgdb/ast.hpp"

#include <cctype>
#include <set>

namespace tgdb {

Expr Expr::lit(Value v) {
    Expr e;
    e.kind = Kind::Literal;
    e.literal = std::move(v);
    return e;
}

Expr Expr::ident(std::string name) {
    Expr e;
    e.kind = Kind::Ident;
    e.name = std::move(name);
    return e;
}

Expr Expr::field(Expr base, std::string name) {
    Expr e;
    e.kind = Kind::Field;
    e.name = std::move(name);
    e.args.push_back(std::move(base));
    return e;
}

Expr Expr::unary(std::string op, Expr operand) {
    Expr e;
    e.kind = Kind::Unary;
    e.name = std::move(op);
    e.args.push_back(std::move(operand));
    return e;
}

Expr Expr::binary(std::string op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = Kind::Binary;
    e.name = std::move(op);
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
}

Expr Expr::is_null(Expr operand, bool negated) {
    Expr e;
    e.kind = Kind::IsNull;
    e.negated = negated;
    e.args.push_back(std::move(operand));
    return e;
}

Expr Expr::doc(std::vector<std::pair<std::string, Expr>> entries) {
    Expr e;
    e.kind = Kind::Doc;
    for (auto& [k, v] : entries) {
        e.keys.push_back(std::move(k));
        e.args.push_back(std::move(v));
    }
    return e;
}

namespace {

const std::set<std::string>& reserved() {
    static const std::set<std::string> words = {
        "AND",   "OR",     "NOT",  "NULL",   "TRUE",  "FALSE",  "IS",     "RETURN",
        "THEN",  "END",    "WHERE", "MATCH", "CREATE", "SET",   "DELETE", "AS",
        "ALTER", "BEGIN",  "COMMIT", "ROLLBACK", "GRANT", "SHOW", "TRAIL", "ACYCLIC",
        "SIMPLE", "SHORTEST", "ALL", "ANY",  "CASCADE", "RESTRICT", "DATE"};
    return words;
}

bool plain_identifier(const std::string& s) {
    if (s.empty()) return false;
    auto start = static_cast<unsigned char>(s[0]);
    if (!(std::isupper(start) || start == '_')) return false;
    for (unsigned char c : s)
        if (!(std::isupper(c) || std::isdigit(c) || c == '_')) return false;
    return !reserved().contains(s);
}

std::string literal_source(const Value& v) {
    if (v.is_currency()) {
        const auto& c = v.as_currency();
        std::string sym = c.code == "EUR" ? "\xE2\x82\xAC" : c.code == "GBP" ? "\xC2\xA3" : "$";
        std::string amount = format_decimal(c.amount);
        if (c.amount < 0) return "(-" + amount.substr(1) + sym + ")";
        return amount + sym;
    }
    if ((v.is_int() && v.as_int() < 0) || (v.is_decimal() && v.as_decimal() < 0))
        return "(" + to_literal(v) + ")";
    return to_literal(v);
}

std::string doc_source(const std::vector<std::string>& keys, const std::vector<Expr>& values) {
    std::string s = "{";
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i) s += ", ";
        s += quote_identifier(keys[i]) + ": " + to_source(values[i]);
    }
    return s + "}";
}

std::string doc_source(const DocEntries& doc) {
    std::vector<std::string> keys;
    std::vector<Expr> values;
    for (const auto& [k, v] : doc) {
        keys.push_back(k);
        values.push_back(v);
    }
    return doc_source(keys, values);
}

std::string item_source(const ItemPattern& item) {
    std::string s;
    if (item.alias) s += quote_identifier(*item.alias);
    for (const auto& l : item.labels) s += ":" + quote_identifier(l);
    if (!item.doc.empty()) s += (s.empty() ? "" : " ") + doc_source(item.doc);
    if (item.where) s += (s.empty() ? "WHERE " : " WHERE ") + to_source(*item.where);
    return s;
}

std::string quantifier_source(const Quantifier& q) {
    switch (q.form) {
        case Quantifier::Form::Optional: return "?";
        case Quantifier::Form::Star: return "*";
        case Quantifier::Form::Plus: return "+";
        case Quantifier::Form::Range: break;
    }
    return "{" + std::to_string(q.min) + "," + (q.max ? std::to_string(*q.max) : "") + "}";
}

std::string column_source(const ColumnDef& c) {
    return quote_identifier(c.name) + " " + c.type_name + (c.not_null ? " NOT NULL" : "");
}

std::string bounds_source(const Bounds& b) {
    return std::to_string(b.min) + ".." + (b.max ? std::to_string(*b.max) : "*");
}

std::string statements_source(const std::vector<Statement>& list) {
    std::string s;
    for (const auto& st : list) s += " " + to_source(st) + ";";
    return s;
}

}  // namespace

std::string quote_identifier(const std::string& name) {
    if (plain_identifier(name)) return name;
    std::string s = "\"";
    for (char c : name) {
        s += c;
        if (c == '"') s += '"';
    }
    return s + "\"";
}

std::string to_source(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Literal: return literal_source(e.literal);
        case Expr::Kind::Ident: return quote_identifier(e.name);
        case Expr::Kind::Field: {
            const Expr& base = e.args[0];
            std::string b = to_source(base);
            if (base.kind != Expr::Kind::Ident && base.kind != Expr::Kind::Field) b = "(" + b + ")";
            return b + "." + quote_identifier(e.name);
        }
        case Expr::Kind::Unary:
            return "(" + e.name + (e.name == "NOT" ? " " : "") + to_source(e.args[0]) + ")";
        case Expr::Kind::Binary:
            return "(" + to_source(e.args[0]) + " " + e.name + " " + to_source(e.args[1]) + ")";
        case Expr::Kind::IsNull:
            return "(" + to_source(e.args[0]) + (e.negated ? " IS NOT NULL)" : " IS NULL)");
        case Expr::Kind::Doc: return doc_source(e.keys, e.args);
    }
    return "";
}

std::string to_source(const MatchChain& c) {
    std::string s = "(" + item_source(c.head) + ")";
    for (const auto& seg : c.tail) {
        if (const auto* e = std::get_if<EdgePattern>(&seg.link)) {
            if (e->direction == Direction::Forward)
                s += "-[" + item_source(e->item) + "]->";
            else
                s += "<-[" + item_source(e->item) + "]-";
        } else {
            const auto& p = std::get<PathPattern>(seg.link);
            s += " [" + to_source(*p.body) + "]" + quantifier_source(p.quantifier) + " ";
        }
        s += "(" + item_source(seg.node) + ")";
    }
    return s;
}

namespace {

struct SourceVisitor {
    std::string operator()(const CreateStmt& c) const {
        std::string s = "CREATE ";
        for (std::size_t i = 0; i < c.graphs.size(); ++i) {
            if (i) s += ", ";
            s += to_source(c.graphs[i]);
        }
        if (!c.then.empty()) s += " THEN " + to_source(c.then.front());
        return s;
    }

    std::string operator()(const MatchStmt& m) const {
        std::string s = "MATCH ";
        for (std::size_t i = 0; i < m.matches.size(); ++i) {
            const auto& mi = m.matches[i];
            if (i) s += ", ";
            switch (mi.repetition) {
                case RepetitionMode::Trail: s += "TRAIL "; break;
                case RepetitionMode::Acyclic: s += "ACYCLIC "; break;
                case RepetitionMode::Simple: s += "SIMPLE "; break;
                case RepetitionMode::None: break;
            }
            switch (mi.selection) {
                case SelectionMode::Shortest: s += "SHORTEST "; break;
                case SelectionMode::All: s += "ALL "; break;
                case SelectionMode::Any: s += "ANY "; break;
                case SelectionMode::None: break;
            }
            if (mi.path_alias) s += quote_identifier(*mi.path_alias) + " = ";
            s += to_source(mi.chain);
        }
        if (m.where) s += " WHERE " + to_source(*m.where);
        if (m.returns) {
            s += " RETURN ";
            for (std::size_t i = 0; i < m.returns->size(); ++i) {
                const auto& r = (*m.returns)[i];
                if (i) s += ", ";
                s += to_source(r.expr);
                if (r.alias) s += " AS " + quote_identifier(*r.alias);
            }
        }
        if (!m.dependent.empty()) s += " " + to_source(m.dependent.front());
        if (m.then_block) s += " THEN" + statements_source(*m.then_block) + " END";
        return s;
    }

    std::string operator()(const SetStmt& st) const {
        std::string s = "SET ";
        for (std::size_t i = 0; i < st.assignments.size(); ++i) {
            const auto& a = st.assignments[i];
            if (i) s += ", ";
            s += quote_identifier(a.target);
            for (const auto& p : a.path) s += "." + quote_identifier(p);
            s += " = " + to_source(a.value);
        }
        return s;
    }

    std::string operator()(const DeleteStmt& d) const {
        std::string s = "DELETE ";
        for (std::size_t i = 0; i < d.targets.size(); ++i) {
            if (i) s += ", ";
            s += quote_identifier(d.targets[i]);
        }
        return d.cascade ? s + " CASCADE" : s;
    }

    std::string operator()(const CreateTypeStmt& t) const {
        std::string s = "CREATE TYPE " + quote_identifier(t.name);
        if (t.under) s += " UNDER " + quote_identifier(*t.under);
        if (!t.columns.empty()) {
            s += " AS (";
            for (std::size_t i = 0; i < t.columns.size(); ++i) {
                if (i) s += ", ";
                s += column_source(t.columns[i]);
            }
            s += ")";
        }
        if (t.kind == CreateTypeStmt::Kind::Node) s += " NODETYPE";
        if (t.kind == CreateTypeStmt::Kind::Edge)
            s += " EDGETYPE(LEAVING " + quote_identifier(t.leaving) + ", ARRIVING " +
                 quote_identifier(t.arriving) + ")";
        return s;
    }

    std::string operator()(const AlterStmt& a) const {
        std::string s = std::string("ALTER ") + (a.is_type ? "TYPE " : "TABLE ") +
                        quote_identifier(a.name) + " ";
        return s + std::visit(
                       [](const auto& act) -> std::string {
                           using T = std::decay_t<decltype(act)>;
                           if constexpr (std::is_same_v<T, AlterStmt::AddPrimaryKey>) {
                               std::string k = "ADD PRIMARY KEY(";
                               for (std::size_t i = 0; i < act.columns.size(); ++i) {
                                   if (i) k += ", ";
                                   k += quote_identifier(act.columns[i]);
                               }
                               return k + ")";
                           } else if constexpr (std::is_same_v<T, AlterStmt::DropColumn>) {
                               return "DROP " + quote_identifier(act.column);
                           } else if constexpr (std::is_same_v<T, AlterStmt::AddColumn>) {
                               return "ADD COLUMN " + column_source(act.column);
                           } else if constexpr (std::is_same_v<T, AlterStmt::AddCheck>) {
                               std::string c = "ADD ";
                               if (act.name) c += "CONSTRAINT " + quote_identifier(*act.name) + " ";
                               return c + "CHECK (" + to_source(act.condition) + ")";
                           } else {
                               std::string c = "SET CARDINALITY";
                               if (act.leaving) c += " LEAVING " + bounds_source(*act.leaving);
                               if (act.arriving) c += " ARRIVING " + bounds_source(*act.arriving);
                               return c;
                           }
                       },
                       a.action);
    }

    std::string operator()(const TransactionStmt& t) const {
        switch (t.kind) {
            case TransactionStmt::Kind::Begin: return "BEGIN";
            case TransactionStmt::Kind::Commit: return "COMMIT";
            case TransactionStmt::Kind::Rollback: return "ROLLBACK";
        }
        return "";
    }

    std::string operator()(const NoopStmt& n) const { return n.text; }

    std::string operator()(const ShowStmt& s) const {
        return s.kind == ShowStmt::Kind::Graphs ? "SHOW GRAPHS" : "SHOW TYPES";
    }
};

}  // namespace

std::string to_source(const Statement& s) { return std::visit(SourceVisitor{}, s.node); }

}  // namespace tgdb
