#pragma once
// Statement syntax trees. Structural equality ignores source positions.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tgdb/value.hpp"

namespace tgdb {

// Owning pointer with value semantics, for recursive tree nodes.
template <class T>
class Box {
public:
    Box() : p_(std::make_unique<T>()) {}
    Box(T v) : p_(std::make_unique<T>(std::move(v))) {}
    Box(const Box& o) : p_(std::make_unique<T>(*o.p_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& o) {
        if (this != &o) p_ = std::make_unique<T>(*o.p_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;

    T& operator*() { return *p_; }
    const T& operator*() const { return *p_; }
    T* operator->() { return p_.get(); }
    const T* operator->() const { return p_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return *a.p_ == *b.p_; }

private:
    std::unique_ptr<T> p_;
};

struct Expr {
    enum class Kind { Literal, Ident, Field, Unary, Binary, IsNull, Doc };

    Kind kind = Kind::Literal;
    Value literal;                  // Literal
    std::string name;               // Ident name, Field name, operator symbol
    std::vector<Expr> args;         // operands; Field: [base]; Doc: values
    std::vector<std::string> keys;  // Doc keys
    bool negated = false;           // IS NOT NULL

    static Expr lit(Value v);
    static Expr ident(std::string name);
    static Expr field(Expr base, std::string name);
    static Expr unary(std::string op, Expr operand);
    static Expr binary(std::string op, Expr lhs, Expr rhs);
    static Expr is_null(Expr operand, bool negated);
    static Expr doc(std::vector<std::pair<std::string, Expr>> entries);

    bool is_ident() const { return kind == Kind::Ident; }

    bool operator==(const Expr&) const = default;
};

using DocEntries = std::vector<std::pair<std::string, Expr>>;

// Body of a node or edge pattern: `a:Label:Sub {k: v} WHERE …`.
struct ItemPattern {
    std::optional<std::string> alias;
    std::vector<std::string> labels;
    DocEntries doc;
    std::optional<Expr> where;

    bool empty() const { return !alias && labels.empty() && doc.empty() && !where; }
    bool operator==(const ItemPattern&) const = default;
};

enum class Direction {
    Forward,   // -[ … ]->   edge leaves the left node
    Backward,  // <-[ … ]-   edge leaves the right node
};

struct EdgePattern {
    Direction direction = Direction::Forward;
    ItemPattern item;

    bool operator==(const EdgePattern&) const = default;
};

struct Quantifier {
    enum class Form { Optional, Star, Plus, Range };
    Form form = Form::Range;
    std::uint32_t min = 1;
    std::optional<std::uint32_t> max;  // nullopt = unbounded

    static Quantifier optional() { return {Form::Optional, 0, 1}; }
    static Quantifier star() { return {Form::Star, 0, std::nullopt}; }
    static Quantifier plus() { return {Form::Plus, 1, std::nullopt}; }
    static Quantifier range(std::uint32_t lo, std::optional<std::uint32_t> hi) {
        return {Form::Range, lo, hi};
    }

    bool operator==(const Quantifier&) const = default;
};

struct MatchChain;

struct PathPattern {
    Box<MatchChain> body;
    Quantifier quantifier;

    bool operator==(const PathPattern&) const = default;
};

struct Segment {
    std::variant<EdgePattern, PathPattern> link;
    ItemPattern node;

    bool operator==(const Segment&) const = default;
};

// Node {(Edge | Path) Node}
struct MatchChain {
    ItemPattern head;
    std::vector<Segment> tail;

    bool operator==(const MatchChain&) const = default;
};

enum class RepetitionMode { None, Trail, Acyclic, Simple };
enum class SelectionMode { None, Shortest, All, Any };

struct MatchItem {
    RepetitionMode repetition = RepetitionMode::None;
    SelectionMode selection = SelectionMode::None;
    std::optional<std::string> path_alias;
    MatchChain chain;

    bool operator==(const MatchItem&) const = default;
};

struct Statement;

struct CreateStmt {
    std::vector<MatchChain> graphs;
    std::vector<Statement> then;  // zero or one statement

    bool operator==(const CreateStmt&) const;
};

struct ReturnItem {
    Expr expr;
    std::optional<std::string> alias;

    bool operator==(const ReturnItem&) const = default;
};

struct MatchStmt {
    std::vector<MatchItem> matches;
    std::optional<Expr> where;
    std::optional<std::vector<ReturnItem>> returns;
    std::vector<Statement> dependent;  // zero or one statement
    std::optional<std::vector<Statement>> then_block;

    bool operator==(const MatchStmt&) const;
};

struct Assignment {
    std::string target;
    std::vector<std::string> path;  // dotted property path after the target
    Expr value;

    bool operator==(const Assignment&) const = default;
};

struct SetStmt {
    std::vector<Assignment> assignments;

    bool operator==(const SetStmt&) const = default;
};

struct DeleteStmt {
    std::vector<std::string> targets;
    bool cascade = false;

    bool operator==(const DeleteStmt&) const = default;
};

struct ColumnDef {
    std::string name;
    std::string type_name;  // as written, upper-cased
    bool not_null = false;

    bool operator==(const ColumnDef&) const = default;
};

struct CreateTypeStmt {
    enum class Kind { Unspecified, Node, Edge };

    std::string name;
    std::optional<std::string> under;
    std::vector<ColumnDef> columns;
    Kind kind = Kind::Unspecified;
    std::string leaving;   // Edge
    std::string arriving;  // Edge

    bool operator==(const CreateTypeStmt&) const = default;
};

struct Bounds {
    std::uint64_t min = 0;
    std::optional<std::uint64_t> max;

    bool operator==(const Bounds&) const = default;
};

struct AlterStmt {
    struct AddPrimaryKey {
        std::vector<std::string> columns;
        bool operator==(const AddPrimaryKey&) const = default;
    };
    struct DropColumn {
        std::string column;
        bool operator==(const DropColumn&) const = default;
    };
    struct AddColumn {
        ColumnDef column;
        bool operator==(const AddColumn&) const = default;
    };
    struct AddCheck {
        std::optional<std::string> name;
        Expr condition;
        bool operator==(const AddCheck&) const = default;
    };
    struct SetCardinality {
        std::optional<Bounds> leaving;
        std::optional<Bounds> arriving;
        bool operator==(const SetCardinality&) const = default;
    };

    bool is_type = false;  // ALTER TYPE vs ALTER TABLE
    std::string name;
    std::variant<AddPrimaryKey, DropColumn, AddColumn, AddCheck, SetCardinality> action;

    bool operator==(const AlterStmt&) const = default;
};

struct TransactionStmt {
    enum class Kind { Begin, Commit, Rollback };
    Kind kind = Kind::Begin;
    bool operator==(const TransactionStmt&) const = default;
};

// Accepted and ignored (roles and grants).
struct NoopStmt {
    std::string text;
    bool operator==(const NoopStmt&) const = default;
};

struct ShowStmt {
    enum class Kind { Graphs, Types };
    Kind kind = Kind::Graphs;
    bool operator==(const ShowStmt&) const = default;
};

struct Statement {
    std::variant<CreateStmt, MatchStmt, SetStmt, DeleteStmt, CreateTypeStmt, AlterStmt,
                 TransactionStmt, NoopStmt, ShowStmt>
        node;
    int line = 1;
    int column = 1;

    template <class T>
    const T* as() const {
        return std::get_if<T>(&node);
    }

    bool operator==(const Statement& o) const { return node == o.node; }
};

inline bool CreateStmt::operator==(const CreateStmt& o) const {
    return graphs == o.graphs && then == o.then;
}

inline bool MatchStmt::operator==(const MatchStmt& o) const {
    return matches == o.matches && where == o.where && returns == o.returns &&
           dependent == o.dependent && then_block == o.then_block;
}

// Source text that reparses to a structurally equal tree.
std::string to_source(const Expr& e);
std::string to_source(const MatchChain& c);
std::string to_source(const Statement& s);

// Identifier as it must be written to reparse to `name`.
std::string quote_identifier(const std::string& name);

}  // namespace tgdb
