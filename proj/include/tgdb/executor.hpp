#pragma once
// Statement execution inside one transaction.

#include <string>
#include <vector>

#include "tgdb/ast.hpp"
#include "tgdb/matcher.hpp"
#include "tgdb/store.hpp"

namespace tgdb {

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<BoundValue>> rows;
};

struct StatementResult {
    enum class Kind { None, Table, Truth };

    Kind kind = Kind::None;
    ResultTable table;
    bool truth = false;

    static StatementResult none() { return {}; }
    static StatementResult of(ResultTable t) { return {Kind::Table, std::move(t), false}; }
    static StatementResult boolean(bool b) { return {Kind::Truth, {}, b}; }
};

class Executor {
public:
    explicit Executor(Transaction& tx) : tx_(tx) {}

    // Runs one statement. `scope` holds identifiers bound by an enclosing
    // MATCH or CREATE. Transaction-control statements are the session's job.
    StatementResult execute(const Statement& stmt, const Bindings& scope = {});

private:
    StatementResult exec_create(const CreateStmt& s, Bindings scope);
    StatementResult exec_match(const MatchStmt& s, const Bindings& scope);
    StatementResult exec_set(const SetStmt& s, const Bindings& scope);
    StatementResult exec_delete(const DeleteStmt& s, const Bindings& scope);
    StatementResult exec_create_type(const CreateTypeStmt& s);
    StatementResult exec_alter(const AlterStmt& s);
    StatementResult exec_show(const ShowStmt& s);

    Uid create_node(const ItemPattern& p, Bindings& scope);
    void create_edge(const EdgePattern& p, Uid left, Uid right, Bindings& scope);
    TypeId resolve_node_labels(const std::vector<std::string>& labels);
    std::map<std::string, Value> evaluate_doc(TypeId type, const DocEntries& doc,
                                              const Bindings& scope);
    // Adds or widens columns so that `values` fit the type.
    void fit_columns(TypeId type, const std::map<std::string, Value>& values);

    Transaction& tx_;
};

// Name of a RETURN column: its alias, else the property or identifier name,
// else the expression text.
std::string return_column_name(const ReturnItem& item);

}  // namespace tgdb
