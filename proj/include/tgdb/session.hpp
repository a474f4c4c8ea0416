#pragma once
// A client session: auto-commit by default, explicit BEGIN/COMMIT/ROLLBACK.

#include <optional>
#include <string>
#include <string_view>

#include "tgdb/executor.hpp"
#include "tgdb/store.hpp"

namespace tgdb {

class Session {
public:
    explicit Session(Database& db) : db_(db) {}
    ~Session();

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    // Runs one statement. Outside an explicit transaction the statement is
    // committed on success; inside one, a failing statement is undone and
    // the transaction stays open.
    StatementResult execute(const Statement& stmt);
    // Parses and runs every statement in `text`; returns the last result.
    StatementResult execute(std::string_view text);

    bool in_transaction() const { return tx_.has_value(); }
    // The state this session's statements see.
    Snapshot view() const;
    Database& database() { return db_; }

private:
    Database& db_;
    std::optional<Transaction> tx_;
};

}  // namespace tgdb
