#include "tgdb/session.hpp"

#include "tgdb/parser.hpp"

namespace tgdb {

Session::~Session() {
    if (tx_ && tx_->is_open()) db_.rollback(*tx_);
}

Snapshot Session::view() const { return tx_ ? tx_->view() : db_.snapshot(); }

StatementResult Session::execute(const Statement& stmt) {
    if (const auto* t = stmt.as<TransactionStmt>()) {
        switch (t->kind) {
            case TransactionStmt::Kind::Begin:
                if (tx_) throw ExecutionError("a transaction is already open");
                tx_.emplace(db_.begin());
                break;
            case TransactionStmt::Kind::Commit: {
                if (!tx_) throw ExecutionError("no transaction is open");
                Transaction tx = std::move(*tx_);
                tx_.reset();
                db_.commit(tx);
                break;
            }
            case TransactionStmt::Kind::Rollback:
                if (!tx_) throw ExecutionError("no transaction is open");
                db_.rollback(*tx_);
                tx_.reset();
                break;
        }
        return StatementResult::none();
    }

    if (tx_) {
        auto sp = tx_->savepoint();
        try {
            return Executor(*tx_).execute(stmt);
        } catch (...) {
            tx_->restore(sp);
            throw;
        }
    }

    Transaction tx = db_.begin();
    StatementResult r;
    try {
        r = Executor(tx).execute(stmt);
    } catch (...) {
        db_.rollback(tx);
        throw;
    }
    db_.commit(tx);
    return r;
}

StatementResult Session::execute(std::string_view text) {
    StatementResult last;
    for (const auto& s : parse_statements(text)) last = execute(s);
    return last;
}

}  // namespace tgdb
