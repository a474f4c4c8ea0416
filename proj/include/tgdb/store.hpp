#pragma once
// Row storage, key indexes, transactions and the database handle.
//
// A Snapshot is an immutable database state built from persistent maps, so
// copying one is cheap. A Transaction edits a private working Snapshot and
// publishes it on commit after validation.

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tgdb/catalog.hpp"
#include "tgdb/commit_log.hpp"
#include "tgdb/graphset.hpp"
#include "tgdb/pmap.hpp"
#include "tgdb/row.hpp"

namespace tgdb {

struct KeyEntry {
    Value key;
    Uid uid = 0;
};

struct KeyEntryLess {
    bool operator()(const KeyEntry& a, const KeyEntry& b) const {
        int c = compare_total(a.key, b.key);
        return c != 0 ? c < 0 : a.uid < b.uid;
    }
};

class Snapshot {
public:
    Snapshot();

    const Catalog& catalog() const { return *catalog_; }
    std::shared_ptr<const Catalog> catalog_ptr() const { return catalog_; }

    const Row* row(Uid uid) const;
    bool contains(Uid uid) const { return rows_.contains(uid); }
    std::size_t row_count() const { return rows_.size(); }
    bool is_node(Uid uid) const;
    bool is_edge(Uid uid) const { return edge_ends_.contains(uid); }

    // Uids of the type's rows, ascending; optionally including subtypes.
    std::vector<Uid> scan(TypeId type, bool include_subtypes = true) const;
    // All node (or edge) uids, ascending.
    std::vector<Uid> all_nodes() const;
    std::vector<Uid> all_edges() const;
    // Rows of the type (and subtypes) whose column equals `value`. Uses the
    // key index for single-column keys.
    std::vector<Uid> index_lookup(TypeId type, const std::string& column, const Value& value) const;
    // Node of the type (or a subtype) with the given primary key value.
    std::optional<Uid> find_by_key(TypeId type, const Value& key) const;
    // For the primary key and each unique key of the row's hierarchy: the
    // uids (including the row itself) holding the same key value.
    std::vector<std::pair<std::vector<std::string>, std::vector<Uid>>> key_matches(const Row& r) const;
    // Primary key value of a row: the column value, or a record for composite keys.
    Value key_of(const Row& row) const;

    const PSet<Uid>& out_edges(Uid node) const;
    const PSet<Uid>& in_edges(Uid node) const;
    std::optional<Endpoints> endpoints(Uid edge) const;

    const GraphSet& graphs() const { return graphs_; }
    Uid next_uid() const { return next_uid_; }
    std::uint64_t commit_seq() const { return commit_seq_; }

    // Canonical encoding of catalog, rows and uid counter.
    std::string canonical_bytes() const;
    // Hex FNV-1a hash of canonical_bytes().
    std::string digest() const;

private:
    friend class Transaction;
    friend class Database;
    friend void apply_delta(Snapshot& s, const CommitDelta& d);

    static std::string index_name(TypeId root, const std::vector<std::string>& cols);
    std::vector<std::vector<std::string>> index_specs(TypeId root) const;
    std::optional<Value> key_value(const Row& row, const std::vector<std::string>& cols) const;

    void index_insert(const Row& r);
    void index_remove(const Row& r);
    void rebuild_indexes(TypeId root);
    std::vector<Uid> lookup_index(const std::string& name, const Value& key) const;
    Uid resolve_endpoint(TypeId node_type, const Value* key) const;

    // Inserts or replaces a row, maintaining indexes and adjacency. Edge
    // endpoints are resolved through the key index unless given.
    void put_row(RowPtr row, std::optional<Endpoints> ends = std::nullopt);
    void erase_row(Uid uid);
    void set_catalog(std::shared_ptr<const Catalog> c) { catalog_ = std::move(c); }

    std::shared_ptr<const Catalog> catalog_;
    PMap<Uid, RowPtr> rows_;
    PMap<TypeId, PSet<Uid>> by_type_;
    PMap<std::string, PSet<KeyEntry, KeyEntryLess>> indexes_;
    PMap<Uid, Endpoints> edge_ends_;
    PMap<Uid, PSet<Uid>> out_;
    PMap<Uid, PSet<Uid>> in_;
    GraphSet graphs_;
    Uid next_uid_ = 1;
    std::uint64_t commit_seq_ = 0;
};

// Applies a logged transaction to a snapshot (used by replay). Maintains the
// graph registry as a live commit would.
void apply_delta(Snapshot& s, const CommitDelta& d);

class Database;

struct CascadeReport {
    std::vector<TypeId> edge_types;
    std::size_t edges_rewritten = 0;
};

class Transaction {
public:
    enum class Status { Open, Committed, Aborted };

    struct Savepoint {
        Snapshot work;
        PSet<Uid> touched;
    };

    Status status() const { return status_; }
    bool is_open() const { return status_ == Status::Open; }
    // The working state: committed base plus this transaction's changes.
    const Snapshot& view() const { return work_; }
    const Snapshot& base() const { return base_; }
    const Catalog& catalog() const { return work_.catalog(); }
    bool has_changes() const;

    // Schema operations.
    Catalog& mutable_catalog();
    CascadeReport alter_primary_key(TypeId type, std::vector<std::string> columns);
    void drop_column(TypeId type, const std::string& column);

    // Row operations. Values are coerced to the declared column types.
    Uid insert_node(TypeId type, std::map<std::string, Value> values);
    Uid insert_edge(TypeId type, Uid leaving, Uid arriving, std::map<std::string, Value> values);
    // NULL values remove the property. Changing a node key rewrites the
    // LEAVING/ARRIVING references of its incident edges.
    void update_row(Uid uid, const std::map<std::string, Value>& changes);
    // Deleting a node with incident edges fails unless `cascade`.
    void delete_row(Uid uid, bool cascade = false);

    Savepoint savepoint() const { return {work_, touched_}; }
    void restore(const Savepoint& sp);

private:
    friend class Database;
    Transaction(const Database* db, Snapshot base);

    void require_open() const;
    void touch(Uid uid) { touched_.insert(uid); }
    Value conform_value(TypeId type, const std::string& column, const Value& v) const;
    void rewrite_edge_refs(Uid node);

    const Database* db_;
    Snapshot base_;
    Snapshot work_;
    PSet<Uid> touched_;
    Catalog* owned_catalog_ = nullptr;
    Status status_ = Status::Open;
};

struct CommitRecord {
    std::uint64_t seq = 0;
    std::size_t rows_written = 0;
    std::size_t types_written = 0;
    std::size_t bytes = 0;
};

struct DatabaseOptions {
    bool sync = false;  // fsync after every commit record
};

class Database {
public:
    // In-memory database without a log.
    Database();
    // Opens (or creates) the log file and replays it.
    explicit Database(const std::filesystem::path& path, DatabaseOptions options = {});
    ~Database();

    Database(const Database&) = delete;
    Database& operator=(const Database&) = delete;

    // The file stem of the log, or "memory".
    const std::string& name() const { return name_; }
    Snapshot snapshot() const;
    Transaction begin() const;
    // Validates and publishes; throws (and aborts the transaction) on failure.
    CommitRecord commit(Transaction& tx);
    void rollback(Transaction& tx);

    const std::vector<std::string>& warnings() const { return warnings_; }
    std::string state_digest() const { return snapshot().digest(); }

private:
    mutable std::shared_mutex head_mu_;
    std::mutex commit_mu_;
    Snapshot head_;
    std::optional<CommitLog> log_;
    std::string name_ = "memory";
    std::vector<std::string> warnings_;
};

// Checks every rule against the whole state (test oracle for the
// touched-neighbourhood validation done at commit). Throws ValidationError.
void validate_full(const Snapshot& s);

}  // namespace tgdb
