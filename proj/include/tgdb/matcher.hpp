#pragma once
// MATCH evaluation by backtracking over a snapshot.
//
// The pattern is walked left to right; each step binds one candidate and
// hands the rest of the pattern to a continuation. Returning from the
// continuation undoes the binding so the next candidate can be tried.
// Candidates are enumerated in ascending uid order, and quantified paths
// try more iterations before fewer.

#include <map>
#include <string>
#include <vector>

#include "tgdb/ast.hpp"
#include "tgdb/eval.hpp"
#include "tgdb/store.hpp"

namespace tgdb {

using Bindings = std::map<std::string, BoundValue>;

struct MatchOutput {
    // Identifiers bound by the match (not by the outer scope), in order of
    // first appearance.
    std::vector<std::string> columns;
    // One entry per distinct binding row, values in `columns` order.
    std::vector<std::vector<BoundValue>> rows;
    // Walk (alternating node and edge uids) that produced each row.
    std::vector<std::vector<Uid>> walks;

    Bindings binding(std::size_t row) const;
};

// Evaluates the MATCH part of the statement (patterns, modes and WHERE).
// RETURN and dependent statements are the executor's business.
MatchOutput find_bindings(const MatchStmt& stmt, const Snapshot& snap, const Bindings& outer = {});

// Identifiers a match would bind, in order; throws ExecutionError when one
// identifier is used both as a node and as an edge.
std::vector<std::string> match_identifiers(const std::vector<MatchItem>& items,
                                           const Bindings& outer);

}  // namespace tgdb
