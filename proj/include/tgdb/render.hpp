#pragma once
// Text rendering of values and result tables for the shell.

#include <string>

#include "tgdb/executor.hpp"

namespace tgdb {

// Nodes and edges print as LABEL(COL=value,…) with the current column
// values, arrays as ARRAY[…], scalars as displayed text (NULL is empty).
std::string render_value(const BoundValue& v, const Snapshot& snap);

// Dashed table layout:
//   -----
//   |A|B|
//   -----
//   |1|2|
//   -----
// Truth results print as `true` or `false`; empty results print nothing.
std::string render_result(const StatementResult& r, const Snapshot& snap);

}  // namespace tgdb
