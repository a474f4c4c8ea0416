#pragma once

#include <map>
#include <memory>
#include <string>

#include "tgdb/error.hpp"
#include "tgdb/value.hpp"

namespace tgdb {

// One node or edge instance. Absent columns read as NULL.
struct Row {
    Uid uid = 0;
    TypeId type = 0;
    std::map<std::string, Value> values;

    const Value* get(const std::string& column) const {
        auto it = values.find(column);
        return it == values.end() ? nullptr : &it->second;
    }
    Value value_or_null(const std::string& column) const {
        const Value* v = get(column);
        return v ? *v : Value();
    }

    bool operator==(const Row&) const = default;
};

using RowPtr = std::shared_ptr<const Row>;

struct Endpoints {
    Uid leaving = 0;
    Uid arriving = 0;

    bool operator==(const Endpoints&) const = default;
};

}  // namespace tgdb
