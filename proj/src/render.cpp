#include "tgdb/render.hpp"

#include <cctype>

namespace tgdb {

namespace {

const char* const kRule = "-----\n";

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

std::string render_value(const BoundValue& v, const Snapshot& snap) {
    switch (v.kind) {
        case BoundValue::Kind::Scalar: return v.scalar.is_null() ? "" : to_display(v.scalar);
        case BoundValue::Kind::Node:
        case BoundValue::Kind::Edge: {
            const Row* r = snap.row(v.uid);
            if (!r) return "#" + std::to_string(v.uid);
            const Catalog& cat = snap.catalog();
            std::string out = cat.get(r->type).label + "(";
            bool first = true;
            for (const auto& c : cat.effective_columns(r->type)) {
                const Value* val = r->get(c.name);
                if (!val) continue;
                if (!first) out += ",";
                first = false;
                out += c.name + "=" + to_display(*val);
            }
            return out + ")";
        }
        case BoundValue::Kind::Array: {
            std::string out = "ARRAY[";
            bool first = true;
            for (const auto& item : v.elements()) {
                if (!first) out += ",";
                first = false;
                out += render_value(item, snap);
            }
            return out + "]";
        }
    }
    return {};
}

std::string render_result(const StatementResult& r, const Snapshot& snap) {
    switch (r.kind) {
        case StatementResult::Kind::None: return {};
        case StatementResult::Kind::Truth: return r.truth ? "true\n" : "false\n";
        case StatementResult::Kind::Table: break;
    }
    std::string out = kRule;
    out += "|";
    for (const auto& c : r.table.columns) out += upper(c) + "|";
    out += "\n";
    out += kRule;
    for (const auto& row : r.table.rows) {
        out += "|";
        for (const auto& v : row) out += render_value(v, snap) + "|";
        out += "\n";
    }
    out += kRule;
    return out;
}

}  // namespace tgdb
