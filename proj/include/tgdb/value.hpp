#pragma once
// Scalar values stored in rows and produced by expressions.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tgdb/error.hpp"

namespace tgdb {

struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    // Accepts YYYY-MM-DD; throws ExecutionError on malformed or impossible dates.
    static Date parse(std::string_view text);
    std::string to_string() const;
};

struct Currency {
    double amount = 0;
    std::string code;  // ISO 4217 code, empty when unspecified

    bool operator==(const Currency&) const = default;
};

class Value;

// A structured (record) value: ordered field list.
struct Record {
    std::shared_ptr<const std::vector<std::pair<std::string, Value>>> fields;

    bool operator==(const Record& other) const;
};

class Value {
public:
    using Storage =
        std::variant<std::monostate, std::int64_t, double, std::string, bool, Date, Currency, Record>;

    Value() = default;
    Value(std::int64_t v) : data_(v) {}
    Value(int v) : data_(static_cast<std::int64_t>(v)) {}
    Value(double v) : data_(v) {}
    Value(std::string v) : data_(std::move(v)) {}
    Value(const char* v) : data_(std::string(v)) {}
    Value(bool v) : data_(v) {}
    Value(Date v) : data_(v) {}
    Value(Currency v) : data_(std::move(v)) {}
    Value(Record v) : data_(std::move(v)) {}

    static Value record(std::vector<std::pair<std::string, Value>> fields);

    bool is_null() const { return std::holds_alternative<std::monostate>(data_); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
    bool is_decimal() const { return std::holds_alternative<double>(data_); }
    bool is_numeric() const { return is_int() || is_decimal(); }
    bool is_string() const { return std::holds_alternative<std::string>(data_); }
    bool is_bool() const { return std::holds_alternative<bool>(data_); }
    bool is_date() const { return std::holds_alternative<Date>(data_); }
    bool is_currency() const { return std::holds_alternative<Currency>(data_); }
    bool is_record() const { return std::holds_alternative<Record>(data_); }

    std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
    double as_decimal() const { return std::get<double>(data_); }
    const std::string& as_string() const { return std::get<std::string>(data_); }
    bool as_bool() const { return std::get<bool>(data_); }
    const Date& as_date() const { return std::get<Date>(data_); }
    const Currency& as_currency() const { return std::get<Currency>(data_); }
    const Record& as_record() const { return std::get<Record>(data_); }

    // Numeric view of int, decimal and currency values.
    double to_double() const;

    const Storage& storage() const { return data_; }
    std::size_t kind_index() const { return data_.index(); }

    bool operator==(const Value&) const = default;

private:
    Storage data_;
};

// Total order used by indexes and result de-duplication: kind first, then value.
int compare_total(const Value& a, const Value& b);

struct ValueLess {
    bool operator()(const Value& a, const Value& b) const { return compare_total(a, b) < 0; }
};

// SQL comparison: numeric promotion across int/decimal/currency; nullopt when
// either side is NULL. Throws ExecutionError for incomparable kinds.
std::optional<int> compare_sql(const Value& a, const Value& b);

// Human-readable rendering (strings unquoted), as printed in result tables.
std::string to_display(const Value& v);

// Re-parseable literal form ('str', DATE'…', 1.5, TRUE, NULL …).
std::string to_literal(const Value& v);

// Shortest round-trip text for a double, always containing a '.' or exponent.
std::string format_decimal(double d);

enum class BaseType { Integer, Decimal, String, Boolean, Date, Currency, Structured };

struct DataType {
    BaseType base = BaseType::String;
    TypeId structured = 0;  // plain-type id when base == Structured

    bool operator==(const DataType&) const = default;
};

std::string to_string(BaseType t);
std::string to_string(const DataType& t);

// Column type inferred from a literal; nullopt for NULL and records.
std::optional<DataType> infer_type(const Value& v);

// Whether a stored value of this kind is acceptable for the column type.
// Integers conform to decimal columns. Structured columns are checked by the
// catalog, which knows the referenced plain type.
bool conforms(const Value& v, const DataType& t);

// Assignment conversion into a declared column type: numerics into currency,
// "<amount> <symbol|code>" strings into currency, ISO strings into dates.
// Returns nullopt when no conversion applies.
std::optional<Value> coerce(const Value& v, const DataType& t);

}  // namespace tgdb
