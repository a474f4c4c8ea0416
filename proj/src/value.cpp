#include "tgdb/value.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace tgdb {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap(y) ? 29 : days[m - 1];
}

template <class T>
int three_way(const T& a, const T& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

std::string escape_quotes(const std::string& s) {
    std::string out;
    for (char c : s) {
        out += c;
        if (c == '\'') out += '\'';
    }
    return out;
}

}  // namespace

Date Date::parse(std::string_view text) {
    Date d;
    auto fail = [&] { throw ExecutionError("invalid date '" + std::string(text) + "'"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') fail();
    auto num = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, v);
        if (ec != std::errc{} || p != text.data() + pos + len) fail();
        return v;
    };
    d.year = num(0, 4);
    d.month = num(5, 2);
    d.day = num(8, 2);
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month)) fail();
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

bool Record::operator==(const Record& other) const {
    if (fields == other.fields) return true;
    if (!fields || !other.fields) return false;
    return *fields == *other.fields;
}

Value Value::record(std::vector<std::pair<std::string, Value>> fields) {
    return Value(Record{std::make_shared<const std::vector<std::pair<std::string, Value>>>(
        std::move(fields))});
}

double Value::to_double() const {
    if (is_int()) return static_cast<double>(as_int());
    if (is_decimal()) return as_decimal();
    if (is_currency()) return as_currency().amount;
    throw ExecutionError("value is not numeric: " + to_literal(*this));
}

int compare_total(const Value& a, const Value& b) {
    if (a.kind_index() != b.kind_index()) return a.kind_index() < b.kind_index() ? -1 : 1;
    return std::visit(
        [&](const auto& x) -> int {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.storage());
            if constexpr (std::is_same_v<T, std::monostate>) {
                return 0;
            } else if constexpr (std::is_same_v<T, Currency>) {
                if (int c = three_way(x.code, y.code)) return c;
                return three_way(x.amount, y.amount);
            } else if constexpr (std::is_same_v<T, Record>) {
                const auto& fx = *x.fields;
                const auto& fy = *y.fields;
                for (std::size_t i = 0; i < fx.size() && i < fy.size(); ++i) {
                    if (int c = three_way(fx[i].first, fy[i].first)) return c;
                    if (int c = compare_total(fx[i].second, fy[i].second)) return c;
                }
                return three_way(fx.size(), fy.size());
            } else {
                return three_way(x, y);
            }
        },
        a.storage());
}

std::optional<int> compare_sql(const Value& a, const Value& b) {
    if (a.is_null() || b.is_null()) return std::nullopt;
    bool an = a.is_numeric() || a.is_currency();
    bool bn = b.is_numeric() || b.is_currency();
    if (an && bn) {
        if (a.is_int() && b.is_int()) return three_way(a.as_int(), b.as_int());
        return three_way(a.to_double(), b.to_double());
    }
    if (a.kind_index() != b.kind_index())
        throw ExecutionError("cannot compare " + to_literal(a) + " with " + to_literal(b));
    return compare_total(a, b);
}

std::string format_decimal(double d) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
    std::string s(buf, p);
    if (std::isfinite(d) && s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::string to_display(const Value& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, double>) {
                return format_decimal(x);
            } else if constexpr (std::is_same_v<T, std::string>) {
                return x;
            } else if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else if constexpr (std::is_same_v<T, Date>) {
                return x.to_string();
            } else if constexpr (std::is_same_v<T, Currency>) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.2f", x.amount);
                return x.code.empty() ? std::string(buf) : std::string(buf) + " " + x.code;
            } else {
                std::string s = "(";
                bool first = true;
                for (const auto& [k, fv] : *x.fields) {
                    if (!first) s += ",";
                    first = false;
                    s += k + "=" + to_display(fv);
                }
                return s + ")";
            }
        },
        v.storage());
}

std::string to_literal(const Value& v) {
    return std::visit(
        [&](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return "NULL";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, double>) {
                return format_decimal(x);
            } else if constexpr (std::is_same_v<T, std::string>) {
                return "'" + escape_quotes(x) + "'";
            } else if constexpr (std::is_same_v<T, bool>) {
                return x ? "TRUE" : "FALSE";
            } else if constexpr (std::is_same_v<T, Date>) {
                return "DATE'" + x.to_string() + "'";
            } else if constexpr (std::is_same_v<T, Currency>) {
                return format_decimal(x.amount) + (x.code.empty() ? "" : " " + x.code);
            } else {
                std::string s = "{";
                bool first = true;
                for (const auto& [k, fv] : *x.fields) {
                    if (!first) s += ", ";
                    first = false;
                    s += "\"" + k + "\": " + to_literal(fv);
                }
                return s + "}";
            }
        },
        v.storage());
}

std::string to_string(BaseType t) {
    switch (t) {
        case BaseType::Integer: return "INTEGER";
        case BaseType::Decimal: return "DECIMAL";
        case BaseType::String: return "CHAR";
        case BaseType::Boolean: return "BOOLEAN";
        case BaseType::Date: return "DATE";
        case BaseType::Currency: return "CURRENCY";
        case BaseType::Structured: return "STRUCTURED";
    }
    return "?";
}

std::string to_string(const DataType& t) {
    if (t.base == BaseType::Structured) return "STRUCTURED#" + std::to_string(t.structured);
    return to_string(t.base);
}

std::optional<DataType> infer_type(const Value& v) {
    if (v.is_int()) return DataType{BaseType::Integer};
    if (v.is_decimal()) return DataType{BaseType::Decimal};
    if (v.is_string()) return DataType{BaseType::String};
    if (v.is_bool()) return DataType{BaseType::Boolean};
    if (v.is_date()) return DataType{BaseType::Date};
    if (v.is_currency()) return DataType{BaseType::Currency};
    return std::nullopt;
}

bool conforms(const Value& v, const DataType& t) {
    if (v.is_null()) return true;
    switch (t.base) {
        case BaseType::Integer: return v.is_int();
        case BaseType::Decimal: return v.is_numeric();
        case BaseType::String: return v.is_string();
        case BaseType::Boolean: return v.is_bool();
        case BaseType::Date: return v.is_date();
        case BaseType::Currency: return v.is_currency();
        case BaseType::Structured: return v.is_record();
    }
    return false;
}

namespace {

std::optional<std::string> currency_code(std::string_view sym) {
    if (sym == "\xE2\x82\xAC" || sym == "EUR") return "EUR";  // €
    if (sym == "\xC2\xA3" || sym == "GBP") return "GBP";      // £
    if (sym == "$" || sym == "USD") return "USD";
    if (sym.size() == 3) {
        for (char c : sym)
            if (c < 'A' || c > 'Z') return std::nullopt;
        return std::string(sym);
    }
    return std::nullopt;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::optional<Currency> parse_currency(std::string_view text) {
    text = trim(text);
    double amount = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), amount);
    if (ec != std::errc{} || p == text.data()) return std::nullopt;
    std::string_view rest = trim(std::string_view(p, text.data() + text.size() - p));
    if (rest.empty()) return Currency{amount, ""};
    auto code = currency_code(rest);
    if (!code) return std::nullopt;
    return Currency{amount, *code};
}

}  // namespace

std::optional<Value> coerce(const Value& v, const DataType& t) {
    if (conforms(v, t)) return v;
    if (t.base == BaseType::Currency) {
        if (v.is_numeric()) return Value(Currency{v.to_double(), ""});
        if (v.is_string()) {
            if (auto c = parse_currency(v.as_string())) return Value(*c);
        }
    }
    if (t.base == BaseType::Date && v.is_string()) {
        try {
            return Value(Date::parse(v.as_string()));
        } catch (const ExecutionError&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

}  // namespace tgdb
