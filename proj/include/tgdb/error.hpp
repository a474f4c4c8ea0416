#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tgdb {

using Uid = std::uint64_t;
using TypeId = std::uint64_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Lexical or grammatical error; line and column are 1-based.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, int line, int column,
                std::vector<std::string> expected = {})
        : Error(format(message, line, column, expected)), line_(line), column_(column),
          expected_(std::move(expected)), bare_(message) {}

    int line() const { return line_; }
    int column() const { return column_; }
    const std::vector<std::string>& expected() const { return expected_; }
    const std::string& bare_message() const { return bare_; }

private:
    static std::string format(const std::string& message, int line, int column,
                              const std::vector<std::string>& expected) {
        std::string s = "syntax error at line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ": " + message;
        if (!expected.empty()) {
            s += " (expected ";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (i) s += i + 1 == expected.size() ? " or " : ", ";
                s += expected[i];
            }
            s += ")";
        }
        return s;
    }

    int line_;
    int column_;
    std::vector<std::string> expected_;
    std::string bare_;
};

// Schema definition or evolution failed (catalog).
class SchemaError : public Error {
public:
    using Error::Error;
};

// Commit-time or staging-time integrity failure. Names the type, the rule
// and the offending row uids.
class ValidationError : public Error {
public:
    ValidationError(std::string type_label, std::string rule, std::vector<Uid> uids,
                    const std::string& detail)
        : Error(format(type_label, rule, uids, detail)), type_label_(std::move(type_label)),
          rule_(std::move(rule)), uids_(std::move(uids)) {}

    const std::string& type_label() const { return type_label_; }
    const std::string& rule() const { return rule_; }
    const std::vector<Uid>& uids() const { return uids_; }

private:
    static std::string format(const std::string& type, const std::string& rule,
                              const std::vector<Uid>& uids, const std::string& detail) {
        std::string s = rule + " violation on " + type;
        if (!uids.empty()) {
            s += " (uid";
            for (auto u : uids) s += " " + std::to_string(u);
            s += ")";
        }
        if (!detail.empty()) s += ": " + detail;
        return s;
    }

    std::string type_label_;
    std::string rule_;
    std::vector<Uid> uids_;
};

// Statement execution failed for a reason other than schema or validation.
class ExecutionError : public Error {
public:
    using Error::Error;
};

}  // namespace tgdb
