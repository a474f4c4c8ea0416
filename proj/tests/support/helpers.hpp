#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "tgdb/render.hpp"
#include "tgdb/session.hpp"

namespace tgdb::testkit {

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path source_path(const std::string& rel) {
    return std::filesystem::path(TGDB_SOURCE_DIR) / rel;
}

// Fresh per-test directory under the system temp dir.
class TempDir {
public:
    explicit TempDir(const std::string& name) {
        path_ = std::filesystem::temp_directory_path() /
                ("tgdb_test_" + std::to_string(::getpid()) + "_" + name);
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& f) const { return path_ / f; }

private:
    std::filesystem::path path_;
};

inline std::string render(Session& s, const std::string& text) {
    StatementResult r = s.execute(text);
    return render_result(r, s.view());
}

// Column values of a table result, rendered.
inline std::multiset<std::string> column(Session& s, const std::string& text, std::size_t col = 0) {
    StatementResult r = s.execute(text);
    Snapshot v = s.view();
    std::multiset<std::string> out;
    for (const auto& row : r.table.rows) out.insert(render_value(row.at(col), v));
    return out;
}

inline const char* kFamily =
    "[CREATE (a:Person {name:'Fred Smith'})<-[:Child]-(b:Person {name:'Peter Smith'}),"
    " (a)-[:Child]->(c:Person {name:'Mary Smith'})-[:Child]->(d:Person {name:'Lee Smith'}),"
    " (c)-[:Child]->(e:Person {name:'Bill Smith'})]";

}  // namespace tgdb::testkit
