#pragma once
// Interactive shell and script runner.
//
// Input is read line by line. A line whose square brackets do not balance
// starts a multi-line block that continues until they do, so
//   [CREATE (a:T),
//    (a)-[:E]->(:T)]
// is one chunk. Each chunk may hold several ';'-separated statements.

#include <iosfwd>
#include <optional>
#include <string>

#include "tgdb/session.hpp"

namespace tgdb {

struct Chunk {
    std::string text;
    int line = 1;  // line of the chunk's first character
};

class ChunkReader {
public:
    // Returns a chunk once its brackets balance.
    std::optional<Chunk> feed(const std::string& line, int line_no);
    // Whatever is buffered at end of input (unbalanced), if anything.
    std::optional<Chunk> flush();
    bool pending() const { return !buffer_.empty(); }

private:
    std::string buffer_;
    int start_ = 0;
    int depth_ = 0;
    char quote_ = 0;
};

struct ShellOptions {
    bool interactive = false;  // prompts, and errors never stop the session
    bool time = false;         // per-statement timing and a throughput summary
    bool keep_going = false;   // scripts continue after an error
};

struct ShellSummary {
    std::size_t statements = 0;
    std::size_t errors = 0;
    double seconds = 0;  // time spent executing statements
};

// Returns the process exit status: 0, or 1 when a script hit an error.
int run_shell(Session& session, std::istream& in, std::ostream& out, std::ostream& err,
              const ShellOptions& options, ShellSummary* summary = nullptr);

}  // namespace tgdb
