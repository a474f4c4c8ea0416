#include "tgdb/shell.hpp"

#include <chrono>
#include <cstdio>
#include <istream>
#include <ostream>

#include "tgdb/parser.hpp"
#include "tgdb/render.hpp"

namespace tgdb {

namespace {

bool blank(const std::string& s) {
    std::size_t i = s.find_first_not_of(" \t\r\n");
    if (i == std::string::npos) return true;
    return s.compare(i, 2, "//") == 0 && s.find('\n', i) == std::string::npos;
}

std::string format_ms(double seconds) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f ms", seconds * 1000);
    return buf;
}

}  // namespace

std::optional<Chunk> ChunkReader::feed(const std::string& line, int line_no) {
    if (buffer_.empty()) {
        if (blank(line)) return std::nullopt;
        start_ = line_no;
    } else {
        buffer_ += '\n';
    }
    buffer_ += line;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quote_) {
            if (c == quote_) quote_ = 0;
        } else if (c == '\'' || c == '"') {
            quote_ = c;
        } else if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') {
            break;
        } else if (c == '[') {
            ++depth_;
        } else if (c == ']') {
            --depth_;
        }
    }
    if (depth_ > 0 || quote_) return std::nullopt;
    return flush();
}

std::optional<Chunk> ChunkReader::flush() {
    if (buffer_.empty()) return std::nullopt;
    Chunk c{std::move(buffer_), start_};
    buffer_.clear();
    depth_ = 0;
    quote_ = 0;
    if (blank(c.text)) return std::nullopt;
    return c;
}

int run_shell(Session& session, std::istream& in, std::ostream& out, std::ostream& err,
              const ShellOptions& options, ShellSummary* summary) {
    using Clock = std::chrono::steady_clock;
    ShellSummary local;
    ShellSummary& sum = summary ? *summary : local;
    ChunkReader reader;
    bool stop = false;

    auto report = [&](int line, const std::string& message) {
        ++sum.errors;
        err << "error at line " << line << ": " << message << "\n";
        if (!options.interactive && !options.keep_going) stop = true;
    };

    auto run_chunk = [&](const Chunk& chunk) {
        std::vector<Statement> statements;
        try {
            statements = parse_statements(chunk.text);
        } catch (const SyntaxError& e) {
            int line = chunk.line + e.line() - 1;
            report(line, SyntaxError(e.bare_message(), line, e.column(), e.expected()).what());
            return;
        }
        for (const auto& s : statements) {
            int line = chunk.line + s.line - 1;
            auto t0 = Clock::now();
            try {
                StatementResult r = session.execute(s);
                double dt = std::chrono::duration<double>(Clock::now() - t0).count();
                sum.seconds += dt;
                ++sum.statements;
                out << render_result(r, session.view());
                if (options.time) out << "(" << format_ms(dt) << ")\n";
            } catch (const Error& e) {
                sum.seconds += std::chrono::duration<double>(Clock::now() - t0).count();
                ++sum.statements;
                report(line, e.what());
            }
            if (stop) return;
        }
    };

    std::string line;
    int line_no = 0;
    if (options.interactive) out << "SQL> " << std::flush;
    while (!stop && std::getline(in, line)) {
        ++line_no;
        if (auto chunk = reader.feed(line, line_no)) run_chunk(*chunk);
        if (options.interactive) out << (reader.pending() ? "> " : "SQL> ") << std::flush;
    }
    if (!stop) {
        if (auto chunk = reader.flush()) run_chunk(*chunk);
    }
    if (options.interactive) out << "\n";

    if (options.time) {
        double rate = sum.seconds > 0 ? static_cast<double>(sum.statements) / sum.seconds : 0;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%zu statements, %zu errors, %.3f s, %.0f statements/s\n",
                      sum.statements, sum.errors, sum.seconds, rate);
        out << buf;
    }
    return !options.interactive && sum.errors > 0 ? 1 : 0;
}

}  // namespace tgdb
