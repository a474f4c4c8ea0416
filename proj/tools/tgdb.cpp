// tgdb <dbfile> [--script FILE] [--time] [--keep-going] [--http [PORT]]

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "tgdb/httpd.hpp"
#include "tgdb/shell.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Typed graph database shell"};
    std::string db_path;
    std::string script;
    bool time = false;
    bool keep_going = false;
    bool sync = false;
    int port = tgdb::kDefaultHttpPort;
    app.add_option("dbfile", db_path, "Database log file (created if missing)")->required();
    app.add_option("--script", script, "Run statements from FILE instead of the interactive shell");
    app.add_flag("--time", time, "Print per-statement timing and throughput");
    app.add_flag("--keep-going", keep_going, "Continue a script after an error");
    app.add_flag("--sync", sync, "fsync the log after every commit");
    auto* http = app.add_option("--http", port, "Serve the graph export on PORT")
                     ->expected(0, 1)
                     ->default_val(tgdb::kDefaultHttpPort);
    CLI11_PARSE(app, argc, argv);

    try {
        tgdb::Database db(db_path, tgdb::DatabaseOptions{sync});
        for (const auto& w : db.warnings()) std::cerr << "warning: " << w << "\n";
        tgdb::Session session(db);

        std::optional<tgdb::HttpServer> server;
        if (http->count() > 0) {
            server.emplace(db);
            if (script.empty()) {
                int bound = server->start("0.0.0.0", port);
                std::cerr << "serving on port " << bound << "\n";
            }
        }

        tgdb::ShellOptions opts;
        opts.time = time;
        opts.keep_going = keep_going;
        int status = 0;
        if (!script.empty()) {
            std::ifstream in(script);
            if (!in) {
                std::cerr << "cannot open " << script << "\n";
                return 1;
            }
            status = tgdb::run_shell(session, in, std::cout, std::cerr, opts);
            if (server) {
                std::cerr << "serving on port " << port << "\n";
                server->listen("0.0.0.0", port);
            }
        } else {
            opts.interactive = true;
            status = tgdb::run_shell(session, std::cin, std::cout, std::cerr, opts);
        }
        return status;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
