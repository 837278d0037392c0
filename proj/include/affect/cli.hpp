#pragma once

// Command-line front end. Exit codes: 0 success, 1 assertion failure,
// 2 usage, parse or runtime error.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "affect/narrative.hpp"
#include "affect/runner.hpp"
#include "affect/scenario.hpp"
#include "affect/service.hpp"
#include "affect/trace_json.hpp"

namespace affect::cli {

enum class Format { text, structured };

struct RunOptions {
    Format format = Format::text;
    std::string trace_path;
};

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string static_dir;
    std::string data_dir;
    std::string cors_origin = "*";
    std::size_t max_agents = 64;
    long idle_ttl_seconds = 0;
};

inline bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::stringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

inline void report_failures(const RunReport& report, std::ostream& err) {
    for (const auto& r : report.results) {
        if (r.passed) continue;
        err << "assertion failed at step " << r.step << " (line " << r.assertion.line << "): " << r.message << '\n';
    }
}

/// Runs a parsed scenario and renders it. `quiet` prints only the
/// assertion summary.
inline int run_scenario(const Scenario& sc, const RunOptions& opts, bool quiet, std::ostream& out, std::ostream& err) {
    RunReport report;
    try {
        report = run(sc);
    } catch (const AffectError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    if (!opts.trace_path.empty()) {
        std::ofstream f(opts.trace_path, std::ios::binary | std::ios::trunc);
        f << encode_trace(report.trace);
        if (!f) {
            err << "error: cannot write trace to " << opts.trace_path << '\n';
            return 2;
        }
    }
    if (!quiet) {
        if (opts.format == Format::structured)
            out << encode_trace(report.trace);
        else
            write_narrative(out, report.trace);
    }
    report_failures(report, err);
    const std::size_t failed = report.failures();
    if (quiet || opts.format == Format::text)
        out << report.results.size() - failed << " of " << report.results.size() << " assertions passed\n";
    return failed == 0 ? 0 : 1;
}

inline int cmd_run(const std::string& path, const RunOptions& opts, bool quiet, std::ostream& out, std::ostream& err) {
    std::string text;
    if (!read_file(path, text)) {
        err << "error: cannot read " << path << '\n';
        return 2;
    }
    Scenario sc;
    try {
        sc = parse_scenario(text);
    } catch (const ParseError& e) {
        for (const auto& d : e.diagnostics()) err << path << ':' << d.line << ':' << d.column << ": " << d.message << '\n';
        return 2;
    }
    return run_scenario(sc, opts, quiet, out, err);
}

/// Blocks until the server stops. `on_ready` runs after the socket is bound.
inline int cmd_serve(const ServeOptions& opts, std::ostream& out, std::ostream& err,
                     const std::function<void(httplib::Server&)>& on_ready = {}) {
    ServiceConfig config;
    config.max_agents = opts.max_agents;
    config.cors_origin = opts.cors_origin;
    if (opts.idle_ttl_seconds > 0) config.idle_ttl = std::chrono::seconds(opts.idle_ttl_seconds);
    if (!opts.data_dir.empty()) config.data_dir = opts.data_dir;

    std::unique_ptr<Service> service;
    try {
        service = std::make_unique<Service>(config);
    } catch (const std::exception& e) {
        err << "error: cannot load sessions: " << e.what() << '\n';
        return 2;
    }
    httplib::Server server;
    // no SO_REUSEPORT: a port held by another process must fail to bind
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
    });
    service->mount(server);
    if (!opts.static_dir.empty() && !server.set_mount_point("/", opts.static_dir)) {
        err << "error: static directory " << opts.static_dir << " does not exist\n";
        return 2;
    }
    if (!server.bind_to_port(opts.host, opts.port)) {
        err << "error: cannot bind " << opts.host << ':' << opts.port << '\n';
        return 2;
    }
    out << "listening on http://" << opts.host << ':' << opts.port << std::endl;
    if (on_ready) on_ready(server);
    return server.listen_after_bind() ? 0 : 2;
}

inline int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                const std::function<void(httplib::Server&)>& on_ready = {}) {
    CLI::App app{"Multi-agent affect simulator"};
    app.require_subcommand(1);

    std::string path;
    std::string format = "text";
    RunOptions run_opts;

    auto* run_cmd = app.add_subcommand("run", "Run a scenario and print the narrative or trace");
    run_cmd->add_option("path", path, "Scenario file (.af)")->required();
    run_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "structured"}));
    run_cmd->add_option("--trace", run_opts.trace_path, "Also write the trace document here");

    auto* check_cmd = app.add_subcommand("check", "Run a scenario, printing only assertion results");
    check_cmd->add_option("path", path, "Scenario file (.af)")->required();

    bool print_script = false;
    auto* demo_cmd = app.add_subcommand("demo", "Run the built-in three-agent demonstration");
    demo_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "structured"}));
    demo_cmd->add_option("--trace", run_opts.trace_path, "Also write the trace document here");
    demo_cmd->add_flag("--script", print_script, "Print the demonstration script instead of running it");

    ServeOptions serve_opts;
    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP session API");
    serve_cmd->add_option("--port", serve_opts.port, "TCP port")->check(CLI::Range(1, 65535));
    serve_cmd->add_option("--host", serve_opts.host, "Bind address");
    serve_cmd->add_option("--static", serve_opts.static_dir, "Directory of editor assets to serve at /");
    serve_cmd->add_option("--data-dir", serve_opts.data_dir, "Persist sessions as scripts in this directory");
    serve_cmd->add_option("--cors-origin", serve_opts.cors_origin, "Access-Control-Allow-Origin value");
    serve_cmd->add_option("--max-agents", serve_opts.max_agents, "Largest roster a session may create")
        ->check(CLI::Range(1, 4096));
    serve_cmd->add_option("--idle-ttl", serve_opts.idle_ttl_seconds, "Drop sessions idle this many seconds (0: never)")
        ->check(CLI::NonNegativeNumber);

    std::vector<const char*> argv;
    argv.push_back("affect");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << app.help();
        return 2;
    }
    run_opts.format = format == "structured" ? Format::structured : Format::text;

    if (*run_cmd) return cmd_run(path, run_opts, false, out, err);
    if (*check_cmd) return cmd_run(path, RunOptions{}, true, out, err);
    if (*demo_cmd) {
        if (print_script) {
            out << kDemoScript;
            return 0;
        }
        return run_scenario(builtin_demo(), run_opts, false, out, err);
    }
    return cmd_serve(serve_opts, out, err, on_ready);
}

}  // namespace affect::cli
