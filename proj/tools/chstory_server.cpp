// HTTP service over one or more datasets with file-backed stories.

#include "chstory/api/http.hpp"
#include "chstory/api/service.hpp"
#include "chstory/store/codec.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <iostream>
#include <pthread.h>
#include <thread>

int main(int argc, char** argv) {
    CLI::App app{"Serve entity/event datasets, queries, visualization layouts and stories over HTTP"};
    std::vector<std::string> datasets;
    std::string persist_dir = "./chstory-data";
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string allow_origin;
    bool lenient = false;
    app.add_option("--data", datasets, "Dataset file(s) to load at startup")->required()->expected(1, -1);
    app.add_option("--persist-dir", persist_dir, "Directory for stories and curated records");
    app.add_option("--port", port, "Port to listen on (0 picks a free port)")->check(CLI::Range(0, 65535));
    app.add_option("--host", host, "Address to bind");
    app.add_option("--allow-origin", allow_origin, "Origin allowed to call the API from a browser");
    app.add_flag("--lenient-ingest", lenient, "Skip invalid dataset records instead of refusing to start");
    CLI11_PARSE(app, argc, argv);

    // Handle SIGINT/SIGTERM on a dedicated thread so stop() runs outside
    // signal context.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    chstory::api::ServiceConfig config;
    for (const auto& d : datasets) config.datasets.emplace_back(d);
    config.persist_dir = persist_dir;
    config.ingest_mode = lenient ? chstory::IngestMode::lenient : chstory::IngestMode::strict;

    std::unique_ptr<chstory::api::Service> service;
    try {
        service = std::make_unique<chstory::api::Service>(config);
    } catch (const chstory::Error& e) {
        std::cerr << "startup failed: " << to_string(e.code()) << ": " << e.what();
        if (!e.path().empty()) std::cerr << " at " << e.path();
        std::cerr << "\n";
        for (const auto& d : e.details()) std::cerr << "  " << d.path << ": " << to_string(d.code) << ": " << d.message << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "startup failed: " << e.what() << "\n";
        return 1;
    }
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        const auto& r = service->ingest_reports()[i];
        std::cerr << "loaded " << datasets[i] << ": " << r.entities_added << " entities, " << r.events_added
                  << " events, " << r.terms_added << " terms, " << r.errors.size() << " errors\n";
    }
    for (const auto& issue : service->restore_issues())
        std::cerr << "dropped curated record " << issue.path << ": " << issue.message << "\n";

    httplib::Server server;
    chstory::api::install_routes(server, *service, {allow_origin});

    int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return 1;
    }
    std::cout << "listening on " << bound << std::endl;

    std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });
    bool ok = server.listen_after_bind();
    if (waiter.joinable()) {
        // Wake the waiter if the server stopped on its own.
        pthread_kill(waiter.native_handle(), SIGTERM);
        waiter.join();
    }
    std::cerr << "stopped\n";
    return ok ? 0 : 1;
}
