#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <thread>

#include "textsynth/corpus.hpp"
#include "textsynth/toy_backend.hpp"

namespace httplib {
class Server;
}

namespace textsynth {

// HTTP wrapper around ToyCompletionService speaking the /v1/complete
// protocol. Also exposes GET /v1/stats with a concurrency probe
// (max_in_flight_observed) and supports deterministic failure injection for
// client tests.
class MockLlmServer {
public:
    explicit MockLlmServer(const Corpus& corpus, int order = 3);
    ~MockLlmServer();

    MockLlmServer(const MockLlmServer&) = delete;
    MockLlmServer& operator=(const MockLlmServer&) = delete;

    // Fraction of requests answered with HTTP 500, spread evenly and
    // deterministically over the request sequence.
    void set_fail_rate(double rate);

    // Binds and serves on a background thread. port 0 picks a free port.
    // Returns the bound port.
    int start(int port = 0);
    void stop();

    int port() const { return port_; }
    int max_observed_in_flight() const { return max_active_.load(); }
    uint64_t total_requests() const { return sequence_.load(); }

    // Serve on the calling thread (CLI mode). Returns false if binding fails.
    bool run_blocking(int port);

private:
    void install_routes();

    ToyCompletionService service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = 0;
    double fail_rate_ = 0.0;
    std::atomic<int> active_{0};
    std::atomic<int> max_active_{0};
    std::atomic<uint64_t> sequence_{0};
    std::atomic<uint64_t> failed_{0};
};

}  // namespace textsynth
