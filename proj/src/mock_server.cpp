#include "textsynth/mock_server.hpp"

#include <cmath>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

#include "wire.hpp"

namespace textsynth {

MockLlmServer::MockLlmServer(const Corpus& corpus, int order)
    : service_(corpus, order), server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

MockLlmServer::~MockLlmServer() {
    stop();
}

void MockLlmServer::set_fail_rate(double rate) {
    if (!(rate >= 0.0) || rate > 1.0) {
        throw std::invalid_argument("fail rate must be in [0, 1]");
    }
    fail_rate_ = rate;
}

void MockLlmServer::install_routes() {
    server_->Post("/v1/complete", [this](const httplib::Request& req, httplib::Response& res) {
        const int current = ++active_;
        int observed = max_active_.load();
        while (observed < current && !max_active_.compare_exchange_weak(observed, current)) {
        }
        const uint64_t seq = sequence_.fetch_add(1);

        // Injected failures are spread evenly over the request sequence:
        // request s fails iff floor((s+1)*rate) > floor(s*rate).
        const bool inject = fail_rate_ > 0.0 &&
                            std::floor(static_cast<double>(seq + 1) * fail_rate_) >
                                std::floor(static_cast<double>(seq) * fail_rate_);
        if (inject) {
            ++failed_;
            res.status = 500;
            res.set_content(R"({"error":"injected failure"})", "application/json");
            --active_;
            return;
        }
        try {
            const auto request = request_from_wire(nlohmann::json::parse(req.body));
            const auto response = service_.complete(request);
            res.set_content(response_to_wire(response).dump(), "application/json");
        } catch (const std::exception& e) {
            res.status = 400;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        }
        --active_;
    });
    server_->Get("/v1/stats", [this](const httplib::Request&, httplib::Response& res) {
        nlohmann::json stats;
        stats["max_in_flight_observed"] = max_active_.load();
        stats["total_requests"] = sequence_.load();
        stats["failed_requests"] = failed_.load();
        stats["active"] = active_.load();
        res.set_content(stats.dump(), "application/json");
    });
}

int MockLlmServer::start(int port) {
    if (port == 0) {
        port_ = server_->bind_to_any_port("127.0.0.1");
    } else {
        if (!server_->bind_to_port("127.0.0.1", port)) {
            throw std::runtime_error("mock server: cannot bind port " + std::to_string(port));
        }
        port_ = port;
    }
    if (port_ <= 0) {
        throw std::runtime_error("mock server: binding failed");
    }
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void MockLlmServer::stop() {
    if (server_ && server_->is_running()) {
        server_->stop();
    }
    if (thread_.joinable()) {
        thread_.join();
    }
}

bool MockLlmServer::run_blocking(int port) {
    port_ = port;
    return server_->listen("0.0.0.0", port);
}

}  // namespace textsynth
