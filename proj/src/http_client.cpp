#include "graphsim/http_client.hpp"

#include <chrono>
#include <fstream>
#include <mutex>
#include <random>
#include <semaphore>
#include <thread>

#include <httplib.h>

namespace graphsim {

using nlohmann::json;

struct JsonHttpClient::Impl {
    explicit Impl(HttpClientConfig c)
        : cfg(std::move(c)),
          http(cfg.base_url),
          slots(std::max(1, cfg.max_in_flight)),
          jitter_rng(std::random_device{}()) {
        http.set_connection_timeout(cfg.timeout_sec, 0);
        http.set_read_timeout(cfg.timeout_sec, 0);
        http.set_write_timeout(cfg.timeout_sec, 0);
    }

    void audit(const std::string& path, const json& request, const json& response,
               const std::string& error) {
        if (cfg.audit_log_path.empty()) return;
        std::lock_guard lock(audit_mutex);
        std::ofstream f(cfg.audit_log_path, std::ios::app);
        json rec{{"path", path}, {"request", request}};
        if (!error.empty())
            rec["error"] = error;
        else
            rec["response"] = response;
        f << rec.dump() << "\n";
    }

    int backoff_ms(int attempt) {
        int base = cfg.backoff_base_ms * (1 << attempt);
        std::lock_guard lock(rng_mutex);
        std::uniform_int_distribution<int> jitter(0, base);
        return base + jitter(jitter_rng);
    }

    HttpClientConfig cfg;
    httplib::Client http;
    std::counting_semaphore<256> slots;
    std::mutex audit_mutex;
    std::mutex rng_mutex;
    std::mt19937 jitter_rng;
};

JsonHttpClient::JsonHttpClient(HttpClientConfig cfg) : impl_(std::make_unique<Impl>(std::move(cfg))) {}
JsonHttpClient::~JsonHttpClient() = default;

json JsonHttpClient::post_json(const std::string& path, const json& body) {
    impl_->slots.acquire();
    struct Release {
        Impl* impl;
        ~Release() { impl->slots.release(); }
    } release{impl_.get()};

    httplib::Headers headers;
    if (!impl_->cfg.api_key.empty())
        headers.emplace("Authorization", "Bearer " + impl_->cfg.api_key);

    std::string last_error;
    for (int attempt = 0; attempt <= impl_->cfg.max_retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(impl_->backoff_ms(attempt - 1)));
        auto res = impl_->http.Post(path, headers, body.dump(), "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error: status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            std::string err = "http status " + std::to_string(res->status) + ": " + res->body;
            impl_->audit(path, body, {}, err);
            throw HttpError(err);
        }
        try {
            json parsed = json::parse(res->body);
            impl_->audit(path, body, parsed, "");
            return parsed;
        } catch (const json::parse_error& e) {
            last_error = std::string("response parse error: ") + e.what();
        }
    }
    impl_->audit(path, body, {}, last_error);
    throw HttpError(last_error + " (after " + std::to_string(impl_->cfg.max_retries + 1) +
                    " attempts)");
}

}  // namespace graphsim
