#pragma once
// Small JSON-over-HTTP client with retry, exponential backoff with jitter,
// and a bound on concurrent in-flight requests.

#include <memory>
#include <string>

#include <json.hpp>

namespace graphsim {

struct HttpClientConfig {
    std::string base_url;  // scheme://host[:port]
    std::string api_key;   // sent as "Authorization: Bearer <key>" when non-empty
    int max_retries = 3;
    int timeout_sec = 30;
    int max_in_flight = 8;
    int backoff_base_ms = 200;
    std::string audit_log_path;  // append-only JSONL request/response log; empty = off
};

class HttpError : public std::runtime_error {
public:
    explicit HttpError(const std::string& what) : std::runtime_error(what) {}
};

class JsonHttpClient {
public:
    explicit JsonHttpClient(HttpClientConfig cfg);
    ~JsonHttpClient();

    // POST with retries; throws HttpError after the retry budget is exhausted.
    nlohmann::json post_json(const std::string& path, const nlohmann::json& body);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace graphsim
