#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "graphsim/embedding.hpp"
#include "graphsim/http_client.hpp"

using namespace graphsim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TestServer {
    httplib::Server server;
    int port = 0;
    std::thread thread;

    explicit TestServer() = default;

    void start() {
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }

    ~TestServer() {
        server.stop();
        if (thread.joinable()) thread.join();
    }

    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

}  // namespace

TEST_CASE("post_json round-trips a body") {
    TestServer ts;
    ts.server.Post("/echo", [](const httplib::Request& req, httplib::Response& res) {
        json j = json::parse(req.body);
        j["seen"] = true;
        res.set_content(j.dump(), "application/json");
    });
    ts.start();

    JsonHttpClient client({.base_url = ts.base_url()});
    json out = client.post_json("/echo", {{"x", 42}});
    CHECK(out["x"] == 42);
    CHECK(out["seen"] == true);
}

TEST_CASE("transient 500s are retried until success") {
    TestServer ts;
    std::atomic<int> calls{0};
    ts.server.Post("/flaky", [&](const httplib::Request&, httplib::Response& res) {
        if (calls.fetch_add(1) < 2) {
            res.status = 500;
            res.set_content("busy", "text/plain");
        } else {
            res.set_content(R"({"ok":true})", "application/json");
        }
    });
    ts.start();

    HttpClientConfig cfg{.base_url = ts.base_url()};
    cfg.backoff_base_ms = 1;
    JsonHttpClient client(cfg);
    json out = client.post_json("/flaky", json::object());
    CHECK(out["ok"] == true);
    CHECK(calls.load() == 3);
}

TEST_CASE("retry budget exhaustion raises HttpError") {
    TestServer ts;
    ts.server.Post("/down", [](const httplib::Request&, httplib::Response& res) {
        res.status = 503;
    });
    ts.start();

    HttpClientConfig cfg{.base_url = ts.base_url()};
    cfg.max_retries = 2;
    cfg.backoff_base_ms = 1;
    JsonHttpClient client(cfg);
    CHECK_THROWS_AS(client.post_json("/down", json::object()), HttpError);
}

TEST_CASE("client errors are not retried") {
    TestServer ts;
    std::atomic<int> calls{0};
    ts.server.Post("/bad", [&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.status = 400;
    });
    ts.start();

    HttpClientConfig cfg{.base_url = ts.base_url()};
    cfg.backoff_base_ms = 1;
    JsonHttpClient client(cfg);
    CHECK_THROWS_AS(client.post_json("/bad", json::object()), HttpError);
    CHECK(calls.load() == 1);
}

TEST_CASE("api key is sent as a bearer token and audit log records exchanges") {
    TestServer ts;
    std::string auth_seen;
    ts.server.Post("/secure", [&](const httplib::Request& req, httplib::Response& res) {
        auth_seen = req.get_header_value("Authorization");
        res.set_content(R"({"ok":true})", "application/json");
    });
    ts.start();

    fs::path log = fs::temp_directory_path() / "graphsim_audit.jsonl";
    fs::remove(log);
    HttpClientConfig cfg{.base_url = ts.base_url(), .api_key = "sk-test"};
    cfg.audit_log_path = log.string();
    JsonHttpClient client(cfg);
    client.post_json("/secure", {{"q", 1}});
    client.post_json("/secure", {{"q", 2}});
    CHECK(auth_seen == "Bearer sk-test");

    std::ifstream lf(log);
    std::string line;
    int lines = 0;
    while (std::getline(lf, line))
        if (!line.empty()) {
            json rec = json::parse(line);
            CHECK(rec.contains("path"));
            ++lines;
        }
    CHECK(lines == 2);
    fs::remove(log);
}

TEST_CASE("remote embedder parses vectors and caches repeats") {
    TestServer ts;
    std::atomic<int> calls{0};
    ts.server.Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
        ++calls;
        json j = json::parse(req.body);
        std::string text = j.at("input").get<std::string>();
        // toy 3-dim embedding keyed on length
        double x = static_cast<double>(text.size());
        res.set_content(json{{"embedding", {x, 1.0, 0.0}}}.dump(), "application/json");
    });
    ts.start();

    RemoteEmbedderConfig cfg;
    cfg.base_url = ts.base_url();
    cfg.path = "/embed";
    RemoteEmbedder emb(cfg);
    EmbeddingVector v1 = emb.embed("hello");
    REQUIRE(v1.values.size() == 3);
    CHECK(v1.values[0] == doctest::Approx(5.0 / std::sqrt(26.0)));  // unit-normalized
    CHECK(emb.dimension() == 3);
    EmbeddingVector v2 = emb.embed("hello");
    CHECK(v2.values == v1.values);
    CHECK(calls.load() == 1);  // second call served from cache
    emb.embed("other text");
    CHECK(calls.load() == 2);
}
