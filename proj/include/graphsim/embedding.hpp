#pragma once
// Text embedding providers and cosine ranking.

#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphsim/graph.hpp"

namespace graphsim {

struct EmbeddingVector {
    std::vector<float> values;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual int dimension() const = 0;
    virtual std::string name() const = 0;
    // Unit-norm vector of `dimension()` entries. The all-zeros vector is the
    // designated result for texts with no features (e.g. the empty string).
    virtual EmbeddingVector embed(const std::string& text) const = 0;
};

// Hashed character-trigram bag with signed hashing, 256 dimensions,
// L2-normalized. Pure function of the byte string; no external dependencies.
class TrigramEmbedder : public EmbeddingProvider {
public:
    explicit TrigramEmbedder(int dim = 256) : dim_(dim) {}
    int dimension() const override { return dim_; }
    std::string name() const override { return "trigram-256"; }
    EmbeddingVector embed(const std::string& text) const override;

private:
    int dim_;
};

double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// Ids sorted by descending cosine to the query; ties broken by ascending id.
std::vector<NodeId> cosine_rank(const EmbeddingVector& query,
                                const std::vector<std::pair<NodeId, EmbeddingVector>>& candidates);

struct RemoteEmbedderConfig {
    std::string base_url;       // e.g. http://localhost:8080
    std::string path = "/embed";
    std::string api_key;
    std::string model;
    std::string text_field = "input";
    std::string vector_pointer = "/embedding";  // JSON pointer into the response
    int dimension = 0;                          // 0 = accept whatever comes back first
    size_t cache_capacity = 65536;
    int max_retries = 3;
    int timeout_sec = 30;
    int max_in_flight = 8;
};

class JsonHttpClient;

// HTTP embedding client with an LRU cache keyed by content hash.
class RemoteEmbedder : public EmbeddingProvider {
public:
    explicit RemoteEmbedder(RemoteEmbedderConfig cfg);
    ~RemoteEmbedder() override;
    int dimension() const override { return dim_; }
    std::string name() const override { return "remote:" + cfg_.model; }
    EmbeddingVector embed(const std::string& text) const override;

private:
    RemoteEmbedderConfig cfg_;
    mutable int dim_;
    std::unique_ptr<JsonHttpClient> client_;
    mutable std::mutex cache_mutex_;
    mutable std::list<std::string> lru_;
    mutable std::unordered_map<std::string,
                               std::pair<EmbeddingVector, std::list<std::string>::iterator>>
        cache_;
};

}  // namespace graphsim
