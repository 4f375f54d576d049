#include "graphsim/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "graphsim/http_client.hpp"

namespace graphsim {

namespace {

// FNV-1a: fully specified, so embeddings are stable across runs and platforms.
uint64_t fnv1a(const char* data, size_t len) {
    uint64_t h = 14695981039346656037ull;
    for (size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 1099511628211ull;
    }
    return h;
}

void l2_normalize(std::vector<float>& v) {
    double norm2 = 0.0;
    for (float x : v) norm2 += static_cast<double>(x) * x;
    if (norm2 <= 0.0) return;  // zero-text vector stays all-zeros
    float inv = static_cast<float>(1.0 / std::sqrt(norm2));
    for (float& x : v) x *= inv;
}

}  // namespace

EmbeddingVector TrigramEmbedder::embed(const std::string& text) const {
    EmbeddingVector v;
    v.values.assign(static_cast<size_t>(dim_), 0.0f);
    if (text.empty()) return v;
    auto add_gram = [&](const char* p, size_t len) {
        uint64_t h = fnv1a(p, len);
        size_t idx = static_cast<size_t>(h % static_cast<uint64_t>(dim_));
        float sign = ((h >> 32) & 1) ? 1.0f : -1.0f;
        v.values[idx] += sign;
    };
    if (text.size() < 3) {
        add_gram(text.data(), text.size());
    } else {
        for (size_t i = 0; i + 3 <= text.size(); ++i) add_gram(text.data() + i, 3);
    }
    // signed trigrams can cancel exactly; keep nonempty texts representable
    if (std::all_of(v.values.begin(), v.values.end(), [](float x) { return x == 0.0f; }))
        add_gram(text.data(), text.size());
    l2_normalize(v.values);
    return v;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.values.size() != b.values.size())
        throw GraphError("embedding dimension mismatch: " + std::to_string(a.values.size()) +
                         " vs " + std::to_string(b.values.size()));
    double na = 0.0, nb = 0.0, dot = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        dot += static_cast<double>(a.values[i]) * b.values[i];
        na += static_cast<double>(a.values[i]) * a.values[i];
        nb += static_cast<double>(b.values[i]) * b.values[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dot / std::sqrt(na * nb);
}

std::vector<NodeId> cosine_rank(
    const EmbeddingVector& query,
    const std::vector<std::pair<NodeId, EmbeddingVector>>& candidates) {
    std::vector<std::pair<double, const NodeId*>> scored;
    scored.reserve(candidates.size());
    for (const auto& [id, vec] : candidates) scored.emplace_back(cosine(query, vec), &id);
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return *a.second < *b.second;
    });
    std::vector<NodeId> out;
    out.reserve(scored.size());
    for (const auto& [score, id] : scored) out.push_back(*id);
    return out;
}

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderConfig cfg) : cfg_(std::move(cfg)), dim_(cfg_.dimension) {
    HttpClientConfig hc;
    hc.base_url = cfg_.base_url;
    hc.api_key = cfg_.api_key;
    hc.max_retries = cfg_.max_retries;
    hc.timeout_sec = cfg_.timeout_sec;
    hc.max_in_flight = cfg_.max_in_flight;
    client_ = std::make_unique<JsonHttpClient>(hc);
}

RemoteEmbedder::~RemoteEmbedder() = default;

EmbeddingVector RemoteEmbedder::embed(const std::string& text) const {
    std::string key = std::to_string(fnv1a(text.data(), text.size())) + ":" +
                      std::to_string(text.size());
    {
        std::lock_guard lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.second);
            return it->second.first;
        }
    }

    nlohmann::json body;
    body[cfg_.text_field] = text;
    if (!cfg_.model.empty()) body["model"] = cfg_.model;
    nlohmann::json resp = client_->post_json(cfg_.path, body);

    nlohmann::json vec_json = resp.at(nlohmann::json::json_pointer(cfg_.vector_pointer));
    EmbeddingVector v;
    v.values = vec_json.get<std::vector<float>>();
    if (dim_ == 0) dim_ = static_cast<int>(v.values.size());
    if (static_cast<int>(v.values.size()) != dim_)
        throw GraphError("remote embedding dimension mismatch: expected " + std::to_string(dim_) +
                         ", got " + std::to_string(v.values.size()));
    l2_normalize(v.values);

    std::lock_guard lock(cache_mutex_);
    if (cache_.size() >= cfg_.cache_capacity && !lru_.empty()) {
        cache_.erase(lru_.back());
        lru_.pop_back();
    }
    lru_.push_front(key);
    cache_[key] = {v, lru_.begin()};
    return v;
}

}  // namespace graphsim
