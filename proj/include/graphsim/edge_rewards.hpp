#pragma once
// Edge-generation rewards: curriculum category reward with a pluggable
// edge-classifier scorer, and the six-dimension judge text reward.

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "graphsim/graph.hpp"

namespace graphsim {

struct CurriculumState {
    long step = 0;
    double gamma = 0.01;
    double epsilon = 0.1;
    void advance() { ++step; }
};

// alpha_s = max(1 - gamma*s, epsilon)
double curriculum_alpha(const CurriculumState& state);

// Probability vector over the Y categories (entries sum to 1).
using ClassifierScore = std::vector<double>;

class EdgeCategoryScorer {
public:
    virtual ~EdgeCategoryScorer() = default;
    virtual void fit(const TemporalGraph& graph, int cut) = 0;
    virtual ClassifierScore score(const NodeId& u, const NodeId& v) const = 0;
    bool fitted() const { return fitted_; }

protected:
    bool fitted_ = false;
};

// Laplace-smoothed per-pair category frequencies; uniform with no history.
// Stands behind the scorer contract so a learned edge classifier can drop in.
class FrequencyScorer : public EdgeCategoryScorer {
public:
    explicit FrequencyScorer(double smoothing = 1.0) : smoothing_(smoothing) {}
    void fit(const TemporalGraph& graph, int cut) override;
    ClassifierScore score(const NodeId& u, const NodeId& v) const override;

private:
    double smoothing_;
    int num_categories_ = 1;
    std::map<std::pair<NodeId, NodeId>, std::vector<int>> counts_;
};

// alpha*score[truth] + (1-alpha)*1[pred==truth] + 1[format_ok]
double reward_cat(int pred, int truth, const ClassifierScore& score,
                  const CurriculumState& state, bool format_ok);

struct JudgeScores {
    double gf = 0, cf = 0, pd = 0, da = 0, iq = 0, cr = 0;  // each in [0,5]
    bool clamped = false;  // any out-of-range value was clamped during parsing
    double sum() const { return gf + cf + pd + da + iq + cr; }
};

// Parses "GF: x" style lines; missing dimensions stay 0, out-of-range values
// are clamped to [0,5] and flagged.
JudgeScores parse_judge_scores(const std::string& raw);
std::string serialize_judge_scores(const JudgeScores& scores);

// (1/6) * sum_d score_d/5 + 1[format_ok]
double reward_text(const JudgeScores& scores, bool format_ok);

class JsonHttpClient;

struct JudgeClientConfig {
    std::string base_url;
    std::string api_key;
    std::string model;
    std::string path = "/v1/chat/completions";
    double temperature = 0.0;
    int max_retries = 3;
    int timeout_sec = 60;
    int max_in_flight = 8;
    std::string template_path;
    std::string audit_log_path;
};

struct JudgeRequest {
    std::string goal;
    std::string prompt;
    std::string response;
    std::string reference;
};

// Scores message batches with a remote judge endpoint. Transport failure
// after retries yields all-zero scores for that item.
class JudgeClient {
public:
    explicit JudgeClient(JudgeClientConfig cfg);
    ~JudgeClient();
    std::vector<JudgeScores> judge(const std::vector<JudgeRequest>& batch) const;

private:
    JudgeClientConfig cfg_;
    std::string template_;
    std::unique_ptr<JsonHttpClient> client_;
};

enum class RewardDomain { category, message };

// Deterministic round-robin over two item streams honoring ratio_cat:ratio_msg;
// once a stream is exhausted the other passes through.
std::vector<std::pair<RewardDomain, size_t>> interleave_domains(size_t n_cat, size_t n_msg,
                                                                int ratio_cat, int ratio_msg);

}  // namespace graphsim
