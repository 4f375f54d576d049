#pragma once
// Interaction policy interfaces: destination query generation and edge
// message generation, with llm / heuristic / replay backends.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "graphsim/graph.hpp"

namespace graphsim {

enum class BehaviorMetric { SF, AFN, HI, CN };
enum class Comparator { GT, GE, EQ, LE, LT };

struct FilterClause {
    BehaviorMetric metric;
    Comparator cmp;
    double threshold = 0.0;
};

// Disjunction of threshold predicates. An empty rule matches everything.
struct FilterRule {
    std::vector<FilterClause> clauses;
};

struct QueryPlan {
    std::string query_text;
    FilterRule filter;
    bool format_ok = true;  // false when the plan is a fallback after parse failure
};

struct EdgeDraft {
    std::string message;
    int category = 1;
    bool format_ok = true;
};

// Textual filter grammar: clauses `METRIC OP NUMBER` joined by `or`.
// Tokens: SF AFN HI CN  >  >=  =  <=  <  or. "none" or empty = match-all.
std::optional<FilterRule> parse_filter(const std::string& text);
std::string filter_to_string(const FilterRule& rule);

enum class WireSchema { query, edge };

// r_format bit: true iff the required sections are present and parseable.
// Trailing prose after valid blocks is tolerated.
bool validate_format(const std::string& raw, WireSchema schema);

// Wire formats:
//   query:  "QUERY: <text...>\nFILTER: <clauses|none>"
//   edge:   "LABEL: <category>\nTEXT: <message...>"
std::optional<QueryPlan> parse_query_plan(const std::string& raw);
std::string serialize_query_plan(const QueryPlan& plan);
std::optional<EdgeDraft> parse_edge_draft(const std::string& raw, int num_categories);
std::string serialize_edge_draft(const EdgeDraft& draft);

enum class BackendKind { llm, heuristic, replay };

class PolicyBackend {
public:
    virtual ~PolicyBackend() = default;
    virtual std::string name() const = 0;
    virtual BackendKind kind() const = 0;

    virtual QueryPlan propose_query(const NodeProfile& src, const NodeMemory& memory,
                                    const std::string& neighbor_context) = 0;
    virtual EdgeDraft propose_edge(const NodeProfile& src, const NodeProfile& dst,
                                   const NodeMemory& pair_memory) = 0;

    // Replay backends expose the exact ground-truth destinations for (u, day);
    // others return nullopt.
    virtual std::optional<std::vector<NodeId>> replay_destinations(const NodeId&, int) {
        return std::nullopt;
    }
};

// Query = concatenation of the 3 most recent memory destination profiles
// (falls back to the source profile on empty memory); filter = HI >= 1.
// Edge = most frequent pair-memory category (tie -> lowest id) with a
// template message.
class HeuristicBackend : public PolicyBackend {
public:
    std::string name() const override { return "heuristic"; }
    BackendKind kind() const override { return BackendKind::heuristic; }
    QueryPlan propose_query(const NodeProfile& src, const NodeMemory& memory,
                            const std::string& neighbor_context) override;
    EdgeDraft propose_edge(const NodeProfile& src, const NodeProfile& dst,
                           const NodeMemory& pair_memory) override;
};

// Replays the reference future: queries are the true next destination's
// profile, edges are the ground-truth (message, category).
class ReplayBackend : public PolicyBackend {
public:
    ReplayBackend(const TemporalGraph& reference, const DayInterval& future);
    std::string name() const override { return "replay"; }
    BackendKind kind() const override { return BackendKind::replay; }
    QueryPlan propose_query(const NodeProfile& src, const NodeMemory& memory,
                            const std::string& neighbor_context) override;
    EdgeDraft propose_edge(const NodeProfile& src, const NodeProfile& dst,
                           const NodeMemory& pair_memory) override;
    std::optional<std::vector<NodeId>> replay_destinations(const NodeId& u, int day) override;

private:
    const TemporalGraph& reference_;
    std::map<std::pair<NodeId, int>, std::vector<NodeId>> destinations_;
    // Ground-truth attribute queues per (src, dst, day); popped in edge order.
    std::map<std::tuple<NodeId, NodeId, int>, std::vector<std::pair<std::string, int>>> attrs_;
    std::map<std::tuple<NodeId, NodeId, int>, size_t> cursors_;
    std::mutex mutex_;
};

class JsonHttpClient;

struct LlmBackendConfig {
    std::string base_url;
    std::string api_key;
    std::string model;
    std::string path = "/v1/chat/completions";
    double temperature = 0.0;  // deterministic decoding by default
    int parse_retries = 2;     // re-asks before falling back
    int max_retries = 3;       // transport-level retries per request
    int timeout_sec = 60;
    int max_in_flight = 8;
    std::string query_template_path;  // placeholder-substituted prompt files
    std::string edge_template_path;
    std::string audit_log_path;
    int num_categories = 1;
};

class LlmBackend : public PolicyBackend {
public:
    explicit LlmBackend(LlmBackendConfig cfg);
    ~LlmBackend() override;
    std::string name() const override { return "llm:" + cfg_.model; }
    BackendKind kind() const override { return BackendKind::llm; }
    QueryPlan propose_query(const NodeProfile& src, const NodeMemory& memory,
                            const std::string& neighbor_context) override;
    EdgeDraft propose_edge(const NodeProfile& src, const NodeProfile& dst,
                           const NodeMemory& pair_memory) override;

private:
    std::string complete(const std::string& prompt);

    LlmBackendConfig cfg_;
    std::string query_template_;
    std::string edge_template_;
    std::unique_ptr<JsonHttpClient> client_;
};

// {placeholder} substitution for prompt template files.
std::string render_template(const std::string& tmpl,
                            const std::map<std::string, std::string>& values);
std::string read_text_file(const std::string& path);

std::string format_memory(const NodeMemory& memory, size_t max_entries = 20);

}  // namespace graphsim
