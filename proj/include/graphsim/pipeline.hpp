#pragma once
// End-to-end generation pipelines for the transductive (given sources) and
// inductive (forecast sources) settings, plus counterfactual broadcast
// injection and generated-graph assembly.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "graphsim/activity.hpp"
#include "graphsim/destination.hpp"
#include "graphsim/embedding.hpp"
#include "graphsim/graph.hpp"
#include "graphsim/metrics_micro.hpp"
#include "graphsim/policy.hpp"

namespace graphsim {

enum class Task { tdgg, idgg };

struct RunConfig {
    Task task = Task::tdgg;
    int k1 = 100;
    double activity_threshold = 0.0;
    uint64_t seed = 7;
    int workers = 1;
    std::string broadcast_message;  // empty = no injection
    int broadcast_category = 1;
    std::string forecaster = "moving-average";
};

struct SelectionRecord {
    NodeId u;
    int t = 0;
    std::vector<NodeId> candidates;  // ranked, up to k1 (replay: truths first)
    bool format_ok = true;
};

struct GeneratedGraph {
    std::vector<Interaction> edges;           // canonical (t, src, dst) order
    std::vector<SelectionRecord> selections;  // one per (source, day)
    std::string backend;
    uint64_t seed = 0;
    DayInterval prediction;
    size_t failures = 0;  // sources whose plan fell back after parse failures
};

// Mutable per-node interaction memories advanced at day boundaries.
class MemoryStore {
public:
    MemoryStore(const TemporalGraph& graph, int cut);
    NodeMemory memory(const NodeId& u, int cut) const;
    NodeMemory pair_memory(const NodeId& u, const NodeId& v, int cut) const;
    void append(const Interaction& edge, const std::string& dst_profile);

    // Appends one broadcast entry to every node's memory; re-injection of the
    // same (message, category) is a no-op.
    void inject_broadcast(const std::string& message, int category, int t);
    size_t size(const NodeId& u) const;

private:
    std::map<NodeId, std::vector<MemoryEntry>> entries_;
    std::set<std::pair<std::string, int>> injected_;
};

GeneratedGraph run_tdgg(const TemporalGraph& graph, const SplitWindows& split,
                        const RunConfig& config, PolicyBackend& backend,
                        const EmbeddingProvider& provider);

GeneratedGraph run_idgg(const TemporalGraph& graph, const SplitWindows& split,
                        const RunConfig& config, PolicyBackend& backend,
                        const EmbeddingProvider& provider, Forecaster& forecaster);

// Persists edges in the canonical edges-file format (so metrics consume them
// directly), selection records, and a run manifest.
void write_generated(const std::string& out_dir, const GeneratedGraph& generated,
                     const RunConfig& config);
GeneratedGraph load_generated(const std::string& out_dir);

// Micro evaluation of a generated graph against the reference prediction window.
MicroReport eval_tdgg(const GeneratedGraph& generated, const TemporalGraph& reference,
                      const DayInterval& prediction, const EmbeddingProvider& provider,
                      const std::string& model_name = "model");

// Truth destination sets per (source, day) of the window.
std::map<std::pair<NodeId, int>, std::set<NodeId>> truth_destinations(
    const TemporalGraph& reference, const DayInterval& window);

}  // namespace graphsim
