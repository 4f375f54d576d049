#pragma once
// Temporal text-attributed graph storage: load, index, window, split.
// The graph is immutable after load; all queries are read-only.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace graphsim {

using NodeId = std::string;

struct NodeProfile {
    NodeId id;
    std::string profile;  // may be empty, never absent
};

struct Interaction {
    NodeId src;
    NodeId dst;
    int t = 0;  // day index >= 0
    std::string message;
    int category = 1;  // in {1..Y}
};

// Half-open day interval [begin, end).
struct DayInterval {
    int begin = 0;
    int end = 0;
    bool contains(int day) const { return day >= begin && day < end; }
    int length() const { return end - begin; }
};

struct SplitWindows {
    DayInterval input;
    DayInterval prediction;
};

struct SplitSpec {
    int tau = 0;        // prediction length in days
    int input_len = 0;  // history length T = T2 - 3*tau
    SplitWindows train;
    SplitWindows val;
    SplitWindows test;
};

struct MemoryEntry {
    NodeId dst;
    std::string dst_profile;
    std::string message;
    int category = 1;
    int t = 0;
};

struct NodeMemory {
    NodeId owner;
    int cut = 0;  // all entries have t < cut
    std::vector<MemoryEntry> entries;
};

class GraphError : public std::runtime_error {
public:
    explicit GraphError(const std::string& what) : std::runtime_error(what) {}
};

class TemporalGraph {
public:
    // Line-delimited JSON: nodes {id, profile}, edges {src, dst, t, message, category}.
    // Manifest (optional) records horizon and the category vocabulary; without it
    // horizon = max t + 1 and Y = max category seen.
    static TemporalGraph load(const std::string& nodes_path,
                              const std::string& edges_path,
                              const std::string& manifest_path = "");

    static TemporalGraph from_parts(std::vector<NodeProfile> nodes,
                                    std::vector<Interaction> edges,
                                    int horizon = -1, int num_categories = -1);

    const std::vector<NodeProfile>& nodes() const { return nodes_; }
    const std::vector<Interaction>& edges() const { return edges_; }
    int horizon() const { return horizon_; }
    int num_categories() const { return num_categories_; }
    const std::vector<std::string>& category_names() const { return category_names_; }

    bool has_node(const NodeId& id) const { return node_index_.count(id) > 0; }
    const NodeProfile& node(const NodeId& id) const;
    const std::string& profile_of(const NodeId& id) const { return node(id).profile; }

    // Edges with t in [interval.begin, interval.end), original order preserved.
    std::vector<Interaction> window(const DayInterval& interval) const;

    // Outgoing history of u strictly before `cut`, ordered by t.
    NodeMemory node_memory(const NodeId& u, int cut) const;

    // Pair memory: entries of u restricted to destination v.
    NodeMemory pair_memory(const NodeId& u, const NodeId& v, int cut) const;

    // One out-edge count per day of the interval.
    std::vector<int> out_degree_series(const NodeId& u, const DayInterval& interval) const;

    // Distinct out-neighbors of u from edges before cut, in first-seen order.
    std::vector<NodeId> out_neighbors_before(const NodeId& u, int cut) const;

    // Count of out-edges of u before cut.
    int out_edge_count_before(const NodeId& u, int cut) const;

    // Count of edges u->v before cut.
    int pair_edge_count_before(const NodeId& u, const NodeId& v, int cut) const;

private:
    void build_indexes();
    const std::vector<size_t>& out_index(const NodeId& u) const;

    std::vector<NodeProfile> nodes_;
    std::vector<Interaction> edges_;  // sorted by (t, src, dst, insertion index)
    int horizon_ = 0;
    int num_categories_ = 1;
    std::vector<std::string> category_names_;  // optional, 0-based for category i+1
    std::unordered_map<NodeId, size_t> node_index_;
    std::unordered_map<NodeId, std::vector<size_t>> out_edges_;  // edge indices, t-ordered
    std::vector<size_t> day_offsets_;  // edges_[day_offsets_[d] .. day_offsets_[d+1]) is day d
};

// tau = floor(0.15 * horizon); input_len = horizon - 3*tau; train/val/test
// windows shifted by 0, tau, 2*tau.
SplitSpec make_splits(int horizon);

void write_nodes_file(const std::string& path, const std::vector<NodeProfile>& nodes);
void write_edges_file(const std::string& path, const std::vector<Interaction>& edges);
void write_manifest(const std::string& path, int horizon, int num_categories,
                    const std::vector<std::string>& category_names = {});

}  // namespace graphsim
