#pragma once
// Deterministic synthetic graphs shared across tests.

#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "graphsim/graph.hpp"

namespace graphsim::testing {

inline std::string fixture_node_id(int i) {
    std::ostringstream os;
    os << "n" << (i < 10 ? "00" : i < 100 ? "0" : "") << i;
    return os.str();
}

// n_nodes nodes with themed profiles; every day has edges, no duplicate
// (src, dst, t) triples, categories in {1..4}.
inline TemporalGraph make_fixture_graph(int n_nodes = 200, int horizon = 30,
                                        uint64_t seed = 99) {
    static const char* themes[] = {"cooking and recipes", "football tactics",
                                   "synthesizer music",   "urban gardening",
                                   "retro computing",     "trail running"};
    static const char* verbs[] = {"shares a tip about", "asks about", "debates",
                                  "recommends", "critiques"};
    std::vector<NodeProfile> nodes;
    nodes.reserve(static_cast<size_t>(n_nodes));
    for (int i = 0; i < n_nodes; ++i)
        nodes.push_back({fixture_node_id(i),
                         std::string("account interested in ") + themes[i % 6] +
                             " posting daily updates"});

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick_node(0, n_nodes - 1);
    std::uniform_int_distribution<int> pick_cat(1, 4);
    std::uniform_int_distribution<int> pick_verb(0, 4);
    std::uniform_int_distribution<int> edges_per_day(n_nodes / 10, n_nodes / 5);

    std::vector<Interaction> edges;
    std::set<std::tuple<std::string, std::string, int>> seen;
    for (int t = 0; t < horizon; ++t) {
        int m = edges_per_day(rng);
        for (int e = 0; e < m; ++e) {
            int a = pick_node(rng);
            int b = pick_node(rng);
            if (a == b) b = (b + 1) % n_nodes;
            std::string src = fixture_node_id(a);
            std::string dst = fixture_node_id(b);
            if (!seen.insert({src, dst, t}).second) continue;
            int cat = pick_cat(rng);
            std::string msg = src + " " + verbs[pick_verb(rng)] + " " + themes[b % 6] +
                              " with " + dst;
            edges.push_back({src, dst, t, msg, cat});
        }
    }
    return TemporalGraph::from_parts(std::move(nodes), std::move(edges), horizon, 4);
}

// Tiny hand-auditable graph: 5 nodes, horizon 8 (tau=1, input=5).
inline TemporalGraph make_tiny_graph() {
    std::vector<NodeProfile> nodes = {{"a", "alpha writer"},
                                      {"b", "beta critic"},
                                      {"c", "gamma curator"},
                                      {"d", "delta reader"},
                                      {"e", "epsilon poster"}};
    std::vector<Interaction> edges = {
        {"a", "b", 0, "a greets b", 1}, {"a", "c", 1, "a pings c", 2},
        {"b", "a", 1, "b replies a", 1}, {"a", "b", 2, "a thanks b", 1},
        {"c", "d", 2, "c shares d", 3}, {"a", "b", 3, "a asks b", 2},
        {"b", "c", 4, "b notes c", 1}, {"d", "a", 4, "d quotes a", 3},
        {"a", "c", 5, "a nudges c", 2}, {"e", "a", 5, "e mentions a", 1},
        {"a", "b", 6, "a praises b", 1}, {"c", "a", 6, "c cites a", 2},
        {"a", "d", 7, "a follows d", 3}, {"b", "a", 7, "b boosts a", 1}};
    return TemporalGraph::from_parts(std::move(nodes), std::move(edges), 8, 3);
}

}  // namespace graphsim::testing
