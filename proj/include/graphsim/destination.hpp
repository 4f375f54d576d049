#pragma once
// Two-stage candidate retrieval, behavior filtering, truncation, and the
// destination-selection reward.

#include <set>
#include <string>
#include <vector>

#include "graphsim/embedding.hpp"
#include "graphsim/graph.hpp"
#include "graphsim/policy.hpp"

namespace graphsim {

struct BehaviorStats {
    double sf = 0;   // out-edges of u before the cut
    double afn = 0;  // mean out-degree of u's out-neighbors
    double hi = 0;   // edges u->v before the cut
    double cn = 0;   // common out-neighbors of u and v
};

BehaviorStats behavior_stats(const TemporalGraph& graph, const NodeId& u, const NodeId& v,
                             int cut);

bool filter_matches(const FilterRule& rule, const BehaviorStats& stats);

enum class CandidateStage { neighbor, general };

struct CandidateList {
    std::vector<NodeId> ids;                 // no duplicates, never contains u
    std::vector<CandidateStage> provenance;  // parallel to ids
};

// Stage 1: historical out-neighbors of u ranked by cosine(query, profile).
// Stage 2 (only when stage 1 yields fewer than k1): remaining nodes passing
// the filter, ranked by cosine and appended. Truncated to k1.
CandidateList retrieve_candidates(const TemporalGraph& graph, const QueryPlan& plan,
                                  const NodeId& u, int cut, int k1,
                                  const EmbeddingProvider& provider);

// Round half to even.
long long round_half_even(double x);

// First round(d_hat) candidate ids, capped at the list length.
std::vector<NodeId> truncate_to_k2(const CandidateList& candidates, double d_hat);

// r = 1[format_ok] + sum over windows of |truth ∩ candidates|.
double reward_dst(const std::vector<CandidateList>& candidate_lists,
                  const std::vector<std::set<NodeId>>& truths, bool format_ok);

}  // namespace graphsim
