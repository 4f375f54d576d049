#include "graphsim/destination.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <unordered_set>

namespace graphsim {

BehaviorStats behavior_stats(const TemporalGraph& graph, const NodeId& u, const NodeId& v,
                             int cut) {
    BehaviorStats s;
    s.sf = graph.out_edge_count_before(u, cut);
    s.hi = graph.pair_edge_count_before(u, v, cut);

    std::vector<NodeId> u_neighbors = graph.out_neighbors_before(u, cut);
    if (!u_neighbors.empty()) {
        double total = 0.0;
        for (const NodeId& w : u_neighbors) total += graph.out_edge_count_before(w, cut);
        s.afn = total / static_cast<double>(u_neighbors.size());
    }

    std::unordered_set<NodeId> u_set(u_neighbors.begin(), u_neighbors.end());
    for (const NodeId& w : graph.out_neighbors_before(v, cut))
        if (u_set.count(w)) ++s.cn;
    return s;
}

bool filter_matches(const FilterRule& rule, const BehaviorStats& stats) {
    if (rule.clauses.empty()) return true;
    auto value = [&](BehaviorMetric m) {
        switch (m) {
            case BehaviorMetric::SF: return stats.sf;
            case BehaviorMetric::AFN: return stats.afn;
            case BehaviorMetric::HI: return stats.hi;
            case BehaviorMetric::CN: return stats.cn;
        }
        return 0.0;
    };
    for (const FilterClause& c : rule.clauses) {
        double x = value(c.metric);
        bool ok = false;
        switch (c.cmp) {
            case Comparator::GT: ok = x > c.threshold; break;
            case Comparator::GE: ok = x >= c.threshold; break;
            case Comparator::EQ: ok = x == c.threshold; break;
            case Comparator::LE: ok = x <= c.threshold; break;
            case Comparator::LT: ok = x < c.threshold; break;
        }
        if (ok) return true;  // disjunctive
    }
    return false;
}

CandidateList retrieve_candidates(const TemporalGraph& graph, const QueryPlan& plan,
                                  const NodeId& u, int cut, int k1,
                                  const EmbeddingProvider& provider) {
    CandidateList out;
    if (k1 < 1) throw GraphError("k1 must be >= 1");
    EmbeddingVector query = provider.embed(plan.query_text);

    auto embed_profiles = [&](const std::vector<NodeId>& ids) {
        std::vector<std::pair<NodeId, EmbeddingVector>> vecs;
        vecs.reserve(ids.size());
        for (const NodeId& id : ids) vecs.emplace_back(id, provider.embed(graph.profile_of(id)));
        return vecs;
    };

    std::vector<NodeId> neighbors = graph.out_neighbors_before(u, cut);
    std::erase(neighbors, u);
    std::unordered_set<NodeId> taken;
    for (const NodeId& id : cosine_rank(query, embed_profiles(neighbors))) {
        if (static_cast<int>(out.ids.size()) >= k1) break;
        if (taken.insert(id).second) {
            out.ids.push_back(id);
            out.provenance.push_back(CandidateStage::neighbor);
        }
    }

    if (static_cast<int>(out.ids.size()) < k1) {
        std::vector<NodeId> general;
        for (const NodeProfile& p : graph.nodes()) {
            if (p.id == u || taken.count(p.id)) continue;
            if (filter_matches(plan.filter, behavior_stats(graph, u, p.id, cut)))
                general.push_back(p.id);
        }
        for (const NodeId& id : cosine_rank(query, embed_profiles(general))) {
            if (static_cast<int>(out.ids.size()) >= k1) break;
            if (taken.insert(id).second) {
                out.ids.push_back(id);
                out.provenance.push_back(CandidateStage::general);
            }
        }
    }
    return out;
}

long long round_half_even(double x) {
    std::fesetround(FE_TONEAREST);  // nearbyint ties to even in this mode
    return static_cast<long long>(std::nearbyint(x));
}

std::vector<NodeId> truncate_to_k2(const CandidateList& candidates, double d_hat) {
    if (d_hat < 0) throw GraphError("d_hat must be >= 0");
    size_t k2 = static_cast<size_t>(round_half_even(d_hat));
    k2 = std::min(k2, candidates.ids.size());
    return {candidates.ids.begin(), candidates.ids.begin() + static_cast<long>(k2)};
}

double reward_dst(const std::vector<CandidateList>& candidate_lists,
                  const std::vector<std::set<NodeId>>& truths, bool format_ok) {
    if (candidate_lists.size() != truths.size())
        throw GraphError("candidate/truth window count mismatch");
    double r = format_ok ? 1.0 : 0.0;
    for (size_t w = 0; w < truths.size(); ++w) {
        std::unordered_set<NodeId> retrieved(candidate_lists[w].ids.begin(),
                                             candidate_lists[w].ids.end());
        for (const NodeId& v : truths[w])
            if (retrieved.count(v)) r += 1.0;
    }
    return r;
}

}  // namespace graphsim
