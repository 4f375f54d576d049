#include "graphsim/metrics_macro.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <unordered_set>

#include <Eigen/Dense>

#include "graphsim/metrics_micro.hpp"

namespace graphsim {

namespace {

// Simple undirected projection: indexed nodes, de-duplicated neighbor sets,
// self-loops dropped. Pair weights keep edge multiplicity.
struct UndirectedGraph {
    std::vector<NodeId> ids;                       // index -> id, sorted
    std::unordered_map<NodeId, size_t> index;
    std::vector<std::vector<size_t>> adj;          // distinct neighbors
    std::vector<std::map<size_t, double>> weights; // multiplicity per neighbor
};

UndirectedGraph undirected_projection(const std::vector<Interaction>& edges) {
    UndirectedGraph g;
    std::set<NodeId> ids;
    for (const Interaction& e : edges) {
        ids.insert(e.src);
        ids.insert(e.dst);
    }
    g.ids.assign(ids.begin(), ids.end());
    for (size_t i = 0; i < g.ids.size(); ++i) g.index[g.ids[i]] = i;
    g.weights.resize(g.ids.size());
    for (const Interaction& e : edges) {
        if (e.src == e.dst) continue;
        size_t a = g.index[e.src], b = g.index[e.dst];
        g.weights[a][b] += 1.0;
        g.weights[b][a] += 1.0;
    }
    g.adj.resize(g.ids.size());
    for (size_t i = 0; i < g.ids.size(); ++i)
        for (const auto& [j, w] : g.weights[i]) g.adj[i].push_back(j);
    return g;
}

std::vector<double> degree_sample(const UndirectedGraph& g) {
    std::vector<double> out(g.ids.size());
    for (size_t i = 0; i < g.ids.size(); ++i) out[i] = static_cast<double>(g.adj[i].size());
    return out;
}

std::vector<double> clustering_sample(const UndirectedGraph& g) {
    std::vector<double> out(g.ids.size(), 0.0);
    std::vector<std::unordered_set<size_t>> nbr(g.ids.size());
    for (size_t i = 0; i < g.ids.size(); ++i)
        nbr[i] = {g.adj[i].begin(), g.adj[i].end()};
    for (size_t i = 0; i < g.ids.size(); ++i) {
        size_t k = g.adj[i].size();
        if (k < 2) continue;
        size_t links = 0;
        for (size_t a = 0; a < k; ++a)
            for (size_t b = a + 1; b < k; ++b)
                if (nbr[g.adj[i][a]].count(g.adj[i][b])) ++links;
        out[i] = 2.0 * static_cast<double>(links) / (static_cast<double>(k) * (k - 1));
    }
    return out;
}

std::vector<double> spectral_sample(const UndirectedGraph& g, const GraphStatsConfig& cfg) {
    std::vector<size_t> keep(g.ids.size());
    std::iota(keep.begin(), keep.end(), 0);
    if (keep.size() > cfg.spectral_exact_limit) {
        std::mt19937_64 rng(cfg.sample_seed);
        std::shuffle(keep.begin(), keep.end(), rng);
        keep.resize(cfg.spectral_exact_limit);
        std::sort(keep.begin(), keep.end());
    }
    size_t n = keep.size();
    if (n == 0) return {};
    std::unordered_map<size_t, size_t> local;
    for (size_t i = 0; i < n; ++i) local[keep[i]] = i;

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j : g.adj[keep[i]]) {
            auto it = local.find(j);
            if (it != local.end()) a(static_cast<long>(i), static_cast<long>(it->second)) = 1.0;
        }
    Eigen::VectorXd deg = a.rowwise().sum();
    Eigen::VectorXd dinv = deg.unaryExpr([](double d) { return d > 0 ? 1.0 / std::sqrt(d) : 0.0; });
    Eigen::MatrixXd lap =
        Eigen::MatrixXd::Identity(static_cast<long>(n), static_cast<long>(n)) -
        dinv.asDiagonal() * a * dinv.asDiagonal();
    // isolated rows of the normalized Laplacian contribute 1 on the diagonal;
    // keep the 0-eigenvalue convention for degree-0 nodes instead
    for (size_t i = 0; i < n; ++i)
        if (deg(static_cast<long>(i)) == 0) lap(static_cast<long>(i), static_cast<long>(i)) = 0.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i)
        out[i] = std::clamp(solver.eigenvalues()(static_cast<long>(i)), 0.0, 2.0);
    return out;
}

}  // namespace

double mmd2_rbf(const std::vector<double>& x, const std::vector<double>& y, double sigma) {
    if (x.empty() || y.empty()) throw GraphError("mmd2_rbf: empty sample");
    if (sigma <= 0) throw GraphError("mmd2_rbf: bandwidth must be positive");
    double inv = 1.0 / (2.0 * sigma * sigma);
    auto kernel_mean = [&](const std::vector<double>& a, const std::vector<double>& b) {
        double sum = 0.0;
        for (double ai : a)
            for (double bi : b) {
                double d = ai - bi;
                sum += std::exp(-d * d * inv);
            }
        return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    };
    return kernel_mean(x, x) + kernel_mean(y, y) - 2.0 * kernel_mean(x, y);
}

double median_heuristic_bandwidth(const std::vector<double>& reference) {
    if (reference.size() < 2) return 1.0;
    std::vector<double> dists;
    dists.reserve(reference.size() * (reference.size() - 1) / 2);
    for (size_t i = 0; i < reference.size(); ++i)
        for (size_t j = i + 1; j < reference.size(); ++j)
            dists.push_back(std::abs(reference[i] - reference[j]));
    size_t mid = dists.size() / 2;
    std::nth_element(dists.begin(), dists.begin() + static_cast<long>(mid), dists.end());
    double median = dists[mid];
    return median > 0 ? median : 1.0;
}

std::vector<double> graph_stats(const std::vector<Interaction>& edges, StatKind kind,
                                const GraphStatsConfig& config) {
    UndirectedGraph g = undirected_projection(edges);
    if (g.ids.empty()) throw GraphError("graph_stats: empty graph");
    switch (kind) {
        case StatKind::degree: return degree_sample(g);
        case StatKind::clustering: return clustering_sample(g);
        case StatKind::spectral: return spectral_sample(g, config);
    }
    return {};
}

double edge_overlap(const std::vector<Interaction>& generated,
                    const std::vector<Interaction>& reference) {
    if (reference.empty()) throw GraphError("edge_overlap: empty reference");
    std::map<std::pair<NodeId, NodeId>, long> ref_counts;
    for (const Interaction& e : reference) ++ref_counts[{e.src, e.dst}];
    long hits = 0;
    for (const Interaction& e : generated) {
        auto it = ref_counts.find({e.src, e.dst});
        if (it != ref_counts.end() && it->second > 0) {
            ++hits;
            --it->second;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(reference.size());
}

std::unordered_map<NodeId, double> pagerank(const std::vector<Interaction>& edges,
                                            double damping, double tol, int max_iters) {
    std::set<NodeId> ids;
    for (const Interaction& e : edges) {
        ids.insert(e.src);
        ids.insert(e.dst);
    }
    if (ids.empty()) throw GraphError("pagerank: empty graph");
    std::vector<NodeId> nodes(ids.begin(), ids.end());
    std::unordered_map<NodeId, size_t> index;
    for (size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;

    size_t n = nodes.size();
    std::vector<std::map<size_t, double>> out_weights(n);
    std::vector<double> out_total(n, 0.0);
    for (const Interaction& e : edges) {
        out_weights[index[e.src]][index[e.dst]] += 1.0;
        out_total[index[e.src]] += 1.0;
    }

    std::vector<double> rank(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);
    for (int iter = 0; iter < max_iters; ++iter) {
        double dangling = 0.0;
        for (size_t i = 0; i < n; ++i)
            if (out_total[i] == 0.0) dangling += rank[i];
        double base = (1.0 - damping) / static_cast<double>(n) +
                      damping * dangling / static_cast<double>(n);
        std::fill(next.begin(), next.end(), base);
        for (size_t i = 0; i < n; ++i) {
            if (out_total[i] == 0.0) continue;
            double share = damping * rank[i] / out_total[i];
            for (const auto& [j, w] : out_weights[i]) next[j] += share * w;
        }
        double delta = 0.0;
        for (size_t i = 0; i < n; ++i) delta += std::abs(next[i] - rank[i]);
        rank.swap(next);
        if (delta < tol) {
            std::unordered_map<NodeId, double> scores;
            for (size_t i = 0; i < n; ++i) scores[nodes[i]] = rank[i];
            return scores;
        }
    }
    throw GraphError("pagerank did not converge");
}

namespace {

std::vector<NodeId> top_k_nodes(const std::vector<Interaction>& edges, size_t k,
                                bool by_degree) {
    std::vector<std::pair<double, NodeId>> scored;
    if (by_degree) {
        UndirectedGraph g = undirected_projection(edges);
        for (size_t i = 0; i < g.ids.size(); ++i)
            scored.emplace_back(static_cast<double>(g.adj[i].size()), g.ids[i]);
    } else {
        for (const auto& [id, score] : pagerank(edges)) scored.emplace_back(score, id);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<NodeId> out;
    for (size_t i = 0; i < std::min(k, scored.size()); ++i) out.push_back(scored[i].second);
    return out;
}

}  // namespace

double p_at_100_kol(const std::vector<Interaction>& generated,
                    const std::vector<Interaction>& reference, bool by_degree) {
    std::vector<NodeId> ref_top = top_k_nodes(reference, 100, by_degree);
    std::vector<NodeId> gen_top = top_k_nodes(generated, 100, by_degree);
    if (ref_top.empty()) return 0.0;
    std::unordered_set<NodeId> ref_set(ref_top.begin(), ref_top.end());
    size_t hits = 0;
    for (const NodeId& v : gen_top)
        if (ref_set.count(v)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(ref_top.size());
}

namespace {

// One Louvain level: greedy modularity moves in node order until stable.
// Returns node -> community (renumbered compactly) and whether anything moved.
std::pair<std::vector<size_t>, bool> louvain_level(
    const std::vector<std::map<size_t, double>>& weights,
    const std::vector<double>& self_loops) {
    size_t n = weights.size();
    std::vector<double> strength(n, 0.0);  // k_i including self-loop weight twice
    double m2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        for (const auto& [j, w] : weights[i]) strength[i] += w;
        strength[i] += 2.0 * self_loops[i];
        m2 += strength[i];
    }
    if (m2 <= 0) return {std::vector<size_t>(n, 0), false};

    std::vector<size_t> comm(n);
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> comm_strength = strength;

    bool any_move = false;
    bool moved = true;
    int guard = 0;
    while (moved && guard++ < 100) {
        moved = false;
        for (size_t v = 0; v < n; ++v) {
            std::map<size_t, double> to_comm;  // ordered: deterministic tie-break
            for (const auto& [j, w] : weights[v])
                if (j != v) to_comm[comm[j]] += w;
            size_t old_comm = comm[v];
            comm_strength[old_comm] -= strength[v];

            double best_gain = 0.0;
            size_t best_comm = old_comm;
            double w_old = to_comm.count(old_comm) ? to_comm[old_comm] : 0.0;
            double gain_stay = w_old - comm_strength[old_comm] * strength[v] / m2;
            for (const auto& [c, w] : to_comm) {
                double gain = w - comm_strength[c] * strength[v] / m2;
                if (gain - gain_stay > best_gain + 1e-12) {
                    best_gain = gain - gain_stay;
                    best_comm = c;
                }
            }
            comm[v] = best_comm;
            comm_strength[best_comm] += strength[v];
            if (best_comm != old_comm) {
                moved = true;
                any_move = true;
            }
        }
    }

    // compact renumbering in first-seen order
    std::map<size_t, size_t> renum;
    for (size_t v = 0; v < n; ++v)
        if (!renum.count(comm[v])) {
            size_t next = renum.size();
            renum[comm[v]] = next;
        }
    for (size_t v = 0; v < n; ++v) comm[v] = renum[comm[v]];
    return {comm, any_move};
}

std::vector<size_t> louvain_communities(const UndirectedGraph& g) {
    size_t n = g.ids.size();
    std::vector<size_t> assignment(n);
    std::iota(assignment.begin(), assignment.end(), 0);

    std::vector<std::map<size_t, double>> weights = g.weights;
    std::vector<double> self_loops(n, 0.0);

    for (int level = 0; level < 32; ++level) {
        auto [comm, moved] = louvain_level(weights, self_loops);
        if (!moved && level > 0) break;
        for (size_t v = 0; v < n; ++v) assignment[v] = comm[assignment[v]];
        if (!moved) break;

        // aggregate
        size_t nc = *std::max_element(comm.begin(), comm.end()) + 1;
        std::vector<std::map<size_t, double>> agg(nc);
        std::vector<double> agg_loops(nc, 0.0);
        for (size_t i = 0; i < weights.size(); ++i) {
            agg_loops[comm[i]] += self_loops[i];
            for (const auto& [j, w] : weights[i]) {
                if (comm[i] == comm[j]) {
                    if (i < j) agg_loops[comm[i]] += w;
                } else {
                    agg[comm[i]][comm[j]] += w;
                }
            }
        }
        if (nc == weights.size()) break;
        weights.swap(agg);
        self_loops.swap(agg_loops);
    }
    return assignment;
}

}  // namespace

int echo_chambers(const std::vector<Interaction>& edges, const EchoChamberConfig& config) {
    if (edges.empty()) return 0;
    UndirectedGraph g = undirected_projection(edges);
    if (g.ids.empty()) return 0;
    std::vector<size_t> comm = louvain_communities(g);

    size_t nc = *std::max_element(comm.begin(), comm.end()) + 1;
    std::vector<size_t> sizes(nc, 0);
    std::vector<double> internal(nc, 0.0), boundary(nc, 0.0);
    for (size_t v = 0; v < g.ids.size(); ++v) ++sizes[comm[v]];
    for (size_t i = 0; i < g.ids.size(); ++i)
        for (const auto& [j, w] : g.weights[i]) {
            if (i >= j) continue;  // each undirected pair once
            if (comm[i] == comm[j]) {
                internal[comm[i]] += w;
            } else {
                boundary[comm[i]] += w;
                boundary[comm[j]] += w;
            }
        }

    int count = 0;
    for (size_t c = 0; c < nc; ++c) {
        if (sizes[c] < config.min_size) continue;
        double total = internal[c] + boundary[c];
        if (total <= 0) continue;
        if (internal[c] / total >= config.cohesion) ++count;
    }
    return count;
}

PowerLawFit fit_power_law(const std::vector<double>& degrees, int xmin) {
    PowerLawFit fit;
    fit.xmin = xmin;
    std::vector<double> tail;
    for (double d : degrees)
        if (d >= xmin) tail.push_back(d);
    if (tail.size() < 10) throw GraphError("fit_power_law: insufficient tail data (need >= 10)");
    fit.n_tail = tail.size();

    double offset = static_cast<double>(xmin) - 0.5;
    double log_sum = 0.0;
    for (double d : tail) log_sum += std::log(d / offset);
    fit.alpha = 1.0 + static_cast<double>(tail.size()) / log_sum;

    // KS over the tail: empirical CDF vs fitted CDF at observed integer degrees
    std::sort(tail.begin(), tail.end());
    double ks = 0.0;
    size_t i = 0;
    while (i < tail.size()) {
        size_t j = i;
        while (j + 1 < tail.size() && tail[j + 1] == tail[i]) ++j;
        double d = tail[i];
        double emp_hi = static_cast<double>(j + 1) / static_cast<double>(tail.size());
        double emp_lo = static_cast<double>(i) / static_cast<double>(tail.size());
        double model_hi = 1.0 - std::pow((d + 0.5) / offset, -(fit.alpha - 1.0));
        double model_lo = 1.0 - std::pow(std::max(d - 0.5, offset) / offset, -(fit.alpha - 1.0));
        ks = std::max(ks, std::max(std::abs(emp_hi - model_hi), std::abs(emp_lo - model_lo)));
        i = j + 1;
    }
    fit.ks = ks;
    return fit;
}

std::vector<double> sample_power_law(double alpha, int xmin, size_t n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double offset = static_cast<double>(xmin) - 0.5;
    std::vector<double> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        double u = unif(rng);
        double x = offset * std::pow(1.0 - u, -1.0 / (alpha - 1.0));
        out.push_back(std::floor(x + 0.5));
    }
    return out;
}

HistDivergences hist_divergences(const std::vector<double>& p, const std::vector<double>& q,
                                 double kl_epsilon) {
    if (p.empty() || q.empty()) throw GraphError("hist_divergences: empty histogram");
    if (p.size() != q.size()) throw GraphError("hist_divergences: bin count mismatch");
    HistDivergences d;
    double cp = 0.0, cq = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        cp += p[i];
        cq += q[i];
        d.wasserstein += std::abs(cp - cq);
    }
    d.wasserstein /= static_cast<double>(p.size());
    for (size_t i = 0; i < p.size(); ++i)
        d.kl += p[i] * std::log((p[i] + kl_epsilon) / (q[i] + kl_epsilon));
    double sigma = median_heuristic_bandwidth(p);
    d.mmd_od = std::sqrt(std::max(0.0, mmd2_rbf(p, q, sigma)));
    return d;
}

std::vector<IdggScores> compose_idgg(const std::vector<MacroReport>& reports) {
    if (reports.empty()) throw GraphError("compose_idgg: no reports");
    auto column = [&](double MacroReport::* field, Direction dir) {
        std::vector<double> v;
        v.reserve(reports.size());
        for (const MacroReport& r : reports) v.push_back(r.*field);
        return minmax_normalize(v, dir);
    };
    std::vector<double> md = column(&MacroReport::mmd_degree, Direction::lower_better);
    std::vector<double> mc = column(&MacroReport::mmd_clustering, Direction::lower_better);
    std::vector<double> ms = column(&MacroReport::mmd_spectral, Direction::lower_better);
    std::vector<double> eo = column(&MacroReport::eo, Direction::higher_better);
    std::vector<double> kol = column(&MacroReport::p100_kol, Direction::higher_better);
    std::vector<double> dc = column(&MacroReport::delta_chambers, Direction::lower_better);
    std::vector<double> da = column(&MacroReport::delta_alpha, Direction::lower_better);

    std::vector<IdggScores> out(reports.size());
    for (size_t i = 0; i < reports.size(); ++i) {
        out[i].s_structure = (md[i] + mc[i] + ms[i] + eo[i]) / 4.0;
        out[i].s_phenomenon = (kol[i] + dc[i] + da[i]) / 3.0;
        out[i].s_idgg = 0.5 * out[i].s_structure + 0.5 * out[i].s_phenomenon;
    }
    return out;
}

MacroReport eval_idgg_pair(const std::vector<Interaction>& generated,
                           const std::vector<Interaction>& reference,
                           const MacroEvalConfig& config) {
    MacroReport r;
    for (auto [kind, field] : {std::pair{StatKind::degree, &MacroReport::mmd_degree},
                               std::pair{StatKind::clustering, &MacroReport::mmd_clustering},
                               std::pair{StatKind::spectral, &MacroReport::mmd_spectral}}) {
        std::vector<double> ref_stat = graph_stats(reference, kind, config.stats);
        std::vector<double> gen_stat =
            generated.empty() ? std::vector<double>{0.0} : graph_stats(generated, kind, config.stats);
        double sigma = median_heuristic_bandwidth(ref_stat);
        r.*field = mmd2_rbf(gen_stat, ref_stat, sigma);
    }
    r.eo = generated.empty() ? 0.0 : edge_overlap(generated, reference);
    r.p100_kol = generated.empty()
                     ? 0.0
                     : p_at_100_kol(generated, reference, config.kol_by_degree);
    r.delta_chambers = std::abs(echo_chambers(reference, config.chambers) -
                                echo_chambers(generated, config.chambers));

    auto fit_or = [&](const std::vector<Interaction>& edges) -> std::optional<double> {
        if (edges.empty()) return std::nullopt;
        try {
            return fit_power_law(graph_stats(edges, StatKind::degree, config.stats),
                                 config.power_law_xmin)
                .alpha;
        } catch (const GraphError&) {
            return std::nullopt;
        }
    };
    std::optional<double> a_ref = fit_or(reference);
    std::optional<double> a_gen = fit_or(generated);
    if (a_ref && a_gen)
        r.delta_alpha = std::abs(*a_ref - *a_gen);
    else if (a_ref || a_gen)
        // one side has no fittable tail: distance from the alpha -> 1 boundary
        r.delta_alpha = std::abs((a_ref ? *a_ref : 1.0) - (a_gen ? *a_gen : 1.0));
    else
        r.delta_alpha = 0.0;
    return r;
}

}  // namespace graphsim
