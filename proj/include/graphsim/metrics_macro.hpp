#pragma once
// Macro-level evaluation: graph-statistic MMDs, edge overlap, KOL precision,
// echo-chamber delta, power-law delta, degree-forecast divergences, and the
// composite structure/phenomenon scores.

#include <string>
#include <unordered_map>
#include <vector>

#include "graphsim/graph.hpp"

namespace graphsim {

// Squared MMD with RBF kernel k(a,b) = exp(-(a-b)^2 / 2 sigma^2).
double mmd2_rbf(const std::vector<double>& x, const std::vector<double>& y, double sigma);

// Median pairwise distance within the reference sample (fallback 1.0 when all
// points coincide).
double median_heuristic_bandwidth(const std::vector<double>& reference);

enum class StatKind { degree, clustering, spectral };

struct GraphStatsConfig {
    // Above this node count the spectral statistic is computed on a seeded
    // random node-induced subgraph; exact below it.
    size_t spectral_exact_limit = 1500;
    uint64_t sample_seed = 12345;
};

// Per-node statistics on the undirected projection of an edge list.
// degree: total degree; clustering: local clustering coefficient;
// spectral: eigenvalues of the symmetric normalized Laplacian.
std::vector<double> graph_stats(const std::vector<Interaction>& edges, StatKind kind,
                                const GraphStatsConfig& config = {});

// |gen ∩ ref| / |ref| over (src, dst) pairs, multiset intersection capped at
// reference multiplicity.
double edge_overlap(const std::vector<Interaction>& generated,
                    const std::vector<Interaction>& reference);

// Directed PageRank with uniform redistribution of dangling mass.
std::unordered_map<NodeId, double> pagerank(const std::vector<Interaction>& edges,
                                            double damping = 0.85, double tol = 1e-9,
                                            int max_iters = 10000);

// Overlap of top-100 PageRank node sets (degree-ranked variant behind the flag).
double p_at_100_kol(const std::vector<Interaction>& generated,
                    const std::vector<Interaction>& reference, bool by_degree = false);

struct EchoChamberConfig {
    size_t min_size = 5;
    double cohesion = 0.8;  // internal / (internal + boundary) edge fraction
};

// Modularity-maximizing communities (Louvain, deterministic node order) on the
// undirected projection, counted when large and internally cohesive enough.
int echo_chambers(const std::vector<Interaction>& edges, const EchoChamberConfig& config = {});

struct PowerLawFit {
    double alpha = 0.0;
    int xmin = 2;
    double ks = 0.0;
    size_t n_tail = 0;  // sample points with degree >= xmin
};

// Discrete MLE with the continuous approximation alpha = 1 + n / sum ln(d/(xmin-0.5)),
// KS distance between empirical and fitted CCDFs over d >= xmin.
PowerLawFit fit_power_law(const std::vector<double>& degrees, int xmin = 2);

// Inverse-transform sampler matching the fitted model family (test oracle support).
std::vector<double> sample_power_law(double alpha, int xmin, size_t n, uint64_t seed);

struct HistDivergences {
    double wasserstein = 0;
    double kl = 0;
    double mmd_od = 0;
};

// p and q are probability histograms over shared bins.
HistDivergences hist_divergences(const std::vector<double>& p, const std::vector<double>& q,
                                 double kl_epsilon = 1e-10);

struct MacroReport {
    std::string model;
    double mmd_degree = 0, mmd_clustering = 0, mmd_spectral = 0;
    double eo = 0, p100_kol = 0;
    double delta_chambers = 0, delta_alpha = 0;
};

struct IdggScores {
    double s_structure = 0, s_phenomenon = 0, s_idgg = 0;
};

std::vector<IdggScores> compose_idgg(const std::vector<MacroReport>& reports);

struct MacroEvalConfig {
    GraphStatsConfig stats;
    EchoChamberConfig chambers;
    int power_law_xmin = 2;
    bool kol_by_degree = false;
};

// Full macro comparison of a generated edge set against the reference.
MacroReport eval_idgg_pair(const std::vector<Interaction>& generated,
                           const std::vector<Interaction>& reference,
                           const MacroEvalConfig& config = {});

}  // namespace graphsim
