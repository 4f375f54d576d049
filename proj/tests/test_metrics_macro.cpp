#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "graphsim/metrics_macro.hpp"

using namespace graphsim;

namespace {

Interaction edge(const NodeId& a, const NodeId& b, int t = 0) {
    return {a, b, t, "m", 1};
}

std::vector<Interaction> clique(const std::string& prefix, int n, int offset = 0) {
    std::vector<Interaction> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            edges.push_back(edge(prefix + std::to_string(offset + i),
                                 prefix + std::to_string(offset + j)));
    return edges;
}

}  // namespace

TEST_CASE("mmd2_rbf analytic and degenerate cases") {
    // X={0}, Y={1}, sigma=1: 1 + 1 - 2 e^{-1/2}
    CHECK(mmd2_rbf({0.0}, {1.0}, 1.0) ==
          doctest::Approx(2.0 - 2.0 * std::exp(-0.5)).epsilon(1e-9));
    CHECK(mmd2_rbf({1, 2, 3}, {1, 2, 3}, 0.7) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(mmd2_rbf({}, {1.0}, 1.0), GraphError);
    CHECK_THROWS_AS(mmd2_rbf({1.0}, {1.0}, 0.0), GraphError);
}

TEST_CASE("median heuristic bandwidth") {
    CHECK(median_heuristic_bandwidth({0, 1, 2}) == 1.0);  // dists {1,1,2}
    CHECK(median_heuristic_bandwidth({5, 5, 5}) == 1.0);  // degenerate fallback
    CHECK(median_heuristic_bandwidth({7}) == 1.0);
    CHECK(median_heuristic_bandwidth({0, 10}) == 10.0);
}

TEST_CASE("graph stats on hand graphs") {
    std::vector<Interaction> triangle = {edge("a", "b"), edge("b", "c"), edge("c", "a")};
    std::vector<double> deg = graph_stats(triangle, StatKind::degree);
    CHECK(deg == std::vector<double>{2, 2, 2});
    for (double c : graph_stats(triangle, StatKind::clustering)) CHECK(c == 1.0);

    std::vector<Interaction> path = {edge("a", "b"), edge("b", "c")};
    std::vector<double> pdeg = graph_stats(path, StatKind::degree);
    CHECK(pdeg == std::vector<double>{1, 2, 1});  // ids sorted a,b,c
    for (double c : graph_stats(path, StatKind::clustering)) CHECK(c == 0.0);

    // triangle normalized Laplacian spectrum: {0, 1.5, 1.5}
    std::vector<double> spec = graph_stats(triangle, StatKind::spectral);
    REQUIRE(spec.size() == 3);
    CHECK(spec[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(spec[1] == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(spec[2] == doctest::Approx(1.5).epsilon(1e-9));

    // direction and multiplicity collapse in the projection; self-loops drop
    std::vector<Interaction> multi = {edge("a", "b"), edge("b", "a"), edge("a", "b"),
                                      edge("a", "a")};
    CHECK(graph_stats(multi, StatKind::degree) == std::vector<double>{1, 1});
    CHECK_THROWS_AS(graph_stats({}, StatKind::degree), GraphError);
}

TEST_CASE("spectral subsampling is seeded and bounded") {
    TemporalGraph g = graphsim::testing::make_fixture_graph(120, 8, 3);
    GraphStatsConfig cfg;
    cfg.spectral_exact_limit = 50;
    std::vector<double> s1 = graph_stats(g.edges(), StatKind::spectral, cfg);
    std::vector<double> s2 = graph_stats(g.edges(), StatKind::spectral, cfg);
    CHECK(s1.size() == 50);
    CHECK(s1 == s2);  // same seed, same subsample
    for (double v : s1) {
        CHECK(v >= 0.0);
        CHECK(v <= 2.0);
    }
}

TEST_CASE("edge overlap caps at reference multiplicity") {
    std::vector<Interaction> ref = {edge("a", "b"), edge("a", "b"), edge("b", "c")};
    CHECK(edge_overlap(ref, ref) == 1.0);
    CHECK(edge_overlap({edge("a", "b")}, ref) == doctest::Approx(1.0 / 3.0));
    // three generated copies only match the two reference copies
    std::vector<Interaction> gen = {edge("a", "b"), edge("a", "b"), edge("a", "b")};
    CHECK(edge_overlap(gen, ref) == doctest::Approx(2.0 / 3.0));
    CHECK(edge_overlap({}, ref) == 0.0);
    CHECK(edge_overlap({edge("x", "y")}, ref) == 0.0);
    CHECK_THROWS_AS(edge_overlap(gen, {}), GraphError);
}

TEST_CASE("pagerank on a two-node cycle and with dangling nodes") {
    std::unordered_map<NodeId, double> pr = pagerank({edge("a", "b"), edge("b", "a")});
    CHECK(pr["a"] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(pr["b"] == doctest::Approx(0.5).epsilon(1e-9));

    // b is dangling; mass still sums to 1
    std::unordered_map<NodeId, double> dang = pagerank({edge("a", "b"), edge("c", "a")});
    double total = 0.0;
    for (const auto& [id, score] : dang) total += score;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(dang["b"] > dang["c"]);  // b receives, c only emits
    CHECK_THROWS_AS(pagerank({}), GraphError);
}

TEST_CASE("KOL precision against self and disjoint graphs") {
    TemporalGraph g = graphsim::testing::make_fixture_graph(80, 8, 11);
    CHECK(p_at_100_kol(g.edges(), g.edges()) == 1.0);
    CHECK(p_at_100_kol(g.edges(), g.edges(), true) == 1.0);

    std::vector<Interaction> other = {edge("zz1", "zz2"), edge("zz2", "zz1")};
    CHECK(p_at_100_kol(other, g.edges()) == 0.0);
}

TEST_CASE("echo chambers on constructed communities") {
    std::vector<Interaction> two = clique("a", 6);
    std::vector<Interaction> b = clique("b", 6);
    two.insert(two.end(), b.begin(), b.end());
    CHECK(echo_chambers(two) == 2);

    // dense bipartite bridge dilutes cohesion below the 0.8 budget
    std::vector<Interaction> bridged = two;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 2; ++j)
            bridged.push_back(edge("a" + std::to_string(i), "b" + std::to_string(j)));
    CHECK(echo_chambers(bridged) < 2);

    // small cliques fall under min_size
    CHECK(echo_chambers(clique("c", 4)) == 0);
    CHECK(echo_chambers({}) == 0);

    EchoChamberConfig loose;
    loose.min_size = 3;
    CHECK(echo_chambers(clique("c", 4), loose) == 1);
}

TEST_CASE("power-law fit recovers the generating exponent") {
    std::vector<double> sample = sample_power_law(2.5, 2, 20000, 42);
    PowerLawFit fit = fit_power_law(sample, 2);
    CHECK(fit.alpha == doctest::Approx(2.5).epsilon(0.05));
    CHECK(fit.ks < 0.05);
    CHECK(fit.n_tail == sample.size());  // sampler never draws below xmin

    CHECK_THROWS_AS(fit_power_law({1, 1, 1}, 2), GraphError);  // tail too small
}

TEST_CASE("histogram divergences") {
    HistDivergences same = hist_divergences({0.5, 0.5}, {0.5, 0.5});
    CHECK(same.wasserstein == 0.0);
    CHECK(same.kl == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(same.mmd_od == doctest::Approx(0.0).epsilon(1e-9));

    HistDivergences flip = hist_divergences({1.0, 0.0}, {0.0, 1.0});
    CHECK(flip.wasserstein == 0.5);

    // KL against a direct summation with the same epsilon
    std::vector<double> p{0.7, 0.3}, q{0.4, 0.6};
    double eps = 1e-10;
    double kl = p[0] * std::log((p[0] + eps) / (q[0] + eps)) +
                p[1] * std::log((p[1] + eps) / (q[1] + eps));
    CHECK(hist_divergences(p, q).kl == doctest::Approx(kl).epsilon(1e-12));

    CHECK_THROWS_AS(hist_divergences({1.0}, {0.5, 0.5}), GraphError);
}

TEST_CASE("compose_idgg spreadsheet case with lower-better reversal") {
    MacroReport a;
    a.model = "a";
    a.mmd_degree = 0.1;
    a.mmd_clustering = 0.2;
    a.mmd_spectral = 0.3;
    a.eo = 0.8;
    a.p100_kol = 0.9;
    a.delta_chambers = 1;
    a.delta_alpha = 0.05;
    MacroReport b;
    b.model = "b";
    b.mmd_degree = 0.3;
    b.mmd_clustering = 0.1;
    b.mmd_spectral = 0.3;
    b.eo = 0.2;
    b.p100_kol = 0.9;
    b.delta_chambers = 3;
    b.delta_alpha = 0.01;

    std::vector<IdggScores> s = compose_idgg({a, b});
    // a normalized: mmd (1, 0, 1), eo 1, kol 1, dc 1, da 0
    CHECK(s[0].s_structure == doctest::Approx((1 + 0 + 1 + 1) / 4.0));
    CHECK(s[0].s_phenomenon == doctest::Approx((1 + 1 + 0) / 3.0));
    CHECK(s[0].s_idgg == doctest::Approx(0.5 * s[0].s_structure + 0.5 * s[0].s_phenomenon));
    // b normalized: mmd (0, 1, 1), eo 0, kol 1, dc 0, da 1
    CHECK(s[1].s_structure == doctest::Approx(0.5));
    CHECK(s[1].s_phenomenon == doctest::Approx(2.0 / 3.0));

    std::vector<IdggScores> solo = compose_idgg({a});
    CHECK(solo[0].s_structure == 1.0);
    CHECK(solo[0].s_phenomenon == 1.0);
    CHECK(solo[0].s_idgg == 1.0);
}

TEST_CASE("eval_idgg_pair self-comparison is perfect") {
    TemporalGraph g = graphsim::testing::make_fixture_graph(100, 8, 21);
    MacroReport r = eval_idgg_pair(g.edges(), g.edges());
    CHECK(r.mmd_degree < 1e-9);
    CHECK(r.mmd_clustering < 1e-9);
    CHECK(r.mmd_spectral < 1e-9);
    CHECK(r.eo == 1.0);
    CHECK(r.p100_kol == 1.0);
    CHECK(r.delta_chambers == 0.0);
    CHECK(r.delta_alpha == 0.0);
}

TEST_CASE("eval_idgg_pair tolerates an empty generated graph") {
    TemporalGraph g = graphsim::testing::make_fixture_graph(60, 8, 31);
    MacroReport r = eval_idgg_pair({}, g.edges());
    CHECK(r.eo == 0.0);
    CHECK(r.p100_kol == 0.0);
    CHECK(r.mmd_degree >= 0.0);
}
