#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "graphsim/activity.hpp"

using namespace graphsim;
namespace fs = std::filesystem;

TEST_CASE("persistence forecaster repeats the last value") {
    PersistenceForecaster f;
    f.fit({{"a", {1, 2, 3}}, {"b", {0, 0, 5}}});
    CHECK(f.predict("a", 4).values == std::vector<double>{3, 3, 3, 3});
    CHECK(f.predict("b", 2).values == std::vector<double>{5, 5});
    CHECK(f.predict("missing", 3).values == std::vector<double>{0, 0, 0});
}

TEST_CASE("moving average uses at most the window") {
    MovingAverageForecaster f(3);
    f.fit({{"a", {10, 1, 2, 3}}, {"b", {4, 4, 4, 4}}});
    CHECK(f.predict("a", 2).values == std::vector<double>{2, 2});  // mean of 1,2,3
    CHECK(f.predict("b", 1).values == std::vector<double>{4});

    MovingAverageForecaster wide(5);
    wide.fit({{"c", {4, 6}}});  // history shorter than the window
    CHECK(wide.predict("c", 1).values == std::vector<double>{5});
}

TEST_CASE("ar(1) learns an exact linear recurrence") {
    // x_{t+1} = 1 + 0.5 x_t from x_0 = 8: 8, 5, 3.5, 2.75, 2.375
    AutoRegressiveForecaster f;
    f.fit({{"a", {8, 5, 3.5, 2.75, 2.375}}});
    DegreeForecast p = f.predict("a", 2);
    CHECK(p.values[0] == doctest::Approx(1 + 0.5 * 2.375).epsilon(1e-9));
    CHECK(p.values[1] == doctest::Approx(1 + 0.5 * p.values[0]).epsilon(1e-9));
}

TEST_CASE("ar(1) on a constant series predicts the constant") {
    AutoRegressiveForecaster f;
    f.fit({{"c", {4, 4, 4, 4}}});
    CHECK(f.predict("c", 3).values == std::vector<double>{4, 4, 4});
}

TEST_CASE("forecasts are clipped at zero") {
    AutoRegressiveForecaster f;
    // steeply decreasing series drives the one-step forecast negative
    f.fit({{"d", {9, 6, 3, 0}}});
    for (double v : f.predict("d", 5).values) CHECK(v >= 0.0);
}

TEST_CASE("fit validation") {
    PersistenceForecaster f;
    CHECK_THROWS_AS(f.predict("a", 1), GraphError);  // not fitted
    CHECK_THROWS_AS(f.fit({}), GraphError);
    CHECK_THROWS_AS(f.fit({{"a", {1, 2}}, {"b", {1}}}), GraphError);  // ragged
    CHECK_THROWS_AS(make_forecaster("nope"), GraphError);
    CHECK(make_forecaster("moving-average")->name() == "moving-average");
}

TEST_CASE("degree_loss averages squared errors over nodes and days") {
    std::vector<DegreeForecast> pred = {{"a", {1, 2}}, {"b", {0, 0}}};
    DegreeHistories truth = {{"a", {1, 4}}, {"b", {2, 0}}};
    // errors: a -> 0,4 ; b -> 4,0 ; mean over 4 cells = 2
    CHECK(degree_loss(pred, truth) == doctest::Approx(2.0));
    CHECK_THROWS_AS(degree_loss(pred, DegreeHistories{{"a", {1, 4}}}), GraphError);
}

TEST_CASE("active_sources applies a strict threshold per day") {
    std::vector<DegreeForecast> fc = {{"a", {0.0, 1.5}}, {"b", {2.0, 0.0}}};
    std::vector<std::set<NodeId>> days = active_sources(fc, 0.0);
    REQUIRE(days.size() == 2);
    CHECK(days[0] == std::set<NodeId>{"b"});
    CHECK(days[1] == std::set<NodeId>{"a"});
    CHECK(active_sources(fc, 2.0)[0].empty());  // strictly greater than
}

TEST_CASE("forecast dump is tab separated") {
    fs::path path = fs::temp_directory_path() / "graphsim_forecast.tsv";
    write_forecast_dump(path.string(), {{"a", {1.5, 2.0}}});
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "a\t0\t1.5");
    std::getline(in, line);
    CHECK(line == "a\t1\t2");
    fs::remove(path);
}

TEST_CASE("degree series from the graph feed the forecasters") {
    TemporalGraph g = graphsim::testing::make_tiny_graph();
    DegreeHistories h;
    for (const NodeProfile& p : g.nodes()) {
        std::vector<int> s = g.out_degree_series(p.id, {0, 5});
        h[p.id] = {s.begin(), s.end()};
    }
    PersistenceForecaster f;
    f.fit(h);
    CHECK(f.predict("a", 1).values[0] == 0.0);  // a has no edge on day 4
    CHECK(f.predict("d", 1).values[0] == 1.0);
}
