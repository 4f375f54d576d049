#include "graphsim/activity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace graphsim {

namespace {

void check_histories(const DegreeHistories& histories) {
    if (histories.empty()) throw GraphError("empty degree histories");
    size_t len = histories.begin()->second.size();
    if (len == 0) throw GraphError("degree histories must have length >= 1");
    for (const auto& [node, series] : histories)
        if (series.size() != len)
            throw GraphError("degree history length mismatch for node " + node);
}

}  // namespace

void PersistenceForecaster::fit(const DegreeHistories& histories) {
    check_histories(histories);
    last_.clear();
    for (const auto& [node, series] : histories) last_[node] = series.back();
    fitted_ = true;
}

DegreeForecast PersistenceForecaster::predict(const NodeId& u, int horizon) const {
    require_fitted();
    auto it = last_.find(u);
    double v = it == last_.end() ? 0.0 : std::max(0.0, it->second);
    return {u, std::vector<double>(static_cast<size_t>(horizon), v)};
}

void MovingAverageForecaster::fit(const DegreeHistories& histories) {
    check_histories(histories);
    mean_.clear();
    for (const auto& [node, series] : histories) {
        size_t w = std::min<size_t>(static_cast<size_t>(window_), series.size());
        double sum = 0.0;
        for (size_t i = series.size() - w; i < series.size(); ++i) sum += series[i];
        mean_[node] = sum / static_cast<double>(w);
    }
    fitted_ = true;
}

DegreeForecast MovingAverageForecaster::predict(const NodeId& u, int horizon) const {
    require_fitted();
    auto it = mean_.find(u);
    double v = it == mean_.end() ? 0.0 : std::max(0.0, it->second);
    return {u, std::vector<double>(static_cast<size_t>(horizon), v)};
}

void AutoRegressiveForecaster::fit(const DegreeHistories& histories) {
    check_histories(histories);
    params_.clear();
    for (const auto& [node, series] : histories) {
        Ar1 p;
        p.last = series.back();
        size_t n = series.size();
        if (n < 2) {
            p.intercept = series.back();
        } else {
            // least squares on (x_t, x_{t+1}) pairs
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            double m = static_cast<double>(n - 1);
            for (size_t i = 0; i + 1 < n; ++i) {
                sx += series[i];
                sy += series[i + 1];
                sxx += series[i] * series[i];
                sxy += series[i] * series[i + 1];
            }
            double denom = m * sxx - sx * sx;
            if (std::abs(denom) < 1e-12) {
                p.slope = 0.0;  // constant regressor: predict the mean response
                p.intercept = sy / m;
            } else {
                p.slope = (m * sxy - sx * sy) / denom;
                p.intercept = (sy - p.slope * sx) / m;
            }
        }
        params_[node] = p;
    }
    fitted_ = true;
}

DegreeForecast AutoRegressiveForecaster::predict(const NodeId& u, int horizon) const {
    require_fitted();
    DegreeForecast f{u, std::vector<double>(static_cast<size_t>(horizon), 0.0)};
    auto it = params_.find(u);
    if (it == params_.end()) return f;
    double x = it->second.last;
    for (int t = 0; t < horizon; ++t) {
        x = std::max(0.0, it->second.intercept + it->second.slope * x);
        f.values[static_cast<size_t>(t)] = x;
    }
    return f;
}

std::unique_ptr<Forecaster> make_forecaster(const std::string& name) {
    if (name == "persistence") return std::make_unique<PersistenceForecaster>();
    if (name == "moving-average") return std::make_unique<MovingAverageForecaster>();
    if (name == "autoregressive") return std::make_unique<AutoRegressiveForecaster>();
    throw GraphError("unknown forecaster: " + name);
}

double degree_loss(const std::vector<DegreeForecast>& pred, const DegreeHistories& truth) {
    if (pred.empty()) throw GraphError("empty forecast set");
    size_t tau = pred.front().values.size();
    double sum = 0.0;
    for (const DegreeForecast& f : pred) {
        auto it = truth.find(f.node);
        if (it == truth.end() || it->second.size() != tau || f.values.size() != tau)
            throw GraphError("forecast/truth shape mismatch for node " + f.node);
        for (size_t t = 0; t < tau; ++t) {
            double d = it->second[t] - f.values[t];
            sum += d * d;
        }
    }
    return sum / (static_cast<double>(tau) * static_cast<double>(pred.size()));
}

std::vector<std::set<NodeId>> active_sources(const std::vector<DegreeForecast>& forecasts,
                                             double threshold) {
    size_t tau = forecasts.empty() ? 0 : forecasts.front().values.size();
    std::vector<std::set<NodeId>> out(tau);
    for (const DegreeForecast& f : forecasts)
        for (size_t t = 0; t < std::min(tau, f.values.size()); ++t)
            if (f.values[t] > threshold) out[t].insert(f.node);
    return out;
}

void write_forecast_dump(const std::string& path, const std::vector<DegreeForecast>& forecasts) {
    std::ofstream f(path);
    if (!f) throw GraphError("cannot write forecast dump: " + path);
    for (const DegreeForecast& fc : forecasts)
        for (size_t t = 0; t < fc.values.size(); ++t)
            f << fc.node << "\t" << t << "\t" << fc.values[t] << "\n";
}

}  // namespace graphsim
