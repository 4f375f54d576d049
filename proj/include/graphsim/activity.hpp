#pragma once
// Per-node out-degree forecasting and active-source derivation.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "graphsim/graph.hpp"

namespace graphsim {

struct DegreeForecast {
    NodeId node;
    std::vector<double> values;  // one per future day, >= 0
};

using DegreeHistories = std::map<NodeId, std::vector<double>>;

class Forecaster {
public:
    virtual ~Forecaster() = default;
    virtual std::string name() const = 0;
    virtual void fit(const DegreeHistories& histories) = 0;
    // Nodes absent from the fitted history forecast zeros.
    virtual DegreeForecast predict(const NodeId& u, int horizon) const = 0;
    bool fitted() const { return fitted_; }

protected:
    void require_fitted() const {
        if (!fitted_) throw GraphError("forecaster not fitted");
    }
    bool fitted_ = false;
};

// Repeats the last observed value.
class PersistenceForecaster : public Forecaster {
public:
    std::string name() const override { return "persistence"; }
    void fit(const DegreeHistories& histories) override;
    DegreeForecast predict(const NodeId& u, int horizon) const override;

private:
    std::map<NodeId, double> last_;
};

// Mean of the last min(window, history) observations, repeated.
class MovingAverageForecaster : public Forecaster {
public:
    explicit MovingAverageForecaster(int window = 7) : window_(window) {}
    std::string name() const override { return "moving-average"; }
    void fit(const DegreeHistories& histories) override;
    DegreeForecast predict(const NodeId& u, int horizon) const override;

private:
    int window_;
    std::map<NodeId, double> mean_;
};

// Per-node AR(1) with intercept, least squares, rolled forward and clipped at 0.
class AutoRegressiveForecaster : public Forecaster {
public:
    std::string name() const override { return "autoregressive"; }
    void fit(const DegreeHistories& histories) override;
    DegreeForecast predict(const NodeId& u, int horizon) const override;

private:
    struct Ar1 {
        double intercept = 0.0;
        double slope = 0.0;
        double last = 0.0;
    };
    std::map<NodeId, Ar1> params_;
};

std::unique_ptr<Forecaster> make_forecaster(const std::string& name);

// (1/(tau*N)) sum_u sum_t (d - d_hat)^2 over aligned forecast/truth pairs.
double degree_loss(const std::vector<DegreeForecast>& pred, const DegreeHistories& truth);

// U_t = { u : d_hat_t(u) > threshold }, one set per forecast day.
std::vector<std::set<NodeId>> active_sources(const std::vector<DegreeForecast>& forecasts,
                                             double threshold = 0.0);

void write_forecast_dump(const std::string& path, const std::vector<DegreeForecast>& forecasts);

}  // namespace graphsim
