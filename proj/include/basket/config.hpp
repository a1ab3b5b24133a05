#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "basket/trial.hpp"

namespace basket {

// One expanded grid cell: a data-generating configuration (strategies are
// crossed with cells at run time).
struct ScenarioCell {
    int scenario_id = 0;
    std::vector<double> rates_pct;  // percent, e.g. {30, 10}
    int num_interims = 1;
    ScenarioSpec scenario;
    std::vector<int> schedule;
};

// Parsed and validated run configuration.
struct RunConfig {
    int baskets = 2;
    std::vector<std::vector<double>> scenario_rates;  // percent tuples
    std::vector<int> sample_sizes{24};
    std::vector<double> accrual_rates{0.5};
    std::vector<int> interim_looks{1};
    std::vector<Strategy> strategies{Strategy::NI, Strategy::OD, Strategy::CD};
    long replicates = 1000;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string profile = "paper";
    std::string out_dir = "results";

    double response_window = 3.0;
    double weibull_shape = 4.0;
    double phi = 0.3;
    PriorSpec prior;
    BorrowConfig borrow;
    double gamma_interim = 0.95;
    double gamma_final = 0.975;
    McmcConfig mcmc;  // already resolved against the profile

    void validate() const;
    std::vector<ScenarioCell> expand() const;
    DesignSpec design_for(Strategy strategy, const ScenarioCell& cell) const;
};

// Closed-form scale at which F(window; shape, sigma) equals the given rate.
double scale_for_rate(double rate, double shape, double window);

// Parses a JSON configuration document. Unknown keys, malformed values and
// invariant violations raise ConfigError with line or key-path context.
RunConfig parse_config(const std::string& text);

}  // namespace basket
