#pragma once

#include <optional>
#include <vector>

#include "basket/trial.hpp"

namespace basket {

// Which baskets are truly futile. Derived from the scenario alone: a basket
// is null-true when its true window response rate is <= phi (exactly phi,
// e.g. a 30% basket, counts as null-true).
struct TruthLabels {
    std::vector<bool> null_true;

    static TruthLabels from_scenario(const ScenarioSpec& scn);
};

// The seven operating characteristics over a set of replicates, with
// binomial Monte Carlo standard errors for every proportion.
struct OCReport {
    std::vector<double> pet;             // per basket
    std::vector<double> pet_se;
    std::vector<double> ess;             // per basket
    double etd = 0.0;
    double ecd = 0.0;
    double trialwise_alpha = 0.0;
    double trialwise_alpha_se = 0.0;
    std::vector<std::optional<double>> basketwise_alpha;  // null-true baskets only
    std::vector<std::optional<double>> basketwise_power;  // null-false baskets only
    std::vector<double> rejection_se;                     // SE of the rejection proportion
    long replicates = 0;
    long failures = 0;

    // Throw unless the basket carries the requested characteristic.
    double alpha_for(int basket) const;
    double power_for(int basket) const;
};

// Single pass over replicate results.
OCReport aggregate(const std::vector<TrialResult>& results, const TruthLabels& truth);

}  // namespace basket
