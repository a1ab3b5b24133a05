#pragma once

#include <functional>
#include <string>
#include <vector>

#include "basket/borrowing.hpp"
#include "basket/rng.hpp"
#include "basket/survival.hpp"

namespace basket {

// Interim missing-data strategies: naive non-responder imputation, observed
// data only, complete data (pause accrual), multiple imputation with shared
// Weibull parameters, multiple imputation with basket covariates.
enum class Strategy { NI, OD, CD, MI, MIC };

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

// Data-generating truth for one simulated trial.
struct ScenarioSpec {
    int baskets = 2;
    double true_shape = 4.0;               // kappa, shared by all baskets
    std::vector<double> true_scales;       // sigma_b
    double window = 3.0;                   // response window T, months
    double accrual_rate = 0.5;             // lambda, patients/month per basket
    int basket_size = 24;                  // n_b
    double phi = 0.3;                      // null response rate

    void validate() const;
    // True 3-month-window response rate of basket b, F(T; kappa, sigma_b).
    double true_rate(int basket) const;
};

// Decision rules applied to a scenario.
struct DesignSpec {
    PriorSpec prior;
    BorrowConfig borrow;
    double gamma_interim = 0.95;
    double gamma_final = 0.975;
    std::vector<int> interim_counts;  // per-basket enrollment triggers
    Strategy strategy = Strategy::CD;
    McmcConfig mcmc;                  // used by MI/MIC only

    void validate(int basket_size) const;
};

// One simulated subject. The binary response is derived as
// [latent_response_time <= window], never stored.
struct PatientRecord {
    int basket = 0;
    double arrival = 0.0;
    double latent_response_time = 0.0;
};

struct BasketResult {
    bool stopped_early = false;
    int stop_interim = -1;  // index into interim_counts, -1 if none
    int enrolled = 0;
    bool final_reject = false;  // efficacy declared at the final analysis
};

struct TrialResult {
    std::vector<BasketResult> baskets;
    double duration = 0.0;  // calendar time of the last analysis performed
};

// Trace record handed to test observers after every analysis.
struct AnalysisEvent {
    enum class Kind { Interim, Final };
    Kind kind = Kind::Interim;
    int basket = 0;
    int interim_index = -1;
    double time = 0.0;
    // Records the decision consumed: the full snapshot for NI/OD/MI/MIC, the
    // complete-follow-up subset for CD.
    std::vector<FollowUpRecord> analyzed;
    // Effective counts fed into the conjugate update (empty for MI/MIC
    // interims, where imputation owns the counting).
    std::vector<BasketCounts> counts;
    double probability = 0.0;  // futility at interims, efficacy at the final
    bool triggered = false;    // stopped early / rejected
};
using TrialObserver = std::function<void(const AnalysisEvent&)>;

// Enrollment counts at which interim analyses happen: the halfway point, and
// for three looks every n_b/6 patients afterwards. Matches [12], [12,16,20],
// [18] and [18,24,30] for the 24/36-patient designs.
std::vector<int> interim_schedule(int basket_size, int num_interims);

// Poisson-process arrivals (cumulative Exponential(lambda) gaps) and latent
// Weibull response times for every basket; basket-major, exactly n_b records
// per basket. Uses one patient stream per basket so strategies share data.
std::vector<PatientRecord> generate_basket_data(const ScenarioSpec& scn, const TrialRng& rng);

// Follow-up state of every enrolled patient (arrival <= time) at an analysis:
// x = min(c, t) capped at the window, response and missingness flags.
std::vector<FollowUpRecord> snapshot_at(double time, const std::vector<PatientRecord>& patients,
                                        double window);

// Counts entering the conjugate update under NI (missing count as failures)
// or OD (missing dropped). Other strategies are a contract violation here.
std::vector<BasketCounts> effective_counts(const std::vector<FollowUpRecord>& snapshot,
                                           Strategy strategy, int num_baskets);

// Simulates one trial end to end: accrual, per-basket interim analyses with
// the strategy's missing-data handling, futility stopping, and the final
// efficacy decisions on complete data.
TrialResult run_trial(const ScenarioSpec& scn, const DesignSpec& design, const TrialRng& rng,
                      const TrialObserver& observer = nullptr);

}  // namespace basket
