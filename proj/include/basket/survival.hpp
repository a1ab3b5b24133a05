#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "basket/borrowing.hpp"
#include "basket/distributions.hpp"
#include "basket/rng.hpp"

namespace basket {

// Observed follow-up of one patient at an analysis time: x = min(c, t),
// delta = response indicator, m = missing-response indicator. A record is
// missing exactly when no response was seen and follow-up is shorter than
// the response window.
struct FollowUpRecord {
    int basket = 0;
    double x = 0.0;
    bool delta = false;
    bool missing = false;

    void validate(double window) const;
};

// Which Weibull regression backs the imputation: one shared scale for all
// baskets, or reference-coded basket dummies on log(scale).
enum class ImputationModelKind { Shared, BasketCovariate };

// One posterior draw of the imputation model. Basket 0 is the reference:
// scale_b = exp(beta0 + betas[b-1]) for b >= 1, exp(beta0) otherwise.
// `betas` is empty for the shared model.
struct RegressionDraw {
    double kappa = 1.0;
    double beta0 = 0.0;
    std::vector<double> betas;

    double scale_for(int basket) const;
};

struct McmcConfig {
    int burn_in = 10000;
    int thin = 70;
    int draws = 100;          // J
    double initial_step = 0.5;
    double target_acceptance = 0.35;

    void validate() const;

    static McmcConfig paper_profile() { return McmcConfig{}; }
    static McmcConfig fast_profile() {
        McmcConfig cfg;
        cfg.burn_in = 2000;
        cfg.thin = 20;
        cfg.draws = 50;
        return cfg;
    }
};

// Post-adaptation acceptance rates per coordinate plus any warnings.
struct McmcDiagnostics {
    std::vector<double> acceptance;
    std::vector<std::string> warnings;
};

// Sum over records of log f for responders and log S for everyone else
// (administratively censored and complete non-responders alike). Returns
// -infinity rather than throwing when a term overflows, so samplers can
// reject the proposal.
double censored_log_likelihood(const std::vector<FollowUpRecord>& data,
                               const RegressionDraw& draw, double window);

// Log likelihood plus Normal(0, sd 10) log priors on beta0 and each beta_k;
// the flat kappa prior contributes -log(10) inside (0,10) and -infinity
// outside.
double log_posterior(const RegressionDraw& draw, const std::vector<FollowUpRecord>& data,
                     double window);

// Adaptive random-walk Metropolis on (log kappa, beta0, betas), J draws after
// burn-in and thinning. Deterministic given the rng stream.
std::vector<RegressionDraw> mcmc_fit(const std::vector<FollowUpRecord>& data,
                                     ImputationModelKind kind, int num_baskets,
                                     const McmcConfig& cfg, RngStream& rng,
                                     McmcDiagnostics* diag = nullptr);

// omega = (F(T) - F(x)) / (1 - F(x)) for a patient censored at x < T.
double conditional_response_prob(double x, double window, const WeibullParams& w);

// Observed responders plus Bernoulli(omega) imputations for every missing
// record, per basket. Records with m=0 are never altered.
std::vector<BasketCounts> impute_responses(const RegressionDraw& draw,
                                           const std::vector<FollowUpRecord>& snapshot,
                                           int num_baskets, double window, RngStream& rng);

// Steps 2-6 of the imputation scheme for a given set of posterior draws:
// impute, rebuild no-sharing posteriors, recompute weights from the imputed
// counts, pool, and average P(theta_b < phi) over the draws.
double mi_futility_given_draws(const std::vector<RegressionDraw>& draws,
                               const std::vector<FollowUpRecord>& snapshot, int num_baskets,
                               const PriorSpec& prior, const BorrowConfig& cfg_borrow,
                               double phi, int target_basket, double window, RngStream& rng);

// Full pipeline: fit the imputation model on the snapshot, then average the
// pooled futility probability over J imputations.
double mi_futility(const std::vector<FollowUpRecord>& snapshot, ImputationModelKind kind,
                   int num_baskets, const PriorSpec& prior, const BorrowConfig& cfg_borrow,
                   const McmcConfig& cfg_mcmc, double phi, int target_basket, double window,
                   RngStream& rng, McmcDiagnostics* diag = nullptr);

}  // namespace basket
