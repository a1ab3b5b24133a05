#include "basket/survival.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "basket/errors.hpp"

namespace basket {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kKappaMax = 10.0;
constexpr double kPriorSd = 10.0;  // Normal(0, 100) read as variance 100

double normal_log_pdf(double x, double sd) {
    const double z = x / sd;
    return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * M_PI);
}

// Per-record precomputation for the sampler's inner loop: only log(x), the
// basket index and the event flag enter the likelihood.
struct CompactRecord {
    double log_x;
    int basket;
    bool event;
};

std::vector<CompactRecord> compact(const std::vector<FollowUpRecord>& data) {
    std::vector<CompactRecord> out;
    out.reserve(data.size());
    for (const FollowUpRecord& rec : data) {
        if (rec.x == 0.0 && !rec.delta) continue;  // log S(0) = 0, no contribution
        out.push_back(CompactRecord{std::log(rec.x), rec.basket, rec.delta});
    }
    return out;
}

double fast_log_likelihood(const std::vector<CompactRecord>& data, double kappa,
                           const std::vector<double>& log_scale) {
    double total = 0.0;
    const double log_kappa = std::log(kappa);
    for (const CompactRecord& rec : data) {
        const double ls = log_scale[static_cast<std::size_t>(rec.basket)];
        const double lz = rec.log_x - ls;
        const double pow_term = std::exp(kappa * lz);
        total -= pow_term;
        if (rec.event) total += log_kappa - ls + (kappa - 1.0) * lz;
    }
    return total;
}

}  // namespace

void FollowUpRecord::validate(double window) const {
    if (basket < 0) throw std::invalid_argument("record basket index must be >= 0");
    if (!(x >= 0.0 && x <= window)) {
        throw std::invalid_argument("record x must lie in [0, window], got " + std::to_string(x));
    }
    if (delta && missing) {
        throw std::invalid_argument("a responder cannot be missing");
    }
    if (!delta && !missing && x < window) {
        throw std::invalid_argument("non-responder with x < window must be flagged missing");
    }
    if (missing && x >= window) {
        throw std::invalid_argument("record with complete follow-up cannot be missing");
    }
}

double RegressionDraw::scale_for(int basket) const {
    if (basket < 0) throw std::invalid_argument("basket index must be >= 0");
    double log_scale = beta0;
    // Empty betas means the shared model: one scale for every basket.
    if (!betas.empty() && basket > 0) {
        if (static_cast<std::size_t>(basket) > betas.size()) {
            throw std::invalid_argument("basket index beyond regression coefficients");
        }
        log_scale += betas[static_cast<std::size_t>(basket) - 1];
    }
    return std::exp(log_scale);
}

void McmcConfig::validate() const {
    if (burn_in <= 0 || thin <= 0 || draws <= 0) {
        throw std::invalid_argument("MCMC burn-in, thinning and draw count must be positive");
    }
    if (!(initial_step > 0.0)) {
        throw std::invalid_argument("MCMC initial step must be positive");
    }
}

double censored_log_likelihood(const std::vector<FollowUpRecord>& data,
                               const RegressionDraw& draw, double window) {
    const double kappa = draw.kappa;
    double total = 0.0;
    for (const FollowUpRecord& rec : data) {
        rec.validate(window);
        if (!draw.betas.empty() &&
            static_cast<std::size_t>(rec.basket) > draw.betas.size()) {
            throw std::invalid_argument("record basket index beyond model dimension");
        }
        const double ls = (draw.betas.empty() || rec.basket == 0)
                              ? draw.beta0
                              : draw.beta0 + draw.betas[static_cast<std::size_t>(rec.basket) - 1];
        if (rec.delta) {
            // log f(x) = log k - log s + (k-1)(log x - log s) - (x/s)^k
            const double lz = std::log(rec.x) - ls;
            total += std::log(kappa) - ls + (kappa - 1.0) * lz - std::exp(kappa * lz);
        } else if (rec.x > 0.0) {
            total -= std::exp(kappa * (std::log(rec.x) - ls));
        }
        // x == 0 contributes log S(0) = 0
    }
    return std::isfinite(total) ? total : kNegInf;
}

double log_posterior(const RegressionDraw& draw, const std::vector<FollowUpRecord>& data,
                     double window) {
    if (!(draw.kappa > 0.0 && draw.kappa < kKappaMax)) return kNegInf;
    double lp = -std::log(kKappaMax);  // Uniform(0,10) density
    lp += normal_log_pdf(draw.beta0, kPriorSd);
    for (double b : draw.betas) lp += normal_log_pdf(b, kPriorSd);
    const double ll = censored_log_likelihood(data, draw, window);
    return std::isfinite(ll) ? lp + ll : kNegInf;
}

std::vector<RegressionDraw> mcmc_fit(const std::vector<FollowUpRecord>& data,
                                     ImputationModelKind kind, int num_baskets,
                                     const McmcConfig& cfg, RngStream& rng,
                                     McmcDiagnostics* diag) {
    cfg.validate();
    if (num_baskets < 1) throw std::invalid_argument("mcmc_fit needs at least one basket");
    if (kind == ImputationModelKind::BasketCovariate && num_baskets < 2) {
        throw std::invalid_argument("basket-covariate model needs at least two baskets");
    }
    for (const FollowUpRecord& rec : data) {
        if (rec.basket >= num_baskets) {
            throw std::invalid_argument("record basket index beyond num_baskets");
        }
    }
    const std::size_t num_coefs =
        (kind == ImputationModelKind::Shared) ? 0 : static_cast<std::size_t>(num_baskets) - 1;
    const std::size_t dim = 2 + num_coefs;  // (log kappa, beta0, betas...)
    const std::vector<CompactRecord> records = compact(data);

    // State lives on the log-kappa scale; the flat kappa prior picks up a
    // +log(kappa) Jacobian there, and proposals outside (0,10) are rejected
    // through the -inf posterior.
    std::vector<double> state(dim, 0.0);
    state[0] = std::log(2.0);
    std::vector<double> log_step(dim, std::log(cfg.initial_step));
    std::vector<double> log_scale(static_cast<std::size_t>(num_baskets), 0.0);

    const auto eval = [&](const std::vector<double>& s) {
        const double kappa = std::exp(s[0]);
        if (!(kappa > 0.0 && kappa < kKappaMax)) return kNegInf;
        double lp = s[0] - std::log(kKappaMax);  // Jacobian + flat prior
        lp += normal_log_pdf(s[1], kPriorSd);
        for (std::size_t c = 2; c < s.size(); ++c) lp += normal_log_pdf(s[c], kPriorSd);
        for (std::size_t b = 0; b < log_scale.size(); ++b) {
            log_scale[b] = s[1] + ((b >= 1 && num_coefs > 0) ? s[1 + b] : 0.0);
        }
        const double ll = fast_log_likelihood(records, kappa, log_scale);
        return std::isfinite(ll) ? lp + ll : kNegInf;
    };

    double current_lp = eval(state);
    if (!std::isfinite(current_lp)) {
        throw NumericalError("mcmc_fit: initial state has zero posterior density");
    }

    std::vector<long> accept_count(dim, 0);
    std::vector<long> propose_count(dim, 0);
    std::vector<long> batch_accept(dim, 0);
    constexpr int batch_size = 50;
    int batch_index = 0;

    const auto sweep = [&](bool adapting) {
        for (std::size_t c = 0; c < dim; ++c) {
            const double old = state[c];
            state[c] = old + std::exp(log_step[c]) * rng.normal();
            const double prop_lp = eval(state);
            const bool accepted =
                std::isfinite(prop_lp) && (std::log(rng.uniform()) < prop_lp - current_lp);
            if (accepted) {
                current_lp = prop_lp;
            } else {
                state[c] = old;
            }
            if (adapting) {
                batch_accept[c] += accepted ? 1 : 0;
            } else {
                accept_count[c] += accepted ? 1 : 0;
                ++propose_count[c];
            }
        }
    };

    for (int it = 0; it < cfg.burn_in; ++it) {
        sweep(true);
        if ((it + 1) % batch_size == 0) {
            ++batch_index;
            const double delta = std::min(0.1, 1.0 / std::sqrt(static_cast<double>(batch_index)));
            for (std::size_t c = 0; c < dim; ++c) {
                const double rate = static_cast<double>(batch_accept[c]) / batch_size;
                log_step[c] += (rate > cfg.target_acceptance) ? delta : -delta;
                batch_accept[c] = 0;
            }
        }
    }

    std::vector<RegressionDraw> draws;
    draws.reserve(static_cast<std::size_t>(cfg.draws));
    for (int j = 0; j < cfg.draws; ++j) {
        for (int t = 0; t < cfg.thin; ++t) sweep(false);
        RegressionDraw d;
        d.kappa = std::exp(state[0]);
        d.beta0 = state[1];
        d.betas.assign(state.begin() + 2, state.end());
        draws.push_back(std::move(d));
    }

    if (diag != nullptr) {
        diag->acceptance.clear();
        diag->warnings.clear();
        for (std::size_t c = 0; c < dim; ++c) {
            const double rate =
                static_cast<double>(accept_count[c]) / static_cast<double>(propose_count[c]);
            diag->acceptance.push_back(rate);
            if (rate < 0.05 || rate > 0.95) {
                diag->warnings.push_back("coordinate " + std::to_string(c) + " acceptance rate " +
                                         std::to_string(rate) + " outside [0.05, 0.95]");
            }
        }
    }
    return draws;
}

double conditional_response_prob(double x, double window, const WeibullParams& w) {
    if (!(x >= 0.0 && x < window)) {
        throw std::domain_error("conditional_response_prob requires 0 <= x < window");
    }
    const double ft = weibull_cdf(window, w);
    if (x == 0.0) return ft;
    const double fx = weibull_cdf(x, w);
    if (fx >= 1.0) return 0.0;
    const double omega = (ft - fx) / (1.0 - fx);
    return std::clamp(omega, 0.0, 1.0);
}

std::vector<BasketCounts> impute_responses(const RegressionDraw& draw,
                                           const std::vector<FollowUpRecord>& snapshot,
                                           int num_baskets, double window, RngStream& rng) {
    if (num_baskets < 1) throw std::invalid_argument("impute_responses needs baskets >= 1");
    std::vector<BasketCounts> counts(static_cast<std::size_t>(num_baskets));
    for (const FollowUpRecord& rec : snapshot) {
        if (rec.basket >= num_baskets) {
            throw std::invalid_argument("record basket index beyond num_baskets");
        }
        BasketCounts& c = counts[static_cast<std::size_t>(rec.basket)];
        ++c.evaluated;
        if (rec.delta) {
            ++c.responders;
        } else if (rec.missing) {
            const WeibullParams w{draw.kappa, draw.scale_for(rec.basket)};
            if (rng.bernoulli(conditional_response_prob(rec.x, window, w))) ++c.responders;
        }
    }
    return counts;
}

double mi_futility_given_draws(const std::vector<RegressionDraw>& draws,
                               const std::vector<FollowUpRecord>& snapshot, int num_baskets,
                               const PriorSpec& prior, const BorrowConfig& cfg_borrow,
                               double phi, int target_basket, double window, RngStream& rng) {
    if (draws.empty()) throw std::invalid_argument("mi_futility needs at least one draw");
    if (target_basket < 0 || target_basket >= num_baskets) {
        throw std::invalid_argument("target basket out of range");
    }
    // The pooled futility value is a deterministic function of the imputed
    // responder counts, which repeat across draws; memoize per call.
    std::map<std::vector<int>, double> memo;
    double total = 0.0;
    for (const RegressionDraw& draw : draws) {
        const std::vector<BasketCounts> counts =
            impute_responses(draw, snapshot, num_baskets, window, rng);
        std::vector<int> key(counts.size());
        for (std::size_t b = 0; b < counts.size(); ++b) key[b] = counts[b].responders;
        auto it = memo.find(key);
        if (it == memo.end()) {
            const std::vector<BetaParams> posts = basket_posteriors(prior, counts);
            const WeightMatrix w = borrow_weights(posts, cfg_borrow);
            const BetaParams pooled =
                pooled_posterior(static_cast<std::size_t>(target_basket), w, prior, counts);
            it = memo.emplace(std::move(key), futility_probability(pooled, phi)).first;
        }
        total += it->second;
    }
    // All imputations identical (e.g. nothing missing): the average is that
    // value, without accumulation roundoff.
    if (memo.size() == 1) return memo.begin()->second;
    return total / static_cast<double>(draws.size());
}

double mi_futility(const std::vector<FollowUpRecord>& snapshot, ImputationModelKind kind,
                   int num_baskets, const PriorSpec& prior, const BorrowConfig& cfg_borrow,
                   const McmcConfig& cfg_mcmc, double phi, int target_basket, double window,
                   RngStream& rng, McmcDiagnostics* diag) {
    for (const FollowUpRecord& rec : snapshot) rec.validate(window);
    const std::vector<RegressionDraw> draws =
        mcmc_fit(snapshot, kind, num_baskets, cfg_mcmc, rng, diag);
    return mi_futility_given_draws(draws, snapshot, num_baskets, prior, cfg_borrow, phi,
                                   target_basket, window, rng);
}

}  // namespace basket
