#pragma once

#include <cstddef>

namespace basket {

// Shape pair of a Beta distribution. Holds priors and posteriors of the
// per-basket response rates.
struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;

    // Throws std::invalid_argument unless both shapes are finite and > 0.
    void validate() const;
};

// Weibull time-to-response parameters. The shape support (0,10] mirrors the
// Uniform(0,10) prior used by the imputation model.
struct WeibullParams {
    double shape = 1.0;  // kappa
    double scale = 1.0;  // sigma

    void validate() const;
};

// Regularized incomplete beta I_x(a,b) = P(theta <= x) for theta ~ Beta(p).
// Continued-fraction evaluation, absolute tolerance 1e-12.
double beta_cdf(double x, const BetaParams& p);

// Log density of Beta(p) at x in (0,1).
double beta_log_pdf(double x, const BetaParams& p);

// Jensen-Shannon divergence between two Beta densities, log base 2, so the
// value lies in [0, 1]. Quadrature runs on a graded mesh (power-clustered
// cells near both endpoints, uniform in between) with exact per-cell
// probability masses (beta_cdf differences) times the log-ratio at cell
// centers, which stays accurate when a shape < 1 concentrates mass against
// an endpoint. Symmetric; exactly 0 for identical parameters. Throws
// NumericalError if the half-resolution estimate disagrees beyond the
// convergence guard.
double jsd_beta(const BetaParams& p, const BetaParams& q, std::size_t cells = 4096);

// F(t) = 1 - exp(-(t/sigma)^kappa) for t >= 0.
double weibull_cdf(double t, const WeibullParams& w);

// Inverse-transform sample: sigma * (-ln(1-u))^(1/kappa), u in (0,1).
double weibull_sample(const WeibullParams& w, double u);

// log f(t), t > 0.
double weibull_log_pdf(double t, const WeibullParams& w);

// log S(t) = -(t/sigma)^kappa, t >= 0.
double weibull_log_survival(double t, const WeibullParams& w);

}  // namespace basket
