#pragma once

#include <cstddef>
#include <vector>

#include "basket/distributions.hpp"

namespace basket {

// Beta prior shared by every basket. The default (0.1, 0.2) follows the
// simulation setup; note its mean is 1/3, not the 0.30 null rate.
struct PriorSpec {
    double s1 = 0.1;
    double s2 = 0.2;

    void validate() const;
};

// Responders and contributing patients for one basket at one analysis.
struct BasketCounts {
    int responders = 0;
    int evaluated = 0;

    void validate() const;
};

// Tuning parameters of the similarity weights.
struct BorrowConfig {
    double epsilon = 2.0;  // power
    double tau = 0.0;      // threshold; entries at or below tau are zeroed

    void validate() const;
};

// Symmetric B x B matrix of borrowing weights with unit diagonal; entries are
// either 0 or greater than tau.
class WeightMatrix {
public:
    explicit WeightMatrix(std::size_t n) : n_(n), w_(n * n, 0.0) {
        for (std::size_t i = 0; i < n; ++i) w_[i * n + i] = 1.0;
    }

    std::size_t size() const { return n_; }
    double operator()(std::size_t b, std::size_t k) const { return w_[b * n_ + k]; }
    void set(std::size_t b, std::size_t k, double v) { w_[b * n_ + k] = v; }

private:
    std::size_t n_;
    std::vector<double> w_;
};

// Conjugate update without sharing: element b is
// Beta(s1 + r_b, s2 + n_b - r_b).
std::vector<BetaParams> basket_posteriors(const PriorSpec& prior,
                                          const std::vector<BasketCounts>& counts);

// w_bk = (1 - JSD)^epsilon when that exceeds tau, else 0; diagonal fixed at 1.
// JSD values are memoized per thread keyed on the (canonically ordered) shape
// pairs; posteriors recur heavily across replicates.
WeightMatrix borrow_weights(const std::vector<BetaParams>& posteriors, const BorrowConfig& cfg);

// Pooled posterior for basket b:
// Beta(sum_k w_bk (s1 + r_k), sum_k w_bk (s2 + n_k - r_k)).
BetaParams pooled_posterior(std::size_t b, const WeightMatrix& w, const PriorSpec& prior,
                            const std::vector<BasketCounts>& counts);

// P(theta < phi | post).
double futility_probability(const BetaParams& post, double phi);

// P(theta > phi | post) = 1 - futility_probability.
double efficacy_probability(const BetaParams& post, double phi);

}  // namespace basket
