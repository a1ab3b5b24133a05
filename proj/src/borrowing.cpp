#include "basket/borrowing.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>

namespace basket {

namespace {

struct JsdKey {
    std::uint64_t a1, b1, a2, b2;
    bool operator==(const JsdKey&) const = default;
};

struct JsdKeyHash {
    std::size_t operator()(const JsdKey& k) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (std::uint64_t v : {k.a1, k.b1, k.a2, k.b2}) {
            h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

// jsd_beta is symmetric bit-for-bit, so pairs are cached in canonical order.
// The cache is per thread: no locks, and hits return the exact value a fresh
// computation would, keeping results independent of scheduling.
double jsd_cached(const BetaParams& p, const BetaParams& q) {
    thread_local std::unordered_map<JsdKey, double, JsdKeyHash> cache;
    const BetaParams* lo = &p;
    const BetaParams* hi = &q;
    if (std::tie(q.alpha, q.beta) < std::tie(p.alpha, p.beta)) std::swap(lo, hi);
    const JsdKey key{std::bit_cast<std::uint64_t>(lo->alpha), std::bit_cast<std::uint64_t>(lo->beta),
                     std::bit_cast<std::uint64_t>(hi->alpha), std::bit_cast<std::uint64_t>(hi->beta)};
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const double v = jsd_beta(*lo, *hi);
    if (cache.size() > 2'000'000) cache.clear();
    cache.emplace(key, v);
    return v;
}

}  // namespace

void PriorSpec::validate() const {
    if (!(std::isfinite(s1) && s1 > 0.0) || !(std::isfinite(s2) && s2 > 0.0)) {
        throw std::invalid_argument("prior shapes must be finite and positive");
    }
}

void BasketCounts::validate() const {
    if (responders < 0 || evaluated < 0 || responders > evaluated) {
        throw std::invalid_argument("need 0 <= responders <= evaluated, got " +
                                    std::to_string(responders) + "/" + std::to_string(evaluated));
    }
}

void BorrowConfig::validate() const {
    if (!(std::isfinite(epsilon) && epsilon >= 0.0)) {
        throw std::invalid_argument("epsilon must be finite and >= 0");
    }
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw std::invalid_argument("tau must lie in [0,1]");
    }
}

std::vector<BetaParams> basket_posteriors(const PriorSpec& prior,
                                          const std::vector<BasketCounts>& counts) {
    prior.validate();
    std::vector<BetaParams> out;
    out.reserve(counts.size());
    for (const BasketCounts& c : counts) {
        c.validate();
        out.push_back(BetaParams{prior.s1 + c.responders, prior.s2 + c.evaluated - c.responders});
    }
    return out;
}

WeightMatrix borrow_weights(const std::vector<BetaParams>& posteriors, const BorrowConfig& cfg) {
    cfg.validate();
    if (posteriors.empty()) {
        throw std::invalid_argument("borrow_weights needs at least one posterior");
    }
    const std::size_t n = posteriors.size();
    WeightMatrix w(n);
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t k = b + 1; k < n; ++k) {
            const double jsd = jsd_cached(posteriors[b], posteriors[k]);
            double v = std::pow(1.0 - jsd, cfg.epsilon);
            if (!(v > cfg.tau)) v = 0.0;
            w.set(b, k, v);
            w.set(k, b, v);
        }
    }
    return w;
}

BetaParams pooled_posterior(std::size_t b, const WeightMatrix& w, const PriorSpec& prior,
                            const std::vector<BasketCounts>& counts) {
    prior.validate();
    if (w.size() != counts.size() || b >= counts.size()) {
        throw std::invalid_argument("pooled_posterior: weight row inconsistent with counts");
    }
    double alpha = 0.0;
    double beta = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        counts[k].validate();
        const double wk = w(b, k);
        alpha += wk * (prior.s1 + counts[k].responders);
        beta += wk * (prior.s2 + counts[k].evaluated - counts[k].responders);
    }
    return BetaParams{alpha, beta};
}

double futility_probability(const BetaParams& post, double phi) {
    if (!(phi > 0.0 && phi < 1.0)) {
        throw std::domain_error("phi must lie in (0,1), got " + std::to_string(phi));
    }
    return beta_cdf(phi, post);
}

double efficacy_probability(const BetaParams& post, double phi) {
    return 1.0 - futility_probability(post, phi);
}

}  // namespace basket
