#pragma once

// Test-only reference implementations, deliberately independent of the
// library's numerical paths: plain/power-transformed quadrature instead of
// the continued fraction, Marsaglia-Tsang sampling instead of closed forms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline double log_beta_fn(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

inline double beta_density(double x, double a, double b, double log_beta) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta);
}

// Integrates f over (0,1) after the substitutions x = t^power (left half)
// and 1-x = s^power (right half), which regularize x^(a-1) endpoint factors
// for all shapes >= 1/power. Midpoint rule with `cells` per half. The
// integrand receives stable (log x, log(1-x)) coordinates because points
// near 1 are not representable directly.
inline double integrate_unit_transformed(const std::function<double(double, double)>& f,
                                         std::size_t cells, double power = 10.0) {
    const double t_max = std::pow(0.5, 1.0 / power);
    double total = 0.0;
    const double h = t_max / static_cast<double>(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const double t = (static_cast<double>(i) + 0.5) * h;
        const double log_near = power * std::log(t);  // ln x resp. ln(1-x)
        const double log_far = std::log1p(-std::exp(log_near));
        const double jac = power * std::pow(t, power - 1.0);
        total += f(log_near, log_far) * jac * h;  // left piece, x = t^power
        total += f(log_far, log_near) * jac * h;  // right piece, 1-x = t^power
    }
    return total;
}

// Base-2 Jensen-Shannon divergence between two Beta densities by brute-force
// transformed quadrature; accurate to ~1e-8 for shapes >= 0.1 at the default
// resolution.
inline double jsd_beta_brute(double a1, double b1, double a2, double b2,
                             std::size_t cells = 16384) {
    const double lb1 = log_beta_fn(a1, b1);
    const double lb2 = log_beta_fn(a2, b2);
    const auto integrand = [&](double log_x, double log_1mx) {
        const double lp = (a1 - 1.0) * log_x + (b1 - 1.0) * log_1mx - lb1;
        const double lq = (a2 - 1.0) * log_x + (b2 - 1.0) * log_1mx - lb2;
        const double hi = std::max(lp, lq);
        const double log_sum = hi + std::log1p(std::exp(std::min(lp, lq) - hi));
        const double ln2 = std::log(2.0);
        return 0.5 * std::exp(lp) * (ln2 + lp - log_sum) +
               0.5 * std::exp(lq) * (ln2 + lq - log_sum);
    };
    return integrate_unit_transformed(integrand, cells) / std::log(2.0);
}

// Marsaglia-Tsang gamma variates (shape < 1 via the boost trick), then the
// two-gamma ratio for Beta draws.
class BetaSampler {
public:
    explicit BetaSampler(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        const std::uint64_t bits = gen_() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1p-53;
    }

    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double gamma(double shape) {
        if (shape < 1.0) {
            const double g = gamma(shape + 1.0);
            return g * std::pow(uniform(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            const double z = normal();
            const double v = std::pow(1.0 + c * z, 3);
            if (v <= 0.0) continue;
            const double u = uniform();
            if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

private:
    std::mt19937_64 gen_;
};

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe proportion(long hits, long n) {
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return MeanSe{p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

}  // namespace oracle
