#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace basket {

// splitmix64 finalizer; used to derive well-mixed seeds from structured keys.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// One reproducible random stream. All sampling in the library goes through
// this wrapper so results do not depend on standard-library distribution
// internals; mt19937_64 supplies the raw bits.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(seed) {}

    // Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform() {
        const std::uint64_t bits = gen_() >> 11;  // top 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Inverse-transform exponential with the given rate.
    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Box-Muller without spare caching; costs one extra uniform per draw but
    // keeps the stream state a pure function of the draw count.
    double normal(double mean = 0.0, double sd = 1.0) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sd * r * std::cos(6.283185307179586476925287 * u2);
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

namespace detail {
inline std::uint64_t fold_key(std::uint64_t h, std::uint64_t k) noexcept {
    return splitmix64(h ^ splitmix64(k));
}
inline std::uint64_t derive_seed(std::uint64_t h) noexcept { return h; }
template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t h, std::uint64_t k, Rest... rest) noexcept {
    return derive_seed(fold_key(h, k), rest...);
}
}  // namespace detail

// Derives an independent substream from a master seed and a structured key
// path, e.g. make_stream(master, kPatients, scenario, replicate, basket).
template <typename... Keys>
RngStream make_stream(std::uint64_t master, Keys... keys) {
    return RngStream(detail::derive_seed(splitmix64(master), static_cast<std::uint64_t>(keys)...));
}

// Stream purposes; part of the key path so streams never collide.
enum class StreamKind : std::uint64_t {
    Patients = 1,  // accrual gaps and latent response times (shared across strategies)
    Analysis = 2,  // MCMC + imputation draws at an interim (strategy-specific)
};

// Key context for one simulated trial replicate. Patient streams deliberately
// exclude the strategy key so that strategies are compared on common random
// numbers; analysis streams include it.
struct TrialRng {
    std::uint64_t master = 0;
    std::uint64_t scenario = 0;
    std::uint64_t replicate = 0;
    std::uint64_t strategy = 0;

    RngStream patient_stream(int basket) const {
        return make_stream(master, static_cast<std::uint64_t>(StreamKind::Patients), scenario,
                           replicate, static_cast<std::uint64_t>(basket));
    }
    RngStream analysis_stream(int basket, int interim_index) const {
        return make_stream(master, static_cast<std::uint64_t>(StreamKind::Analysis), scenario,
                           strategy, replicate, static_cast<std::uint64_t>(basket),
                           static_cast<std::uint64_t>(interim_index));
    }
};

}  // namespace basket
