#include "basket/oc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace basket {

namespace {

double binomial_se(double p, long n) {
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

TruthLabels TruthLabels::from_scenario(const ScenarioSpec& scn) {
    scn.validate();
    TruthLabels labels;
    labels.null_true.reserve(static_cast<std::size_t>(scn.baskets));
    for (int b = 0; b < scn.baskets; ++b) {
        // Tiny slack so a rate constructed to hit phi exactly does not land
        // on the wrong side through the sigma round trip.
        labels.null_true.push_back(scn.true_rate(b) <= scn.phi + 1e-9);
    }
    return labels;
}

double OCReport::alpha_for(int basket) const {
    const auto& v = basketwise_alpha.at(static_cast<std::size_t>(basket));
    if (!v.has_value()) {
        throw std::logic_error("basket " + std::to_string(basket) +
                               " is null-false; it has power, not a type I error");
    }
    return *v;
}

double OCReport::power_for(int basket) const {
    const auto& v = basketwise_power.at(static_cast<std::size_t>(basket));
    if (!v.has_value()) {
        throw std::logic_error("basket " + std::to_string(basket) +
                               " is null-true; it has a type I error, not power");
    }
    return *v;
}

OCReport aggregate(const std::vector<TrialResult>& results, const TruthLabels& truth) {
    if (results.empty()) throw std::invalid_argument("aggregate needs at least one result");
    const std::size_t B = truth.null_true.size();
    const long n = static_cast<long>(results.size());

    std::vector<long> stops(B, 0);
    std::vector<long> rejects(B, 0);
    std::vector<double> enrolled_sum(B, 0.0);
    double duration_sum = 0.0;
    double correct_sum = 0.0;
    long trialwise_hits = 0;

    for (const TrialResult& r : results) {
        if (r.baskets.size() != B) {
            throw std::invalid_argument("replicate basket count does not match truth labels");
        }
        bool any_false_rejection = false;
        for (std::size_t b = 0; b < B; ++b) {
            const BasketResult& br = r.baskets[b];
            if (br.stopped_early && br.final_reject) {
                throw std::invalid_argument("stopped basket cannot carry a final rejection");
            }
            stops[b] += br.stopped_early ? 1 : 0;
            rejects[b] += br.final_reject ? 1 : 0;
            enrolled_sum[b] += br.enrolled;
            const bool correct = truth.null_true[b] ? !br.final_reject : br.final_reject;
            correct_sum += correct ? 1.0 : 0.0;
            if (truth.null_true[b] && br.final_reject) any_false_rejection = true;
        }
        duration_sum += r.duration;
        trialwise_hits += any_false_rejection ? 1 : 0;
    }

    OCReport rep;
    rep.replicates = n;
    for (std::size_t b = 0; b < B; ++b) {
        const double pet = static_cast<double>(stops[b]) / static_cast<double>(n);
        const double rej = static_cast<double>(rejects[b]) / static_cast<double>(n);
        rep.pet.push_back(pet);
        rep.pet_se.push_back(binomial_se(pet, n));
        rep.ess.push_back(enrolled_sum[b] / static_cast<double>(n));
        rep.rejection_se.push_back(binomial_se(rej, n));
        if (truth.null_true[b]) {
            rep.basketwise_alpha.emplace_back(rej);
            rep.basketwise_power.emplace_back(std::nullopt);
        } else {
            rep.basketwise_alpha.emplace_back(std::nullopt);
            rep.basketwise_power.emplace_back(rej);
        }
    }
    rep.etd = duration_sum / static_cast<double>(n);
    rep.ecd = correct_sum / static_cast<double>(n);
    rep.trialwise_alpha = static_cast<double>(trialwise_hits) / static_cast<double>(n);
    rep.trialwise_alpha_se = binomial_se(rep.trialwise_alpha, n);
    return rep;
}

}  // namespace basket
