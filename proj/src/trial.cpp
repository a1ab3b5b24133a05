#include "basket/trial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "basket/errors.hpp"

namespace basket {

namespace {

struct InterimEvent {
    double time;
    int basket;
    int interim_index;
    int trigger_count;
};

// Smallest representable time at which a patient arriving at `arrival` has
// follow-up of at least `window`; arrival + window alone can round below it.
double completion_time(double arrival, double window) {
    double t = arrival + window;
    while (t - arrival < window) {
        t = std::nextafter(t, std::numeric_limits<double>::infinity());
    }
    return t;
}

}  // namespace

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::NI: return "NI";
        case Strategy::OD: return "OD";
        case Strategy::CD: return "CD";
        case Strategy::MI: return "MI";
        case Strategy::MIC: return "MIC";
    }
    throw std::invalid_argument("unknown strategy");
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "NI") return Strategy::NI;
    if (name == "OD") return Strategy::OD;
    if (name == "CD") return Strategy::CD;
    if (name == "MI") return Strategy::MI;
    if (name == "MIC") return Strategy::MIC;
    throw ConfigError("unknown strategy '" + name + "' (expected NI, OD, CD, MI or MIC)");
}

void ScenarioSpec::validate() const {
    if (baskets < 2) throw std::invalid_argument("a basket trial needs at least 2 baskets");
    if (true_scales.size() != static_cast<std::size_t>(baskets)) {
        throw std::invalid_argument("need one true scale per basket");
    }
    WeibullParams{true_shape, 1.0}.validate();
    for (double s : true_scales) WeibullParams{true_shape, s}.validate();
    if (!(window > 0.0)) throw std::invalid_argument("response window must be positive");
    if (!(accrual_rate > 0.0)) throw std::invalid_argument("accrual rate must be positive");
    if (basket_size <= 0) throw std::invalid_argument("basket size must be positive");
    if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("phi must lie in (0,1)");
}

double ScenarioSpec::true_rate(int basket) const {
    return weibull_cdf(window, WeibullParams{true_shape, true_scales.at(
                                                 static_cast<std::size_t>(basket))});
}

void DesignSpec::validate(int basket_size) const {
    prior.validate();
    borrow.validate();
    if (!(gamma_interim > 0.0 && gamma_interim <= 1.0)) {
        throw std::invalid_argument("gamma_interim must lie in (0,1]");
    }
    if (!(gamma_final > 0.0 && gamma_final <= 1.0)) {
        throw std::invalid_argument("gamma_final must lie in (0,1]");
    }
    if (interim_counts.empty()) throw std::invalid_argument("need at least one interim trigger");
    int prev = 0;
    for (int c : interim_counts) {
        if (c <= prev) throw std::invalid_argument("interim triggers must be strictly increasing");
        if (c >= basket_size) {
            throw std::invalid_argument("interim triggers must stay below the basket size");
        }
        prev = c;
    }
    if (strategy == Strategy::MI || strategy == Strategy::MIC) mcmc.validate();
}

std::vector<int> interim_schedule(int basket_size, int num_interims) {
    if (basket_size < 2) throw ConfigError("basket size too small for an interim schedule");
    if (num_interims != 1 && num_interims != 3) {
        throw ConfigError("interim schedules support 1 or 3 looks, got " +
                          std::to_string(num_interims));
    }
    const int half = basket_size / 2;
    if (num_interims == 1) return {half};
    const int step = std::max(1, basket_size / 6);
    const std::vector<int> out{half, half + step, half + 2 * step};
    if (out.back() >= basket_size) {
        throw ConfigError("three-look schedule does not fit into basket size " +
                          std::to_string(basket_size));
    }
    return out;
}

std::vector<PatientRecord> generate_basket_data(const ScenarioSpec& scn, const TrialRng& rng) {
    scn.validate();
    std::vector<PatientRecord> out;
    out.reserve(static_cast<std::size_t>(scn.baskets) * static_cast<std::size_t>(scn.basket_size));
    for (int b = 0; b < scn.baskets; ++b) {
        RngStream stream = rng.patient_stream(b);
        const WeibullParams latent{scn.true_shape, scn.true_scales[static_cast<std::size_t>(b)]};
        double clock = 0.0;
        for (int i = 0; i < scn.basket_size; ++i) {
            clock += stream.exponential(scn.accrual_rate);
            out.push_back(PatientRecord{b, clock, weibull_sample(latent, stream.uniform())});
        }
    }
    return out;
}

std::vector<FollowUpRecord> snapshot_at(double time, const std::vector<PatientRecord>& patients,
                                        double window) {
    if (!(time >= 0.0)) throw std::domain_error("snapshot time must be >= 0");
    std::vector<FollowUpRecord> out;
    out.reserve(patients.size());
    for (const PatientRecord& p : patients) {
        if (p.arrival > time) continue;
        const double follow_up = std::min(time - p.arrival, window);
        FollowUpRecord rec;
        rec.basket = p.basket;
        if (p.latent_response_time <= follow_up) {
            rec.x = p.latent_response_time;
            rec.delta = true;
        } else if (follow_up < window) {
            rec.x = follow_up;
            rec.missing = true;
        } else {
            rec.x = window;
        }
        out.push_back(rec);
    }
    return out;
}

std::vector<BasketCounts> effective_counts(const std::vector<FollowUpRecord>& snapshot,
                                           Strategy strategy, int num_baskets) {
    if (strategy != Strategy::NI && strategy != Strategy::OD) {
        throw std::invalid_argument("effective_counts is defined for NI and OD only");
    }
    std::vector<BasketCounts> counts(static_cast<std::size_t>(num_baskets));
    for (const FollowUpRecord& rec : snapshot) {
        if (rec.basket >= num_baskets) {
            throw std::invalid_argument("record basket index beyond num_baskets");
        }
        BasketCounts& c = counts[static_cast<std::size_t>(rec.basket)];
        if (strategy == Strategy::NI) {
            ++c.evaluated;  // missing records count as enrolled non-responders
        } else if (!rec.missing) {
            ++c.evaluated;
        }
        if (rec.delta) ++c.responders;
    }
    return counts;
}

TrialResult run_trial(const ScenarioSpec& scn, const DesignSpec& design, const TrialRng& rng,
                      const TrialObserver& observer) {
    scn.validate();
    design.validate(scn.basket_size);

    const int B = scn.baskets;
    const int n = scn.basket_size;
    const double T = scn.window;
    const Strategy strat = design.strategy;
    const bool is_cd = strat == Strategy::CD;
    const bool is_mi = strat == Strategy::MI || strat == Strategy::MIC;

    TrialRng keyed = rng;
    keyed.strategy = static_cast<std::uint64_t>(strat) + 1;

    const std::vector<PatientRecord> raw = generate_basket_data(scn, keyed);

    // Working arrival times. Under CD every trigger a basket passes pauses
    // its own accrual for T months, which shifts all of its later arrivals
    // by exactly T; other baskets are unaffected.
    std::vector<std::vector<PatientRecord>> patients(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b) {
        auto& list = patients[static_cast<std::size_t>(b)];
        list.assign(raw.begin() + static_cast<std::ptrdiff_t>(b) * n,
                    raw.begin() + static_cast<std::ptrdiff_t>(b + 1) * n);
        if (is_cd) {
            std::size_t trigger_idx = 0;
            double shift = 0.0;
            for (int i = 0; i < n; ++i) {
                if (trigger_idx < design.interim_counts.size() &&
                    i >= design.interim_counts[trigger_idx]) {
                    shift += T;
                    ++trigger_idx;
                }
                list[static_cast<std::size_t>(i)].arrival += shift;
            }
        }
    }

    std::vector<InterimEvent> events;
    for (int b = 0; b < B; ++b) {
        for (std::size_t k = 0; k < design.interim_counts.size(); ++k) {
            const int count = design.interim_counts[k];
            const double arrival =
                patients[static_cast<std::size_t>(b)][static_cast<std::size_t>(count - 1)].arrival;
            events.push_back(InterimEvent{is_cd ? completion_time(arrival, T) : arrival, b,
                                          static_cast<int>(k), count});
        }
    }
    std::sort(events.begin(), events.end(), [](const InterimEvent& a, const InterimEvent& b) {
        return a.time != b.time ? a.time < b.time : a.basket < b.basket;
    });

    TrialResult result;
    result.baskets.assign(static_cast<std::size_t>(B), BasketResult{});
    for (auto& br : result.baskets) br.enrolled = n;
    double last_analysis_time = 0.0;

    const auto enrolled_patients = [&](double time) {
        std::vector<PatientRecord> pool;
        for (int b = 0; b < B; ++b) {
            const auto& list = patients[static_cast<std::size_t>(b)];
            const int limit = result.baskets[static_cast<std::size_t>(b)].enrolled;
            for (int i = 0; i < limit; ++i) {
                if (list[static_cast<std::size_t>(i)].arrival <= time) {
                    pool.push_back(list[static_cast<std::size_t>(i)]);
                }
            }
        }
        return pool;
    };

    for (const InterimEvent& ev : events) {
        BasketResult& target = result.baskets[static_cast<std::size_t>(ev.basket)];
        if (target.stopped_early) continue;

        std::vector<FollowUpRecord> snapshot = snapshot_at(ev.time, enrolled_patients(ev.time), T);

        double futility = 0.0;
        AnalysisEvent trace;
        trace.kind = AnalysisEvent::Kind::Interim;
        trace.basket = ev.basket;
        trace.interim_index = ev.interim_index;
        trace.time = ev.time;

        if (is_mi) {
            RngStream stream = keyed.analysis_stream(ev.basket, ev.interim_index);
            const ImputationModelKind kind = strat == Strategy::MI
                                                 ? ImputationModelKind::Shared
                                                 : ImputationModelKind::BasketCovariate;
            futility = mi_futility(snapshot, kind, B, design.prior, design.borrow, design.mcmc,
                                   scn.phi, ev.basket, T, stream);
            if (observer) trace.analyzed = snapshot;
        } else {
            if (is_cd) {
                // The pause guarantees complete follow-up for the triggering
                // basket; other baskets contribute their complete records.
                std::erase_if(snapshot, [](const FollowUpRecord& r) { return r.missing; });
            }
            const std::vector<BasketCounts> counts =
                effective_counts(snapshot, is_cd ? Strategy::OD : strat, B);
            const std::vector<BetaParams> posts = basket_posteriors(design.prior, counts);
            const WeightMatrix w = borrow_weights(posts, design.borrow);
            const BetaParams pooled =
                pooled_posterior(static_cast<std::size_t>(ev.basket), w, design.prior, counts);
            futility = futility_probability(pooled, scn.phi);
            if (observer) {
                trace.analyzed = std::move(snapshot);
                trace.counts = counts;
            }
        }

        last_analysis_time = std::max(last_analysis_time, ev.time);
        const bool stop = futility > design.gamma_interim;
        if (stop) {
            target.stopped_early = true;
            target.stop_interim = ev.interim_index;
            target.enrolled = ev.trigger_count;
        }
        if (observer) {
            trace.probability = futility;
            trace.triggered = stop;
            observer(trace);
        }
    }

    // Final analysis: every surviving basket is decided on end-of-trial
    // complete data; stopped baskets contribute their frozen enrolled set
    // with matured responses. Inputs are therefore identical across
    // strategies whenever the stopping patterns agree.
    std::vector<BasketCounts> final_counts(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b) {
        BasketCounts& c = final_counts[static_cast<std::size_t>(b)];
        const auto& list = patients[static_cast<std::size_t>(b)];
        c.evaluated = result.baskets[static_cast<std::size_t>(b)].enrolled;
        for (int i = 0; i < c.evaluated; ++i) {
            if (list[static_cast<std::size_t>(i)].latent_response_time <= T) ++c.responders;
        }
    }
    const std::vector<BetaParams> final_posts = basket_posteriors(design.prior, final_counts);
    const WeightMatrix final_w = borrow_weights(final_posts, design.borrow);

    double duration = last_analysis_time;
    for (int b = 0; b < B; ++b) {
        BasketResult& br = result.baskets[static_cast<std::size_t>(b)];
        if (br.stopped_early) continue;
        const double completion =
            patients[static_cast<std::size_t>(b)][static_cast<std::size_t>(n - 1)].arrival + T;
        const BetaParams pooled =
            pooled_posterior(static_cast<std::size_t>(b), final_w, design.prior, final_counts);
        const double efficacy = efficacy_probability(pooled, scn.phi);
        br.final_reject = efficacy > design.gamma_final;
        duration = std::max(duration, completion);
        if (observer) {
            AnalysisEvent trace;
            trace.kind = AnalysisEvent::Kind::Final;
            trace.basket = b;
            trace.time = completion;
            trace.counts = final_counts;
            trace.probability = efficacy;
            trace.triggered = br.final_reject;
            observer(trace);
        }
    }
    result.duration = duration;
    return result;
}

}  // namespace basket
