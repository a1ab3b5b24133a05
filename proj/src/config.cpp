#include "basket/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "basket/errors.hpp"

namespace basket {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw ConfigError(context + ": " + message);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& context) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) {
            fail(context + "." + key, "unknown key");
        }
    }
}

int line_of_offset(const std::string& text, std::size_t byte) {
    return 1 + static_cast<int>(std::count(text.begin(),
                                           text.begin() + static_cast<std::ptrdiff_t>(
                                                              std::min(byte, text.size())),
                                           '\n'));
}

}  // namespace

double scale_for_rate(double rate, double shape, double window) {
    if (!(rate > 0.0 && rate < 1.0)) {
        throw ConfigError("response rate must lie strictly between 0 and 1, got " +
                          std::to_string(rate));
    }
    WeibullParams{shape, 1.0}.validate();
    return window / std::pow(-std::log1p(-rate), 1.0 / shape);
}

void RunConfig::validate() const {
    if (baskets < 2) fail("baskets", "need at least 2");
    if (scenario_rates.empty()) fail("scenarios", "need at least one response-rate tuple");
    for (std::size_t i = 0; i < scenario_rates.size(); ++i) {
        const auto& tuple = scenario_rates[i];
        if (tuple.size() != static_cast<std::size_t>(baskets)) {
            fail("scenarios[" + std::to_string(i) + "]",
                 "tuple length must equal the basket count");
        }
        for (double r : tuple) {
            if (!(r > 0.0 && r < 100.0)) {
                fail("scenarios[" + std::to_string(i) + "]",
                     "rates are percentages in (0,100), got " + std::to_string(r));
            }
        }
    }
    if (sample_sizes.empty()) fail("sample_sizes", "need at least one");
    if (accrual_rates.empty()) fail("accrual_rates", "need at least one");
    if (interim_looks.empty()) fail("interim_looks", "need at least one");
    if (strategies.empty()) fail("strategies", "need at least one");
    if (replicates < 1) fail("replicates", "need at least one replicate");
    if (workers < 1) fail("workers", "need at least one worker");
    if (profile != "paper" && profile != "fast") fail("profile", "expected 'paper' or 'fast'");
    prior.validate();
    borrow.validate();
    mcmc.validate();
    if (!(phi > 0.0 && phi < 1.0)) fail("phi", "must lie in (0,1)");
    // Schedules and per-cell invariants are checked during expansion.
    for (int n : sample_sizes) {
        for (int looks : interim_looks) (void)interim_schedule(n, looks);
    }
}

std::vector<ScenarioCell> RunConfig::expand() const {
    validate();
    std::vector<ScenarioCell> cells;
    int id = 0;
    for (const auto& rates : scenario_rates) {
        for (int n : sample_sizes) {
            for (double lambda : accrual_rates) {
                for (int looks : interim_looks) {
                    ScenarioCell cell;
                    cell.scenario_id = id++;
                    cell.rates_pct = rates;
                    cell.num_interims = looks;
                    cell.scenario.baskets = baskets;
                    cell.scenario.true_shape = weibull_shape;
                    cell.scenario.window = response_window;
                    cell.scenario.accrual_rate = lambda;
                    cell.scenario.basket_size = n;
                    cell.scenario.phi = phi;
                    for (double r : rates) {
                        cell.scenario.true_scales.push_back(
                            scale_for_rate(r / 100.0, weibull_shape, response_window));
                    }
                    cell.schedule = interim_schedule(n, looks);
                    cell.scenario.validate();
                    cells.push_back(std::move(cell));
                }
            }
        }
    }
    return cells;
}

DesignSpec RunConfig::design_for(Strategy strategy, const ScenarioCell& cell) const {
    DesignSpec d;
    d.prior = prior;
    d.borrow = borrow;
    d.gamma_interim = gamma_interim;
    d.gamma_final = gamma_final;
    d.interim_counts = cell.schedule;
    d.strategy = strategy;
    d.mcmc = mcmc;
    d.validate(cell.scenario.basket_size);
    return d;
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("line " + std::to_string(line_of_offset(text, e.byte)) + ": " +
                          e.what());
    }
    if (!doc.is_object()) throw ConfigError("top level: expected a JSON object");

    reject_unknown_keys(doc,
                        {"baskets", "scenarios", "sample_sizes", "accrual_rates", "interim_looks",
                         "strategies", "replicates", "seed", "workers", "profile", "out_dir",
                         "response_window", "weibull_shape", "phi", "design", "mcmc"},
                        "config");

    RunConfig cfg;
    try {
        cfg.baskets = doc.value("baskets", cfg.baskets);
        if (!doc.contains("scenarios")) fail("scenarios", "required key is missing");
        cfg.scenario_rates = doc.at("scenarios").get<std::vector<std::vector<double>>>();
        if (doc.contains("sample_sizes")) {
            cfg.sample_sizes = doc.at("sample_sizes").get<std::vector<int>>();
        }
        if (doc.contains("accrual_rates")) {
            cfg.accrual_rates = doc.at("accrual_rates").get<std::vector<double>>();
        }
        if (doc.contains("interim_looks")) {
            cfg.interim_looks = doc.at("interim_looks").get<std::vector<int>>();
        }
        if (doc.contains("strategies")) {
            cfg.strategies.clear();
            for (const auto& s : doc.at("strategies")) {
                cfg.strategies.push_back(strategy_from_name(s.get<std::string>()));
            }
        }
        cfg.replicates = doc.value("replicates", cfg.replicates);
        cfg.seed = doc.value("seed", cfg.seed);
        cfg.workers = doc.value("workers", cfg.workers);
        cfg.profile = doc.value("profile", cfg.profile);
        cfg.out_dir = doc.value("out_dir", cfg.out_dir);
        cfg.response_window = doc.value("response_window", cfg.response_window);
        cfg.weibull_shape = doc.value("weibull_shape", cfg.weibull_shape);
        cfg.phi = doc.value("phi", cfg.phi);

        if (doc.contains("design")) {
            const json& d = doc.at("design");
            reject_unknown_keys(d, {"prior", "epsilon", "tau", "gamma_interim", "gamma_final"},
                                "design");
            if (d.contains("prior")) {
                const auto prior = d.at("prior").get<std::vector<double>>();
                if (prior.size() != 2) fail("design.prior", "expected [s1, s2]");
                cfg.prior = PriorSpec{prior[0], prior[1]};
            }
            cfg.borrow.epsilon = d.value("epsilon", cfg.borrow.epsilon);
            cfg.borrow.tau = d.value("tau", cfg.borrow.tau);
            cfg.gamma_interim = d.value("gamma_interim", cfg.gamma_interim);
            cfg.gamma_final = d.value("gamma_final", cfg.gamma_final);
        }

        if (cfg.profile == "fast") cfg.mcmc = McmcConfig::fast_profile();
        if (doc.contains("mcmc")) {
            const json& m = doc.at("mcmc");
            reject_unknown_keys(m, {"burn_in", "thin", "draws"}, "mcmc");
            cfg.mcmc.burn_in = m.value("burn_in", cfg.mcmc.burn_in);
            cfg.mcmc.thin = m.value("thin", cfg.mcmc.thin);
            cfg.mcmc.draws = m.value("draws", cfg.mcmc.draws);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

}  // namespace basket
