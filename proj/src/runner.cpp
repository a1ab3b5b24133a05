#include "basket/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "basket/errors.hpp"

namespace basket {

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string rates_label(const std::vector<double>& rates_pct) {
    std::string out;
    for (std::size_t i = 0; i < rates_pct.size(); ++i) {
        if (i > 0) out += ";";
        out += fmt(rates_pct[i]);
    }
    return out;
}

struct Job {
    std::size_t report_index;
    long replicate;
};

}  // namespace

GridResult run_grid(const RunConfig& cfg) {
    const std::vector<ScenarioCell> cells = cfg.expand();

    GridResult grid;
    for (const ScenarioCell& cell : cells) {
        for (Strategy strategy : cfg.strategies) {
            CellReport rep;
            rep.cell = cell;
            rep.strategy = strategy;
            grid.reports.push_back(std::move(rep));
        }
    }

    const long R = cfg.replicates;
    std::vector<std::vector<std::optional<TrialResult>>> results(
        grid.reports.size(), std::vector<std::optional<TrialResult>>(static_cast<std::size_t>(R)));

    std::vector<Job> jobs;
    jobs.reserve(grid.reports.size() * static_cast<std::size_t>(R));
    for (std::size_t i = 0; i < grid.reports.size(); ++i) {
        for (long r = 0; r < R; ++r) jobs.push_back(Job{i, r});
    }

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            const Job job = jobs[j];
            const CellReport& rep = grid.reports[job.report_index];
            TrialRng rng;
            rng.master = cfg.seed;
            rng.scenario = static_cast<std::uint64_t>(rep.cell.scenario_id);
            rng.replicate = static_cast<std::uint64_t>(job.replicate);
            const DesignSpec design = cfg.design_for(rep.strategy, rep.cell);
            try {
                results[job.report_index][static_cast<std::size_t>(job.replicate)] =
                    run_trial(rep.cell.scenario, design, rng);
            } catch (const std::exception&) {
                // failed replicate: slot stays empty and is counted below
            }
        }
    };

    const int thread_count = std::max(1, cfg.workers);
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t i = 0; i < grid.reports.size(); ++i) {
        CellReport& rep = grid.reports[i];
        std::vector<TrialResult> ok;
        ok.reserve(static_cast<std::size_t>(R));
        long failures = 0;
        for (const auto& slot : results[i]) {
            if (slot.has_value()) {
                ok.push_back(*slot);
            } else {
                ++failures;
            }
        }
        if (ok.empty()) {
            throw NumericalError("every replicate failed for scenario " +
                                 std::to_string(rep.cell.scenario_id) + " strategy " +
                                 strategy_name(rep.strategy));
        }
        rep.oc = aggregate(ok, TruthLabels::from_scenario(rep.cell.scenario));
        rep.oc.failures = failures;
        grid.total_failures += failures;
        if (failures * 100 > R) grid.failure_threshold_exceeded = true;
    }
    return grid;
}

std::string render_csv(const GridResult& grid) {
    std::ostringstream out;
    out << "scenario_id,rates,B,n_b,lambda,n_interims,strategy,basket,PET,PET_se,ESS,ETD,"
           "basketwise_alpha,power,ECD,trialwise_alpha,replicates,failures\n";
    for (const CellReport& rep : grid.reports) {
        const ScenarioCell& cell = rep.cell;
        for (int b = 0; b < cell.scenario.baskets; ++b) {
            const auto& alpha = rep.oc.basketwise_alpha[static_cast<std::size_t>(b)];
            const auto& power = rep.oc.basketwise_power[static_cast<std::size_t>(b)];
            out << cell.scenario_id << ',' << rates_label(cell.rates_pct) << ','
                << cell.scenario.baskets << ',' << cell.scenario.basket_size << ','
                << fmt(cell.scenario.accrual_rate) << ',' << cell.num_interims << ','
                << strategy_name(rep.strategy) << ',' << (b + 1) << ','
                << fmt(rep.oc.pet[static_cast<std::size_t>(b)]) << ','
                << fmt(rep.oc.pet_se[static_cast<std::size_t>(b)]) << ','
                << fmt(rep.oc.ess[static_cast<std::size_t>(b)]) << ',' << fmt(rep.oc.etd) << ','
                << (alpha ? fmt(*alpha) : "NA") << ',' << (power ? fmt(*power) : "NA") << ','
                << fmt(rep.oc.ecd) << ',' << fmt(rep.oc.trialwise_alpha) << ','
                << rep.oc.replicates << ',' << rep.oc.failures << '\n';
        }
    }
    return out.str();
}

std::string render_meta(const RunConfig& cfg, const GridResult& grid) {
    nlohmann::json meta;
    meta["seed"] = cfg.seed;
    meta["replicates"] = cfg.replicates;
    meta["workers"] = cfg.workers;
    meta["profile"] = cfg.profile;
    meta["baskets"] = cfg.baskets;
    meta["scenarios"] = cfg.scenario_rates;
    meta["sample_sizes"] = cfg.sample_sizes;
    meta["accrual_rates"] = cfg.accrual_rates;
    meta["interim_looks"] = cfg.interim_looks;
    std::vector<std::string> strategy_names;
    for (Strategy s : cfg.strategies) strategy_names.emplace_back(strategy_name(s));
    meta["strategies"] = strategy_names;
    meta["response_window"] = cfg.response_window;
    meta["weibull_shape"] = cfg.weibull_shape;
    meta["phi"] = cfg.phi;
    meta["design"] = {{"prior", {cfg.prior.s1, cfg.prior.s2}},
                      {"epsilon", cfg.borrow.epsilon},
                      {"tau", cfg.borrow.tau},
                      {"gamma_interim", cfg.gamma_interim},
                      {"gamma_final", cfg.gamma_final}};
    meta["mcmc"] = {{"burn_in", cfg.mcmc.burn_in},
                    {"thin", cfg.mcmc.thin},
                    {"draws", cfg.mcmc.draws}};
    meta["total_failures"] = grid.total_failures;
    return meta.dump(2) + "\n";
}

void write_reports(const GridResult& grid, const RunConfig& cfg, const std::string& out_dir) {
    if (grid.reports.empty()) throw std::invalid_argument("write_reports: no reports to write");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto write_file = [&](const std::string& name, const std::string& body) {
        const fs::path path = fs::path(out_dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
        out << body;
        if (!out) throw std::runtime_error("failed writing " + path.string());
    };
    write_file("oc_report.csv", render_csv(grid));
    write_file("run_meta.json", render_meta(cfg, grid));
}

}  // namespace basket
