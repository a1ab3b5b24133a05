#pragma once

#include <string>
#include <vector>

#include "basket/config.hpp"
#include "basket/oc.hpp"

namespace basket {

// Aggregated results of one (scenario cell, strategy) pair.
struct CellReport {
    ScenarioCell cell;
    Strategy strategy = Strategy::CD;
    OCReport oc;
};

struct GridResult {
    std::vector<CellReport> reports;  // cell-major, strategy order as configured
    long total_failures = 0;
    bool failure_threshold_exceeded = false;  // > 1% failed replicates in some cell
};

// Runs every (cell, strategy, replicate) job across the configured worker
// pool. Output is a pure function of (config, seed): replicates use keyed
// substreams and results are reduced in index order, so the worker count
// never changes a byte.
GridResult run_grid(const RunConfig& cfg);

// The oc_report.csv body (18 columns, one row per basket). Split out so
// tests can assert byte identity without touching the filesystem.
std::string render_csv(const GridResult& grid);

// Full resolved configuration echo for provenance.
std::string render_meta(const RunConfig& cfg, const GridResult& grid);

// Writes oc_report.csv and run_meta.json under out_dir; creates the
// directory if needed. I/O errors surface as std::runtime_error.
void write_reports(const GridResult& grid, const RunConfig& cfg, const std::string& out_dir);

}  // namespace basket
