// Experiment orchestration: config parsing, seeded end-to-end runs, error
// metrics, the probe-strength sweep and CSV emission.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "spintrack/retro.hpp"
#include "spintrack/truthsim.hpp"

namespace spintrack {

struct ExperimentConfig {
    ModelParams params;
    HmmSpec hmm;
    double duration = 2.0e4;  // T in units 1/gamma
    double dt = 0.01;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::vector<double> beta_values = {0.1, 0.2, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0};
    std::size_t stride = 10;   // checkpoint stride for traces and PQS storage
    double burn_in = 100.0;    // initial window excluded from metrics
    std::string out_dir = "out";

    std::size_t steps() const { return static_cast<std::size_t>(duration / dt + 0.5); }
    void validate() const;  // throws on inconsistent settings
};

// Flat `key = value` config file, `#` comments. Unknown keys are an error.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

struct RunMetrics {
    double rmse_map_forward = 0.0;
    double rmse_map_pqs = 0.0;
    double mean_post_std_forward = 0.0;
    double mean_post_std_pqs = 0.0;
};

struct MetricsComponents {
    double rmse_map = 0.0;
    double mean_post_std = 0.0;
};

// Time-averaged errors over the checkpoint grid, excluding the burn-in
// window. The truth is downsampled to the trace's checkpoint steps.
MetricsComponents metrics(const TruthTrajectory& truth, const PosteriorTrace& trace,
                          const std::vector<std::size_t>& checkpoint_steps,
                          const DetuningGrid& grid, double burn_in);

struct RunResult {
    RunMetrics metrics;
    TruthRun truth_run;
    PqsResult estimate;
    std::vector<std::size_t> checkpoint_steps;
};

// generate -> forward filter -> PQS smoother -> metrics, one seed. When
// out_dir is nonempty the truth, record and both posterior traces are
// written there as CSV.
RunResult run_one(const ExperimentConfig& cfg, std::uint64_t seed, bool write_files = true);

struct SweepRow {
    double beta;
    RunMetrics aggregate;               // quadratic mean over seeds
    std::vector<RunMetrics> per_seed;
};

// One run per (beta, seed) pair; partial results are kept if a run fails.
std::vector<SweepRow> beta_sweep(const ExperimentConfig& cfg);

// CSV writers; floats printed with 9 significant digits.
void write_truth_csv(const std::string& path, const TruthTrajectory& truth, const DetuningGrid& grid);
void write_record_csv(const std::string& path, const HomodyneRecord& record);
void write_trace_csv(const std::string& path, const PosteriorTrace& trace);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

HomodyneRecord read_record_csv(const std::string& path);
TruthTrajectory read_truth_csv(const std::string& path, const DetuningGrid& grid);

}  // namespace spintrack
