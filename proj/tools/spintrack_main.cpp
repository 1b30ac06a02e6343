// Command line driver: single runs, probe-strength sweeps and replay of
// stored homodyne records.
#include <cstdio>
#include <filesystem>

#include <CLI11.hpp>

#include "spintrack/harness.hpp"

using namespace spintrack;

namespace {

ExperimentConfig make_config(const std::string& config_path, double dt, double duration,
                             const std::string& out_dir) {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (dt > 0.0) cfg.dt = dt;
    if (duration > 0.0) cfg.duration = duration;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    cfg.validate();
    return cfg;
}

void print_metrics(const char* label, const RunMetrics& m) {
    std::printf("%s rmse_map_forward=%.9g rmse_map_pqs=%.9g mean_post_std_forward=%.9g mean_post_std_pqs=%.9g\n",
                label, m.rmse_map_forward, m.rmse_map_pqs, m.mean_post_std_forward, m.mean_post_std_pqs);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hidden-Markov magnetometry with a continuously monitored spin: "
                 "truth simulation, forward Bayesian filter and past-quantum-state smoother"};
    app.require_subcommand(1);

    std::string config_path, out_dir, record_path, truth_path;
    double dt = -1.0, duration = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key = value config file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--dt", dt, "integration step (1/gamma)");
        sub->add_option("--duration", duration, "run duration T (1/gamma)");
    };

    CLI::App* run = app.add_subcommand("run", "simulate one record and estimate it");
    add_common(run);
    run->add_option("--seed", seed, "replace the config seed list with one seed")->each([&](const std::string&) {
        seed_set = true;
    });

    CLI::App* sweep = app.add_subcommand("sweep", "error metrics vs probe amplitude beta");
    add_common(sweep);

    CLI::App* replay = app.add_subcommand("replay", "re-estimate from a stored homodyne record");
    add_common(replay);
    replay->add_option("--record", record_path, "record CSV (t,dY)")->required();
    replay->add_option("--truth", truth_path, "truth CSV (t,n,delta_n); enables metrics");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg = make_config(config_path, dt, duration, out_dir);
        if (seed_set) cfg.seeds = {seed};

        if (run->parsed()) {
            double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
            for (std::uint64_t s : cfg.seeds) {
                RunResult r = run_one(cfg, s);
                std::printf("seed %llu: ", static_cast<unsigned long long>(s));
                print_metrics("", r.metrics);
                s1 += r.metrics.rmse_map_forward * r.metrics.rmse_map_forward;
                s2 += r.metrics.rmse_map_pqs * r.metrics.rmse_map_pqs;
                s3 += r.metrics.mean_post_std_forward * r.metrics.mean_post_std_forward;
                s4 += r.metrics.mean_post_std_pqs * r.metrics.mean_post_std_pqs;
            }
            double n = static_cast<double>(cfg.seeds.size());
            RunMetrics agg{std::sqrt(s1 / n), std::sqrt(s2 / n), std::sqrt(s3 / n), std::sqrt(s4 / n)};
            print_metrics("aggregate:", agg);
        } else if (sweep->parsed()) {
            std::vector<SweepRow> rows = beta_sweep(cfg);
            std::filesystem::create_directories(cfg.out_dir);
            write_sweep_csv(cfg.out_dir + "/sweep.csv", rows);
            for (const SweepRow& r : rows) {
                std::printf("beta %.9g: ", r.beta);
                print_metrics("", r.aggregate);
            }
            std::printf("wrote %s/sweep.csv\n", cfg.out_dir.c_str());
        } else if (replay->parsed()) {
            HomodyneRecord record = read_record_csv(record_path);
            cfg.dt = record.dt;
            BlockModel model = BlockModel::build(cfg.hmm, cfg.params);
            PqsResult est = run_pqs(record, model, stationary(cfg.hmm), cfg.stride);
            std::filesystem::create_directories(cfg.out_dir);
            write_trace_csv(cfg.out_dir + "/forward_replay.csv", est.forward);
            write_trace_csv(cfg.out_dir + "/pqs_replay.csv", est.smoothed);
            std::printf("wrote %s/forward_replay.csv and %s/pqs_replay.csv\n", cfg.out_dir.c_str(),
                        cfg.out_dir.c_str());
            if (!truth_path.empty()) {
                TruthTrajectory truth = read_truth_csv(truth_path, cfg.hmm.grid);
                std::vector<std::size_t> steps;
                for (double t : est.forward.times)
                    steps.push_back(static_cast<std::size_t>(t / record.dt + 0.5));
                MetricsComponents f = metrics(truth, est.forward, steps, cfg.hmm.grid, cfg.burn_in);
                MetricsComponents q = metrics(truth, est.smoothed, steps, cfg.hmm.grid, cfg.burn_in);
                RunMetrics m{f.rmse_map, q.rmse_map, f.mean_post_std, q.mean_post_std};
                print_metrics("replay:", m);
            }
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
