#include "spintrack/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spintrack {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct CsvFile {
    FILE* f;
    explicit CsvFile(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
        if (!f) throw std::runtime_error("cannot open for writing: " + path);
    }
    ~CsvFile() {
        if (f) std::fclose(f);
    }
    CsvFile(const CsvFile&) = delete;
    CsvFile& operator=(const CsvFile&) = delete;
};

}  // namespace

void ExperimentConfig::validate() const {
    if (!params.valid()) throw std::invalid_argument("config: invalid physical parameters");
    if (!hmm.valid()) throw std::invalid_argument("config: invalid HMM settings");
    if (dt <= 0.0 || duration <= 0.0) throw std::invalid_argument("config: need dt > 0 and duration > 0");
    double ratio = duration / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-6 * ratio)
        throw std::invalid_argument("config: duration must be an integer number of steps");
    if (seeds.empty()) throw std::invalid_argument("config: need at least one seed");
    for (double b : beta_values)
        if (b <= 0.0) throw std::invalid_argument("config: sweep values must be positive");
    if (!params.bad_cavity_ok())
        std::fprintf(stderr, "warning: g/kappa = %.3g exceeds 0.5, adiabatic elimination questionable\n",
                     params.g / params.kappa);
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    double grid_min = -2.0, grid_max = 2.0;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        auto num = [&] { return std::stod(value); };
        if (key == "gamma") cfg.params.gamma = num();
        else if (key == "g") cfg.params.g = num();
        else if (key == "kappa") cfg.params.kappa = num();
        else if (key == "kappa1") cfg.params.kappa1 = num();
        else if (key == "delta_r") cfg.params.delta_r = num();
        else if (key == "beta") cfg.params.beta_drive = num();
        else if (key == "eta") cfg.params.eta = num();
        else if (key == "phi_lo") cfg.params.phi_lo = num();
        else if (key == "gamma_dec") cfg.params.gamma_dec = num();
        else if (key == "gamma_phi") cfg.params.gamma_phi = num();
        else if (key == "delta_s0") cfg.params.delta_s0 = num();
        else if (key == "zeeman_coupling") cfg.params.zeeman_coupling = num();
        else if (key == "n_fleas") cfg.hmm.n_fleas = std::stoi(value);
        else if (key == "flea_rate") cfg.hmm.flea_rate = num();
        else if (key == "grid_min") grid_min = num();
        else if (key == "grid_max") grid_max = num();
        else if (key == "duration") cfg.duration = num();
        else if (key == "dt") cfg.dt = num();
        else if (key == "stride") cfg.stride = std::stoul(value);
        else if (key == "burn_in") cfg.burn_in = num();
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "seeds") {
            cfg.seeds.clear();
            for (const std::string& s : split_list(value)) cfg.seeds.push_back(std::stoull(s));
        } else if (key == "beta_sweep") {
            cfg.beta_values.clear();
            for (const std::string& s : split_list(value)) cfg.beta_values.push_back(std::stod(s));
        } else {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    cfg.hmm.grid = DetuningGrid::uniform(grid_min, grid_max, cfg.hmm.states());
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

MetricsComponents metrics(const TruthTrajectory& truth, const PosteriorTrace& trace,
                          const std::vector<std::size_t>& checkpoint_steps,
                          const DetuningGrid& grid, double burn_in) {
    if (trace.size() != checkpoint_steps.size())
        throw std::invalid_argument("metrics: trace / checkpoint grid mismatch");
    double se = 0.0, var = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::size_t step = checkpoint_steps[i];
        if (step >= truth.states.size()) throw std::invalid_argument("metrics: checkpoint beyond truth length");
        if (trace.times[i] < burn_in) continue;
        double d_true = grid.values[truth.states[step]];
        double err = trace.map_delta[i] - d_true;
        se += err * err;
        var += trace.var_delta[i];
        ++count;
    }
    if (count == 0) throw std::invalid_argument("metrics: burn-in excludes every checkpoint");
    return {std::sqrt(se / count), std::sqrt(var / count)};
}

RunResult run_one(const ExperimentConfig& cfg, std::uint64_t seed, bool write_files) {
    cfg.validate();
    BlockModel model = BlockModel::build(cfg.hmm, cfg.params);

    RunResult res;
    res.truth_run = generate(cfg.hmm, cfg.params, cfg.steps(), cfg.dt, seed);
    res.estimate = run_pqs(res.truth_run.record, model, stationary(cfg.hmm), cfg.stride);

    // Both traces share the forward checkpoint grid by construction.
    res.checkpoint_steps.reserve(res.estimate.forward.size());
    for (std::size_t i = 0; i < res.estimate.forward.size(); ++i)
        res.checkpoint_steps.push_back(
            static_cast<std::size_t>(res.estimate.forward.times[i] / cfg.dt + 0.5));

    MetricsComponents fwd =
        metrics(res.truth_run.truth, res.estimate.forward, res.checkpoint_steps, cfg.hmm.grid, cfg.burn_in);
    MetricsComponents pqs =
        metrics(res.truth_run.truth, res.estimate.smoothed, res.checkpoint_steps, cfg.hmm.grid, cfg.burn_in);
    res.metrics = {fwd.rmse_map, pqs.rmse_map, fwd.mean_post_std, pqs.mean_post_std};

    if (write_files && !cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        std::string tag = "_seed" + std::to_string(seed);
        write_truth_csv(cfg.out_dir + "/truth" + tag + ".csv", res.truth_run.truth, cfg.hmm.grid);
        write_record_csv(cfg.out_dir + "/record" + tag + ".csv", res.truth_run.record);
        write_trace_csv(cfg.out_dir + "/forward" + tag + ".csv", res.estimate.forward);
        write_trace_csv(cfg.out_dir + "/pqs" + tag + ".csv", res.estimate.smoothed);
    }
    return res;
}

std::vector<SweepRow> beta_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<SweepRow> rows;
    for (double beta : cfg.beta_values) {
        ExperimentConfig c = cfg;
        c.params.beta_drive = beta;
        SweepRow row;
        row.beta = beta;
        double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
        for (std::uint64_t seed : cfg.seeds) {
            try {
                RunResult r = run_one(c, seed, /*write_files=*/false);
                row.per_seed.push_back(r.metrics);
                s1 += r.metrics.rmse_map_forward * r.metrics.rmse_map_forward;
                s2 += r.metrics.rmse_map_pqs * r.metrics.rmse_map_pqs;
                s3 += r.metrics.mean_post_std_forward * r.metrics.mean_post_std_forward;
                s4 += r.metrics.mean_post_std_pqs * r.metrics.mean_post_std_pqs;
            } catch (const std::exception& e) {
                std::fprintf(stderr, "sweep: beta=%g seed=%llu failed: %s\n", beta,
                             static_cast<unsigned long long>(seed), e.what());
            }
        }
        if (!row.per_seed.empty()) {
            double n = static_cast<double>(row.per_seed.size());
            row.aggregate = {std::sqrt(s1 / n), std::sqrt(s2 / n), std::sqrt(s3 / n), std::sqrt(s4 / n)};
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_truth_csv(const std::string& path, const TruthTrajectory& truth, const DetuningGrid& grid) {
    CsvFile out(path);
    std::fprintf(out.f, "t,n,delta_n\n");
    for (std::size_t k = 0; k < truth.states.size(); ++k)
        std::fprintf(out.f, "%.9g,%d,%.9g\n", k * truth.dt, truth.states[k], grid.values[truth.states[k]]);
}

void write_record_csv(const std::string& path, const HomodyneRecord& record) {
    CsvFile out(path);
    std::fprintf(out.f, "t,dY\n");
    for (std::size_t k = 0; k < record.increments.size(); ++k)
        std::fprintf(out.f, "%.9g,%.9g\n", k * record.dt, record.increments[k]);
}

void write_trace_csv(const std::string& path, const PosteriorTrace& trace) {
    CsvFile out(path);
    std::fprintf(out.f, "t");
    if (!trace.prob.empty())
        for (std::size_t n = 0; n < trace.prob[0].size(); ++n) std::fprintf(out.f, ",P_%zu", n);
    std::fprintf(out.f, ",map_delta,mean_delta,var_delta\n");
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::fprintf(out.f, "%.9g", trace.times[i]);
        for (double p : trace.prob[i]) std::fprintf(out.f, ",%.9g", p);
        std::fprintf(out.f, ",%.9g,%.9g,%.9g\n", trace.map_delta[i], trace.mean_delta[i], trace.var_delta[i]);
    }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    CsvFile out(path);
    std::fprintf(out.f, "beta,rmse_map_forward,rmse_map_pqs,mean_post_std_forward,mean_post_std_pqs,n_seeds\n");
    for (const SweepRow& r : rows)
        std::fprintf(out.f, "%.9g,%.9g,%.9g,%.9g,%.9g,%zu\n", r.beta, r.aggregate.rmse_map_forward,
                     r.aggregate.rmse_map_pqs, r.aggregate.mean_post_std_forward,
                     r.aggregate.mean_post_std_pqs, r.per_seed.size());
}

HomodyneRecord read_record_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open record: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty record file: " + path);
    HomodyneRecord rec;
    std::vector<double> times;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("malformed record row: " + line);
        times.push_back(std::stod(line.substr(0, comma)));
        rec.increments.push_back(std::stod(line.substr(comma + 1)));
    }
    if (times.size() < 2) throw std::runtime_error("record needs at least two rows: " + path);
    rec.dt = times[1] - times[0];
    return rec;
}

TruthTrajectory read_truth_csv(const std::string& path, const DetuningGrid& grid) {
    (void)grid;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open truth: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty truth file: " + path);
    TruthTrajectory truth;
    std::vector<double> times;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::size_t c1 = line.find(',');
        std::size_t c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::runtime_error("malformed truth row: " + line);
        times.push_back(std::stod(line.substr(0, c1)));
        truth.states.push_back(std::stoi(line.substr(c1 + 1, c2 - c1 - 1)));
    }
    if (times.size() < 2) throw std::runtime_error("truth needs at least two rows: " + path);
    truth.dt = times[1] - times[0];
    return truth;
}

}  // namespace spintrack
