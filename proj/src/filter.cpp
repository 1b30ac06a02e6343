#include "spintrack/filter.hpp"

#include <cmath>
#include <stdexcept>

namespace spintrack {

BlockModel BlockModel::build(const HmmSpec& spec, const ModelParams& p) {
    if (!spec.valid()) throw std::invalid_argument("BlockModel: invalid HmmSpec");
    if (!p.valid()) throw std::invalid_argument("BlockModel: invalid ModelParams");
    BlockModel model;
    model.params = p;
    model.hmm = spec;
    const int m = spec.states();
    model.fwd_det.reserve(m);
    model.fwd_meas.reserve(m);
    model.bwd_det.reserve(m);
    model.bwd_meas.reserve(m);
    for (int n = 0; n < m; ++n) {
        double dn = spec.grid.values[n];
        model.fwd_det.push_back(Superop2::from_action([&](const CMat2& x) { return lindblad_rhs(p, dn, x); }));
        model.fwd_meas.push_back(Superop2::from_action([&](const CMat2& x) { return meas_superop(p, dn, x); }));
        model.bwd_det.push_back(
            Superop2::from_action([&](const CMat2& x) { return adjoint_lindblad_rhs(p, dn, x); }));
        model.bwd_meas.push_back(
            Superop2::from_action([&](const CMat2& x) { return adjoint_meas_superop(p, dn, x); }));
    }
    return model;
}

void PosteriorTrace::push(double t, std::vector<double> p, const DetuningGrid& grid) {
    int best = 0;
    double mean = 0.0, second = 0.0;
    for (int n = 0; n < static_cast<int>(p.size()); ++n) {
        if (p[n] > p[best]) best = n;  // ties resolve to the lowest index
        mean += p[n] * grid.values[n];
        second += p[n] * grid.values[n] * grid.values[n];
    }
    times.push_back(t);
    map_index.push_back(best);
    map_delta.push_back(grid.values[best]);
    mean_delta.push_back(mean);
    var_delta.push_back(std::max(0.0, second - mean * mean));
    prob.push_back(std::move(p));
}

void forward_step_linear(BlockState& state, double dY, const BlockModel& model, double dt) {
    const int m = state.size();
    for (int n = 0; n < m; ++n) {
        CMat2& rho = state.blocks[n];
        CMat2 det = model.fwd_det[n].apply(rho);
        CMat2 meas = model.fwd_meas[n].apply(rho);
        rho += cpx(dt) * det + cpx(dY) * meas;
    }
    mix_step(state, model.hmm, dt, MixDirection::forward);
}

void forward_step(BlockState& state, double dY, const BlockModel& model, double dt) {
    forward_step_linear(state, dY, model, dt);
    double total = 0.0;
    for (CMat2& b : state.blocks) {
        b.hermitize();
        total += b.trace().real();
    }
    if (!(total > 1e-300) || !std::isfinite(total))
        throw std::runtime_error("forward_step: total trace underflow, integration unstable");
    cpx inv(1.0 / total);
    for (CMat2& b : state.blocks) b *= inv;
    state.log_norm += std::log(total);
}

std::vector<double> posterior(const BlockState& state) {
    std::vector<double> p(state.size());
    double total = 0.0;
    for (int n = 0; n < state.size(); ++n) {
        p[n] = state.blocks[n].trace().real();
        total += p[n];
    }
    if (total <= 0.0) throw std::runtime_error("posterior: nonpositive total trace");
    for (double& x : p) x /= total;
    return p;
}

BlockState initial_state(const std::vector<double>& prior) {
    BlockState s;
    s.blocks.reserve(prior.size());
    for (double w : prior) s.blocks.push_back(cpx(0.5 * w) * CMat2::identity());
    return s;
}

ForwardResult run_forward(const HomodyneRecord& record, const BlockModel& model,
                          const std::vector<double>& prior, std::size_t stride, bool store_states) {
    if (record.increments.empty()) throw std::invalid_argument("run_forward: empty record");
    if (static_cast<int>(prior.size()) != model.states())
        throw std::invalid_argument("run_forward: prior size does not match grid");
    if (stride == 0) stride = 1;

    ForwardResult res;
    BlockState state = initial_state(prior);
    const std::size_t steps = record.increments.size();
    const double dt = record.dt;

    auto checkpoint = [&](std::size_t k) {
        res.trace.push(k * dt, posterior(state), model.hmm.grid);
        res.checkpoint_steps.push_back(k);
        if (store_states) res.checkpoints.push_back(state);
    };

    checkpoint(0);
    for (std::size_t k = 0; k < steps; ++k) {
        try {
            forward_step(state, record.increments[k], model, dt);
        } catch (const std::exception& e) {
            throw std::runtime_error("run_forward: step " + std::to_string(k) + ": " + e.what());
        }
        if ((k + 1) % stride == 0 || k + 1 == steps) checkpoint(k + 1);
    }
    res.log_likelihood = state.log_norm;
    return res;
}

}  // namespace spintrack
