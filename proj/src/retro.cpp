#include "spintrack/retro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spintrack {

void backward_step_linear(BlockState& e, double dY_prev, const BlockModel& model, double dt) {
    // Adjoint of (mix after quantum update) is (adjoint quantum update
    // after adjoint mix).
    mix_step(e, model.hmm, dt, MixDirection::backward);
    const int m = e.size();
    for (int n = 0; n < m; ++n) {
        CMat2& block = e.blocks[n];
        CMat2 det = model.bwd_det[n].apply(block);
        CMat2 meas = model.bwd_meas[n].apply(block);
        block += cpx(dt) * det + cpx(dY_prev) * meas;
    }
}

void backward_step(BlockState& e, double dY_prev, const BlockModel& model, double dt) {
    backward_step_linear(e, dY_prev, model, dt);
    double total = 0.0;
    for (CMat2& b : e.blocks) {
        b.hermitize();
        total += b.trace().real();
    }
    if (!(total > 1e-300) || !std::isfinite(total))
        throw std::runtime_error("backward_step: norm underflow");
    // Scale so the mean block trace is 2, keeping all-identity blocks an
    // exact fixed point of the measurement-free equation.
    double target = 2.0 * e.size();
    cpx inv(target / total);
    for (CMat2& b : e.blocks) b *= inv;
    e.log_norm += std::log(total / target);
}

std::vector<double> pqs_posterior(const BlockState& rho, const BlockState& e) {
    if (rho.size() != e.size()) throw std::invalid_argument("pqs_posterior: grid size mismatch");
    std::vector<double> p(rho.size());
    double total = 0.0, scale = 0.0;
    for (int n = 0; n < rho.size(); ++n) {
        p[n] = (rho.blocks[n] * e.blocks[n]).trace().real();
        scale += std::abs(p[n]);
    }
    for (double& x : p) {
        if (x < 0.0) {
            if (x < -1e-9 * scale) throw std::runtime_error("pqs_posterior: negative overlap beyond tolerance");
            x = 0.0;
        }
        total += x;
    }
    if (!(total > 0.0)) throw std::runtime_error("pqs_posterior: all overlaps nonpositive");
    for (double& x : p) x /= total;
    return p;
}

EffectTrace run_backward(const HomodyneRecord& record, const BlockModel& model, std::size_t stride) {
    if (record.increments.empty()) throw std::invalid_argument("run_backward: empty record");
    if (stride == 0) stride = 1;
    const std::size_t steps = record.increments.size();
    const double dt = record.dt;

    EffectTrace trace;
    BlockState e = BlockState::uniform_identity(model.states());

    auto is_checkpoint = [&](std::size_t j) { return j % stride == 0 || j == steps; };

    if (is_checkpoint(steps)) {
        trace.checkpoint_steps.push_back(steps);
        trace.states.push_back(e);
    }
    for (std::size_t k = steps; k-- > 0;) {
        try {
            backward_step(e, record.increments[k], model, dt);
        } catch (const std::exception& ex) {
            throw std::runtime_error("run_backward: step " + std::to_string(k) + ": " + ex.what());
        }
        if (is_checkpoint(k)) {
            trace.checkpoint_steps.push_back(k);
            trace.states.push_back(e);
        }
    }
    std::reverse(trace.checkpoint_steps.begin(), trace.checkpoint_steps.end());
    std::reverse(trace.states.begin(), trace.states.end());
    return trace;
}

PqsResult run_pqs(const HomodyneRecord& record, const BlockModel& model,
                  const std::vector<double>& prior, std::size_t stride) {
    if (record.increments.empty()) throw std::invalid_argument("run_pqs: empty record");
    if (static_cast<int>(prior.size()) != model.states())
        throw std::invalid_argument("run_pqs: prior size does not match grid");
    if (stride == 0) stride = 1;

    EffectTrace effects = run_backward(record, model, stride);

    PqsResult res;
    BlockState state = initial_state(prior);
    const std::size_t steps = record.increments.size();
    const double dt = record.dt;
    std::size_t ci = 0;

    auto combine = [&](std::size_t j) {
        res.forward.push(j * dt, posterior(state), model.hmm.grid);
        res.smoothed.push(j * dt, pqs_posterior(state, effects.states[ci]), model.hmm.grid);
        ++ci;
    };

    combine(0);
    for (std::size_t k = 0; k < steps; ++k) {
        try {
            forward_step(state, record.increments[k], model, dt);
        } catch (const std::exception& ex) {
            throw std::runtime_error("run_pqs: forward step " + std::to_string(k) + ": " + ex.what());
        }
        if ((k + 1) % stride == 0 || k + 1 == steps) combine(k + 1);
    }
    res.forward_log_likelihood = state.log_norm;
    return res;
}

}  // namespace spintrack
