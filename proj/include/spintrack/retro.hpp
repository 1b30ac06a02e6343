// Backward propagation of the effect matrix E and the past-quantum-state
// combination producing the smoothed posterior.
#pragma once

#include "spintrack/filter.hpp"

namespace spintrack {

// Effect matrices on the forward checkpoint grid, trace-normalized.
struct EffectTrace {
    std::vector<std::size_t> checkpoint_steps;
    std::vector<BlockState> states;
};

// One Euler step of the adjoint equation across [t - dt, t], consuming the
// record increment of that interval. Linear kernel: adjoint mixing first,
// then the per-block adjoint update (the exact adjoint of the forward
// step's ordering). No normalization or hermitization.
void backward_step_linear(BlockState& e, double dY_prev, const BlockModel& model, double dt);

// Full backward step: linear kernel, hermitize, trace-normalize with
// log-norm accumulation. Throws on norm underflow.
void backward_step(BlockState& e, double dY_prev, const BlockModel& model, double dt);

// P_PQS(n) propto Tr(rho_n E_n); tiny negative overlaps are clamped before
// normalizing. Throws when every component is nonpositive beyond tolerance
// (desynchronized rho/E traces).
std::vector<double> pqs_posterior(const BlockState& rho, const BlockState& e);

struct PqsResult {
    PosteriorTrace forward;
    PosteriorTrace smoothed;
    double forward_log_likelihood = 0.0;
};

// Backward pass first (E = identity blocks at the final time), storing E at
// the checkpoint stride; then a streaming forward pass combines at the
// checkpoints. Both traces share the same time grid.
PqsResult run_pqs(const HomodyneRecord& record, const BlockModel& model,
                  const std::vector<double>& prior, std::size_t stride);

// Backward pass alone; exposed for tests and replay tooling.
EffectTrace run_backward(const HomodyneRecord& record, const BlockModel& model, std::size_t stride);

}  // namespace spintrack
