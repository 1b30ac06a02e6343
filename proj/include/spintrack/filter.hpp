// Forward hybrid quantum-classical Bayesian filter: propagate the extended
// block-diagonal density matrix conditioned on the homodyne record and
// extract P(n, t).
#pragma once

#include <cstdint>
#include <vector>

#include "spintrack/markov.hpp"
#include "spintrack/model.hpp"
#include "spintrack/qmat.hpp"

namespace spintrack {

// Per-grid-state generators precomputed into superoperator form; the
// integration loops reduce to two 4x4 matvecs per block per step.
// Tests may overwrite the entries to build contrived instances.
struct BlockModel {
    ModelParams params;
    HmmSpec hmm;
    std::vector<Superop2> fwd_det;   // L_n
    std::vector<Superop2> fwd_meas;  // X_n
    std::vector<Superop2> bwd_det;   // L_n^dag
    std::vector<Superop2> bwd_meas;  // X_n^dag

    static BlockModel build(const HmmSpec& spec, const ModelParams& p);
    int states() const { return hmm.states(); }
};

struct HomodyneRecord {
    double dt = 0.0;
    std::vector<double> increments;  // dY over [t_k, t_{k+1}]
    std::uint64_t seed = 0;
};

// Time-indexed posterior on the detuning grid plus derived summaries.
struct PosteriorTrace {
    std::vector<double> times;
    std::vector<std::vector<double>> prob;  // one M-vector per time
    std::vector<int> map_index;
    std::vector<double> map_delta;
    std::vector<double> mean_delta;
    std::vector<double> var_delta;

    void push(double t, std::vector<double> p, const DetuningGrid& grid);
    std::size_t size() const { return times.size(); }
};

// One Euler step of the unnormalized extended SME plus classical mixing.
// No renormalization or hermitization; exposed for the adjointness and
// order-of-accuracy checks.
void forward_step_linear(BlockState& state, double dY, const BlockModel& model, double dt);

// Full filter step: linear update, hermitize, renormalize to unit total
// trace with the stripped factor accumulated in log_norm.
// Throws on total-trace underflow (integration instability).
void forward_step(BlockState& state, double dY, const BlockModel& model, double dt);

// Normalized block traces.
std::vector<double> posterior(const BlockState& state);

struct ForwardResult {
    PosteriorTrace trace;
    std::vector<std::size_t> checkpoint_steps;
    std::vector<BlockState> checkpoints;  // normalized states, optional
    double log_likelihood = 0.0;
};

// Run the filter over a record from the given prior. The trace is sampled
// every `stride` steps (step 0 included); checkpointed BlockStates are kept
// only when store_states is set.
ForwardResult run_forward(const HomodyneRecord& record, const BlockModel& model,
                          const std::vector<double>& prior, std::size_t stride,
                          bool store_states = false);

// prior-weighted maximally mixed blocks: rho_n = prior_n * I/2.
BlockState initial_state(const std::vector<double>& prior);

}  // namespace spintrack
