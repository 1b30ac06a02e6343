// Ehrenfest dog-flea hidden Markov model: nearest-neighbor jump rates,
// binomial stationary law, ground-truth sampler and the classical mixing
// term acting on block-diagonal extended states.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "spintrack/model.hpp"
#include "spintrack/qmat.hpp"

namespace spintrack {

// Extended block-diagonal state: one 2x2 block per hidden state, carrying
// either rho_n (forward) or E_n (backward). Normalization factors stripped
// per step are accumulated in log_norm.
struct BlockState {
    std::vector<CMat2> blocks;
    double log_norm = 0.0;

    static BlockState uniform_identity(int m) {
        BlockState s;
        s.blocks.assign(m, CMat2::identity());
        return s;
    }
    int size() const { return static_cast<int>(blocks.size()); }
};

struct HmmSpec {
    int n_fleas = 24;          // N; hidden states are n = 0..N
    double flea_rate = 0.02;   // p, per-flea jump rate in units of gamma
    DetuningGrid grid = DetuningGrid::uniform(-2.0, 2.0, 25);

    int states() const { return n_fleas + 1; }
    bool valid() const { return n_fleas >= 1 && flea_rate >= 0.0 && grid.size() == states(); }
};

struct TruthTrajectory {
    double dt = 0.0;
    std::vector<int> states;
};

struct JumpRates {
    double up;    // n -> n+1, rate p (N - n)
    double down;  // n -> n-1, rate p n
};

// Nearest-neighbor Ehrenfest rates; uniquely fixed by the OU drift
// -2p(n - N/2) and diffusion sqrt(pN) of the continuum limit.
JumpRates rates(const HmmSpec& spec, int n);

// Binomial(N, 1/2) over the state indices.
std::vector<double> stationary(const HmmSpec& spec);

// Standard deviation of the stationary law in detuning units.
double stationary_detuning_std(const HmmSpec& spec);

int sample_stationary(const HmmSpec& spec, std::mt19937_64& rng);

// Per-step Bernoulli jump sampling on a fixed clock; at most one jump per
// step. Requires dt * max total rate < 0.1.
TruthTrajectory sample_trajectory(const HmmSpec& spec, int n0, std::size_t steps, double dt,
                                  std::mt19937_64& rng);

// (source, target, rate) descriptor of the jump Lindblad operator
// sqrt(r) |n2><n| acting on the hidden-state factor only.
struct JumpOp {
    int source;
    int target;
    double rate;
};
JumpOp jump_op(const HmmSpec& spec, int n, int n2);

enum class MixDirection { forward, backward };

// First-order Euler application of the classical mixing generator.
// Forward moves whole blocks along the rates and conserves the total
// trace; backward is the adjoint (all-identity blocks are a fixed point).
void mix_step(BlockState& state, const HmmSpec& spec, double dt, MixDirection dir);

}  // namespace spintrack
