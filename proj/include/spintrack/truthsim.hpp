// Ground-truth generation: evolve the true normalized spin state under the
// stochastic master equation driven by a sampled hidden trajectory, and
// synthesize the homodyne record.
#pragma once

#include <cstdint>

#include "spintrack/filter.hpp"
#include "spintrack/markov.hpp"
#include "spintrack/model.hpp"

namespace spintrack {

// One Euler-Maruyama step of the normalized (innovation-form) SME at the
// given hidden-state detuning. Draws dW ~ N(0, dt), returns the
// renormalized state and the signal increment dY = Tr[X_Phi rho] dt + dW.
struct TrueStepResult {
    CMat2 rho;
    double dY;
};
TrueStepResult true_step(const CMat2& rho, double delta_n, const ModelParams& p, double dt,
                         std::mt19937_64& rng);

struct TruthRun {
    TruthTrajectory truth;
    HomodyneRecord record;
    std::vector<CMat2> rho_snapshots;  // every snapshot_stride steps, diagnostics
    std::size_t snapshot_stride = 0;
};

// Run the hidden-state sampler and the SME in lock-step. The initial spin
// state is maximally mixed; n(0) is sampled from the stationary law.
// Bit-reproducible from the seed.
TruthRun generate(const HmmSpec& spec, const ModelParams& p, std::size_t steps, double dt,
                  std::uint64_t seed, std::size_t snapshot_stride = 0);

}  // namespace spintrack
