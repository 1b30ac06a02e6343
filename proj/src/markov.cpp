#include "spintrack/markov.hpp"

#include <cmath>
#include <stdexcept>

namespace spintrack {

JumpRates rates(const HmmSpec& spec, int n) {
    if (n < 0 || n > spec.n_fleas) throw std::out_of_range("rates: state index out of range");
    return {spec.flea_rate * (spec.n_fleas - n), spec.flea_rate * n};
}

std::vector<double> stationary(const HmmSpec& spec) {
    const int n = spec.n_fleas;
    std::vector<double> pi(spec.states());
    double lg_n = std::lgamma(n + 1.0);
    for (int k = 0; k <= n; ++k) {
        double lg = lg_n - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0);
        pi[k] = std::exp(lg);
    }
    return pi;
}

double stationary_detuning_std(const HmmSpec& spec) {
    // Binomial std sqrt(N)/2 in index units, scaled by the grid spacing.
    return 0.5 * std::sqrt(static_cast<double>(spec.n_fleas)) * spec.grid.spacing();
}

int sample_stationary(const HmmSpec& spec, std::mt19937_64& rng) {
    std::binomial_distribution<int> dist(spec.n_fleas, 0.5);
    return dist(rng);
}

TruthTrajectory sample_trajectory(const HmmSpec& spec, int n0, std::size_t steps, double dt,
                                  std::mt19937_64& rng) {
    if (n0 < 0 || n0 > spec.n_fleas) throw std::out_of_range("sample_trajectory: bad initial state");
    double max_total = spec.flea_rate * spec.n_fleas;
    if (dt * max_total >= 0.1)
        throw std::invalid_argument("sample_trajectory: dt too large for first-order jump probabilities");

    TruthTrajectory traj;
    traj.dt = dt;
    traj.states.resize(steps + 1);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int n = n0;
    traj.states[0] = n;
    for (std::size_t k = 1; k <= steps; ++k) {
        JumpRates r = rates(spec, n);
        double u = uni(rng);
        if (u < r.up * dt)
            ++n;
        else if (u < (r.up + r.down) * dt)
            --n;
        traj.states[k] = n;
    }
    return traj;
}

JumpOp jump_op(const HmmSpec& spec, int n, int n2) {
    if (n < 0 || n > spec.n_fleas || n2 < 0 || n2 > spec.n_fleas)
        throw std::out_of_range("jump_op: state index out of range");
    if (n2 != n + 1 && n2 != n - 1) throw std::invalid_argument("jump_op: only nearest-neighbor jumps");
    JumpRates r = rates(spec, n);
    return {n, n2, n2 == n + 1 ? r.up : r.down};
}

void mix_step(BlockState& state, const HmmSpec& spec, double dt, MixDirection dir) {
    const int m = state.size();
    if (m != spec.states()) throw std::invalid_argument("mix_step: block count does not match HMM");
    if (dt == 0.0 || spec.flea_rate == 0.0) return;

    std::vector<CMat2> old = state.blocks;
    for (int n = 0; n < m; ++n) {
        JumpRates r = rates(spec, n);
        CMat2 d;
        if (dir == MixDirection::forward) {
            // D[I (x) J_{n n'}] moves whole blocks: gain from neighbors,
            // loss at the block's own total out-rate.
            if (n > 0) d += cpx(rates(spec, n - 1).up) * old[n - 1];
            if (n < m - 1) d += cpx(rates(spec, n + 1).down) * old[n + 1];
            d -= cpx(r.up + r.down) * old[n];
        } else {
            // Adjoint: E_n relaxes towards the blocks it jumps to.
            if (n < m - 1) d += cpx(r.up) * (old[n + 1] - old[n]);
            if (n > 0) d += cpx(r.down) * (old[n - 1] - old[n]);
        }
        state.blocks[n] += cpx(dt) * d;
    }
}

}  // namespace spintrack
