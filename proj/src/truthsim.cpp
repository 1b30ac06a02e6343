#include "spintrack/truthsim.hpp"

#include <cmath>
#include <stdexcept>

namespace spintrack {

namespace {

CMat2 normalized(CMat2 rho) {
    rho.hermitize();
    double tr = rho.trace().real();
    if (!(tr > 1e-300) || !std::isfinite(tr)) throw std::runtime_error("true_step: trace underflow");
    rho *= cpx(1.0 / tr);
    return rho;
}

}  // namespace

TrueStepResult true_step(const CMat2& rho, double delta_n, const ModelParams& p, double dt,
                         std::mt19937_64& rng) {
    if (!rho.is_finite()) throw std::runtime_error("true_step: non-finite state");
    std::normal_distribution<double> normal(0.0, std::sqrt(dt));
    double dW = normal(rng);
    CMat2 x = meas_superop(p, delta_n, rho);
    double dY = x.trace().real() * dt + dW;
    CMat2 next = rho + cpx(dt) * lindblad_rhs(p, delta_n, rho) + cpx(dW) * x;
    return {normalized(next), dY};
}

TruthRun generate(const HmmSpec& spec, const ModelParams& p, std::size_t steps, double dt,
                  std::uint64_t seed, std::size_t snapshot_stride) {
    if (!spec.valid()) throw std::invalid_argument("generate: invalid HmmSpec");
    if (!p.valid()) throw std::invalid_argument("generate: invalid ModelParams");

    std::mt19937_64 rng(seed);
    TruthRun run;
    int n0 = sample_stationary(spec, rng);
    run.truth = sample_trajectory(spec, n0, steps, dt, rng);
    run.record.dt = dt;
    run.record.seed = seed;
    run.record.increments.resize(steps);
    run.snapshot_stride = snapshot_stride;

    // Precompute per-state generators once; the loop is then two matvecs.
    const int m = spec.states();
    std::vector<Superop2> det(m), meas(m);
    for (int n = 0; n < m; ++n) {
        double dn = spec.grid.values[n];
        det[n] = Superop2::from_action([&](const CMat2& x) { return lindblad_rhs(p, dn, x); });
        meas[n] = Superop2::from_action([&](const CMat2& x) { return meas_superop(p, dn, x); });
    }

    std::normal_distribution<double> normal(0.0, std::sqrt(dt));
    CMat2 rho = cpx(0.5) * CMat2::identity();  // maximally mixed start
    if (snapshot_stride > 0) run.rho_snapshots.push_back(rho);
    for (std::size_t k = 0; k < steps; ++k) {
        int n = run.truth.states[k];
        CMat2 x = meas[n].apply(rho);
        double dW = normal(rng);
        run.record.increments[k] = x.trace().real() * dt + dW;
        rho = normalized(rho + cpx(dt) * det[n].apply(rho) + cpx(dW) * x);
        if (snapshot_stride > 0 && (k + 1) % snapshot_stride == 0) run.rho_snapshots.push_back(rho);
    }
    return run;
}

}  // namespace spintrack
