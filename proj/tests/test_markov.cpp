#include <doctest.h>

#include <cmath>
#include <random>

#include "spintrack/markov.hpp"
#include "test_support.hpp"

using namespace spintrack;
using namespace spintrack::testing;

TEST_CASE("jump rates at the boundaries and the midpoint") {
    HmmSpec spec;
    CHECK(spec.valid());
    double p = spec.flea_rate;
    JumpRates r0 = rates(spec, 0);
    CHECK(r0.up == doctest::Approx(24.0 * p));
    CHECK(r0.down == 0.0);
    JumpRates rN = rates(spec, 24);
    CHECK(rN.up == 0.0);
    CHECK(rN.down == doctest::Approx(24.0 * p));
    JumpRates rm = rates(spec, 12);
    CHECK(rm.up == doctest::Approx(12.0 * p));
    CHECK(rm.down == doctest::Approx(12.0 * p));
    // mirror symmetry n <-> N - n
    for (int n = 0; n <= 24; ++n) {
        CHECK(rates(spec, n).up == doctest::Approx(rates(spec, 24 - n).down));
    }
    CHECK_THROWS(rates(spec, -1));
    CHECK_THROWS(rates(spec, 25));
}

TEST_CASE("stationary law is the symmetric binomial") {
    HmmSpec spec;
    std::vector<double> pi = stationary(spec);
    REQUIRE(pi.size() == 25);
    double total = 0.0, mean = 0.0, second = 0.0;
    for (int n = 0; n < 25; ++n) {
        total += pi[n];
        mean += n * pi[n];
        second += n * n * pi[n];
        CHECK(pi[n] == doctest::Approx(pi[24 - n]).epsilon(1e-12));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(second - mean * mean == doctest::Approx(6.0).epsilon(1e-12));  // N/4
    // explicit binomial coefficient check
    CHECK(pi[0] == doctest::Approx(std::pow(0.5, 24)).epsilon(1e-12));
    CHECK(pi[12] == doctest::Approx(2704156.0 * std::pow(0.5, 24)).epsilon(1e-12));
    // detailed balance pins the law to the rates
    for (int n = 0; n < 24; ++n)
        CHECK(pi[n] * rates(spec, n).up ==
              doctest::Approx(pi[n + 1] * rates(spec, n + 1).down).epsilon(1e-12));
}

TEST_CASE("stationary spread in detuning units") {
    HmmSpec spec;
    // sqrt(N)/2 * spacing = sqrt(24)/2 * (4/24) = 1/sqrt(6)
    CHECK(stationary_detuning_std(spec) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-12));
    CHECK(stationary_detuning_std(spec) == doctest::Approx(0.408).epsilon(1e-3));
    // agrees with the second moment of stationary() on the grid
    std::vector<double> pi = stationary(spec);
    double m = 0.0, s = 0.0;
    for (int n = 0; n < spec.states(); ++n) {
        m += pi[n] * spec.grid.values[n];
        s += pi[n] * spec.grid.values[n] * spec.grid.values[n];
    }
    CHECK(std::sqrt(s - m * m) == doctest::Approx(stationary_detuning_std(spec)).epsilon(1e-12));
}

TEST_CASE("stationary sampler matches the binomial law") {
    HmmSpec spec;
    std::mt19937_64 rng(101);
    std::vector<std::size_t> counts(spec.states(), 0);
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) ++counts[sample_stationary(spec, rng)];
    double p = chi_square_pvalue(counts, stationary(spec));
    CHECK(p > 1e-4);
}

TEST_CASE("trajectory sampler basics") {
    HmmSpec spec;
    std::mt19937_64 rng(103);

    SUBCASE("zero rate freezes the chain") {
        HmmSpec frozen = spec;
        frozen.flea_rate = 0.0;
        TruthTrajectory t = sample_trajectory(frozen, 7, 1000, 0.05, rng);
        for (int n : t.states) CHECK(n == 7);
    }

    SUBCASE("moves are nearest-neighbor and in range") {
        TruthTrajectory t = sample_trajectory(spec, 12, 200000, 0.05, rng);
        REQUIRE(t.states.size() == 200001);
        for (std::size_t k = 1; k < t.states.size(); ++k) {
            CHECK(std::abs(t.states[k] - t.states[k - 1]) <= 1);
            CHECK(t.states[k] >= 0);
            CHECK(t.states[k] <= 24);
        }
    }

    SUBCASE("deterministic from the seed") {
        std::mt19937_64 r1(7), r2(7);
        TruthTrajectory a = sample_trajectory(spec, 12, 5000, 0.05, r1);
        TruthTrajectory b = sample_trajectory(spec, 12, 5000, 0.05, r2);
        CHECK(a.states == b.states);
    }

    SUBCASE("rejects too-coarse steps") {
        CHECK_THROWS(sample_trajectory(spec, 12, 10, 0.3, rng));
        CHECK_THROWS(sample_trajectory(spec, -1, 10, 0.05, rng));
    }
}

TEST_CASE("long trajectory occupancy matches the stationary law") {
    HmmSpec spec;
    std::mt19937_64 rng(107);
    const double dt = 0.1;  // max total rate 0.48, dt * rate < 0.1
    const std::size_t steps = 1000000;
    TruthTrajectory t = sample_trajectory(spec, 12, steps, dt, rng);
    // thin to ~5 correlation times (tau_c = 1/(2p) = 25) for near-iid samples
    const std::size_t thin = static_cast<std::size_t>(125.0 / dt);
    std::vector<std::size_t> counts(spec.states(), 0);
    for (std::size_t k = thin; k <= steps; k += thin) ++counts[t.states[k]];
    double p = chi_square_pvalue(counts, stationary(spec));
    CHECK(p > 0.01);
}

TEST_CASE("autocorrelation time of the chain is 1/(2p)") {
    HmmSpec spec;
    std::mt19937_64 rng(109);
    const double dt = 0.1;
    const std::size_t steps = 2000000;  // T = 2e5, 8000 correlation times
    TruthTrajectory t = sample_trajectory(spec, 12, steps, dt, rng);
    const std::size_t lag = static_cast<std::size_t>(25.0 / dt);  // one tau_c
    double mean = 0.0;
    for (int n : t.states) mean += n;
    mean /= t.states.size();
    double c0 = 0.0, cl = 0.0;
    for (std::size_t k = 0; k + lag < t.states.size(); ++k) {
        double a = t.states[k] - mean, b = t.states[k + lag] - mean;
        c0 += a * a;
        cl += a * b;
    }
    // exact lag autocorrelation exp(-2 p tau) = 1/e at tau = 1/(2p)
    CHECK(std::abs(cl / c0 - std::exp(-1.0)) < 0.05);
}

TEST_CASE("jump operator descriptors") {
    HmmSpec spec;
    JumpOp up = jump_op(spec, 3, 4);
    CHECK(up.source == 3);
    CHECK(up.target == 4);
    CHECK(up.rate == doctest::Approx(spec.flea_rate * 21.0));
    JumpOp down = jump_op(spec, 3, 2);
    CHECK(down.rate == doctest::Approx(spec.flea_rate * 3.0));
    CHECK_THROWS(jump_op(spec, 3, 5));
    CHECK_THROWS(jump_op(spec, 3, 3));
    CHECK_THROWS(jump_op(spec, 25, 24));
}

TEST_CASE("forward mixing reduces to the classical rate equation on scalar blocks") {
    HmmSpec spec;
    std::mt19937_64 rng(113);
    std::vector<double> p = stationary(spec);
    // perturb away from stationarity
    p[3] += 0.05;
    p[20] += 0.02;
    double total = 0.0;
    for (double x : p) total += x;
    for (double& x : p) x /= total;

    BlockState state;
    for (double w : p) state.blocks.push_back(cpx(0.5 * w) * CMat2::identity());
    const double dt = 0.05;
    for (int it = 0; it < 50; ++it) {
        mix_step(state, spec, dt, MixDirection::forward);
        p = classical_rate_step(p, spec, dt);
    }
    for (int n = 0; n < spec.states(); ++n)
        CHECK(state.blocks[n].trace().real() == doctest::Approx(p[n]).epsilon(1e-12));
}

TEST_CASE("forward mixing conserves the total trace of arbitrary blocks") {
    HmmSpec spec;
    std::mt19937_64 rng(127);
    BlockState state;
    for (int n = 0; n < spec.states(); ++n) state.blocks.push_back(random_matrix(rng));
    cpx before;
    for (const CMat2& b : state.blocks) before += b.trace();
    mix_step(state, spec, 0.05, MixDirection::forward);
    cpx after;
    for (const CMat2& b : state.blocks) after += b.trace();
    CHECK(std::abs(before - after) < 1e-12);
}

TEST_CASE("backward mixing fixes identity blocks exactly") {
    HmmSpec spec;
    BlockState e = BlockState::uniform_identity(spec.states());
    for (int it = 0; it < 20; ++it) mix_step(e, spec, 0.05, MixDirection::backward);
    for (const CMat2& b : e.blocks) CHECK((b - CMat2::identity()).norm() == 0.0);
}

TEST_CASE("backward mixing is the exact adjoint of forward mixing") {
    HmmSpec spec;
    std::mt19937_64 rng(131);
    BlockState rho, e;
    for (int n = 0; n < spec.states(); ++n) {
        rho.blocks.push_back(random_matrix(rng));
        e.blocks.push_back(random_matrix(rng));
    }
    BlockState rho2 = rho, e2 = e;
    const double dt = 0.07;
    mix_step(rho2, spec, dt, MixDirection::forward);
    mix_step(e2, spec, dt, MixDirection::backward);
    cpx lhs, rhs;
    for (int n = 0; n < spec.states(); ++n) {
        lhs += (rho2.blocks[n] * e.blocks[n]).trace();
        rhs += (rho.blocks[n] * e2.blocks[n]).trace();
    }
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
}

TEST_CASE("spec validation") {
    HmmSpec spec;
    spec.n_fleas = 10;  // grid no longer matches
    CHECK_FALSE(spec.valid());
    spec.grid = DetuningGrid::uniform(-2.0, 2.0, 11);
    CHECK(spec.valid());
    spec.flea_rate = -0.1;
    CHECK_FALSE(spec.valid());
}
