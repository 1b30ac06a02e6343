#include <doctest.h>

#include <random>

#include "spintrack/qmat.hpp"
#include "test_support.hpp"

using namespace spintrack;
using namespace spintrack::testing;

TEST_CASE("basic arithmetic against hand-computed products") {
    CMat2 a{{cpx(1, 0), cpx(2, 0), cpx(3, 0), cpx(4, 0)}};
    CMat2 b{{cpx(0, 1), cpx(1, 0), cpx(0, 0), cpx(0, -1)}};
    CMat2 ab = a * b;
    CHECK(ab(0, 0) == cpx(0, 1));
    CHECK(ab(0, 1) == cpx(1, -2));
    CHECK(ab(1, 0) == cpx(0, 3));
    CHECK(ab(1, 1) == cpx(3, -4));
    CHECK(a.trace() == cpx(5, 0));
    CHECK((a + b - b - a).norm() == doctest::Approx(0.0));
    CHECK((cpx(2) * a)(1, 1) == cpx(8, 0));
}

TEST_CASE("adjoint conjugate-transposes and is an involution") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 20; ++i) {
        CMat2 a = random_matrix(rng);
        CMat2 ad = a.adjoint();
        CHECK(ad(0, 1) == std::conj(a(1, 0)));
        CHECK(ad(1, 0) == std::conj(a(0, 1)));
        CHECK((ad.adjoint() - a).norm() < 1e-15);
        // Tr(A^dag A) = ||A||_F^2
        CHECK(trace_product(ad, a).real() == doctest::Approx(a.norm() * a.norm()));
    }
}

TEST_CASE("pauli algebra identities") {
    using namespace pauli;
    CHECK((sigma_plus * sigma_minus - excited).norm() == 0.0);
    CHECK((sigma_minus * sigma_plus - ground).norm() == 0.0);
    CHECK((commutator(sigma_plus, sigma_minus) - sigma_z).norm() == 0.0);
    CHECK((sigma_z * sigma_z - CMat2::identity()).norm() == 0.0);
    CHECK((excited + ground - CMat2::identity()).norm() == 0.0);
    CHECK(sigma_z.trace() == cpx(0));
    CHECK((anticommutator(sigma_plus, sigma_minus) - CMat2::identity()).norm() == 0.0);
}

TEST_CASE("hermitize projects onto the Hermitian part") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20; ++i) {
        CMat2 a = random_matrix(rng);
        CMat2 sym = 0.5 * (a + a.adjoint());
        CMat2 h = a;
        h.hermitize();
        CHECK((h - sym).norm() < 1e-15);
        CHECK((h - h.adjoint()).norm() == 0.0);
    }
}

TEST_CASE("hermitian eigenvalues in closed form") {
    CMat2 d = CMat2::diag(cpx(3), cpx(-1));
    auto ev = d.hermitian_eigenvalues();
    CHECK(ev[0] == doctest::Approx(-1.0));
    CHECK(ev[1] == doctest::Approx(3.0));

    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        CMat2 h = random_hermitian(rng);
        auto e = h.hermitian_eigenvalues();
        CHECK(e[0] <= e[1]);
        CHECK(e[0] + e[1] == doctest::Approx(h.trace().real()));
        // det = product of eigenvalues
        cpx det = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
        CHECK(e[0] * e[1] == doctest::Approx(det.real()).epsilon(1e-9));
    }
}

TEST_CASE("dissipator is trace-free and Hermiticity-preserving") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        CMat2 a = random_matrix(rng);
        CMat2 rho = random_hermitian(rng);
        CMat2 d = dissipator(a, rho);
        CHECK(std::abs(d.trace()) < 1e-12);
        CHECK((d - d.adjoint()).norm() < 1e-12);
    }
}

TEST_CASE("dissipator / adjoint dissipator duality on random triples") {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 100; ++i) {
        CMat2 a = random_matrix(rng);
        CMat2 rho = random_matrix(rng);
        CMat2 e = random_matrix(rng);
        cpx lhs = trace_product(dissipator(a, rho), e);
        cpx rhs = trace_product(rho, adjoint_dissipator(a, e));
        CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("adjoint dissipator annihilates the identity") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 50; ++i) {
        CMat2 a = random_matrix(rng);
        CHECK(adjoint_dissipator(a, CMat2::identity()).norm() < 1e-13);
    }
}

TEST_CASE("dissipator decay of the excited state under sigma_minus") {
    // D[sqrt(r) sigma_-]|e><e| = r (|g><g| - |e><e|)
    double r = 0.37;
    CMat2 c = cpx(std::sqrt(r)) * pauli::sigma_minus;
    CMat2 d = dissipator(c, pauli::excited);
    CHECK((d - cpx(r) * (pauli::ground - pauli::excited)).norm() < 1e-14);
    // coherences decay at r/2
    CMat2 coh{{cpx(0), cpx(1), cpx(0), cpx(0)}};
    CHECK((dissipator(c, coh) + cpx(0.5 * r) * coh).norm() < 1e-14);
}

TEST_CASE("superoperator capture reproduces arbitrary linear maps") {
    std::mt19937_64 rng(29);
    CMat2 h = random_hermitian(rng);
    CMat2 c = random_matrix(rng);
    auto f = [&](const CMat2& x) {
        return cpx(0, -1) * commutator(h, x) + dissipator(c, x);
    };
    Superop2 op = Superop2::from_action(f);
    for (int i = 0; i < 50; ++i) {
        CMat2 x = random_matrix(rng);
        CHECK((op.apply(x) - f(x)).norm() < 1e-12 * (1.0 + x.norm()));
    }
    // linearity of apply
    CMat2 x = random_matrix(rng), y = random_matrix(rng);
    cpx s(0.3, -1.7);
    CHECK((op.apply(x + s * y) - op.apply(x) - s * op.apply(y)).norm() < 1e-12);
}

TEST_CASE("superoperator of the identity map is the identity") {
    Superop2 id = Superop2::from_action([](const CMat2& x) { return x; });
    std::mt19937_64 rng(31);
    CMat2 x = random_matrix(rng);
    CHECK((id.apply(x) - x).norm() == 0.0);
}
