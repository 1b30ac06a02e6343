// Fixed-size complex 2x2 matrix arithmetic plus the superoperator
// building blocks (commutator, dissipator, adjoint dissipator) used
// throughout the estimation pipeline.
#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace spintrack {

using cpx = std::complex<double>;

// Row-major 2x2 complex matrix, stack allocated. Carries density matrix
// blocks, Hamiltonians and Lindblad operators; everything in the pipeline
// lives in 2x2 blocks, so there is no dynamic dimension anywhere.
struct CMat2 {
    std::array<cpx, 4> m{};  // [ (0,0), (0,1), (1,0), (1,1) ]

    constexpr cpx& operator()(int r, int c) { return m[2 * r + c]; }
    constexpr const cpx& operator()(int r, int c) const { return m[2 * r + c]; }

    static constexpr CMat2 zero() { return {}; }
    static constexpr CMat2 identity() { return CMat2{{cpx(1), cpx(0), cpx(0), cpx(1)}}; }
    static constexpr CMat2 diag(cpx a, cpx b) { return CMat2{{a, cpx(0), cpx(0), b}}; }

    CMat2& operator+=(const CMat2& o) {
        for (int i = 0; i < 4; ++i) m[i] += o.m[i];
        return *this;
    }
    CMat2& operator-=(const CMat2& o) {
        for (int i = 0; i < 4; ++i) m[i] -= o.m[i];
        return *this;
    }
    CMat2& operator*=(cpx s) {
        for (int i = 0; i < 4; ++i) m[i] *= s;
        return *this;
    }

    friend CMat2 operator+(CMat2 a, const CMat2& b) { return a += b; }
    friend CMat2 operator-(CMat2 a, const CMat2& b) { return a -= b; }
    friend CMat2 operator*(cpx s, CMat2 a) { return a *= s; }
    friend CMat2 operator*(CMat2 a, cpx s) { return a *= s; }
    friend CMat2 operator-(const CMat2& a) { return cpx(-1) * a; }

    friend CMat2 operator*(const CMat2& a, const CMat2& b) {
        CMat2 r;
        r.m[0] = a.m[0] * b.m[0] + a.m[1] * b.m[2];
        r.m[1] = a.m[0] * b.m[1] + a.m[1] * b.m[3];
        r.m[2] = a.m[2] * b.m[0] + a.m[3] * b.m[2];
        r.m[3] = a.m[2] * b.m[1] + a.m[3] * b.m[3];
        return r;
    }

    cpx trace() const { return m[0] + m[3]; }

    CMat2 adjoint() const { return CMat2{{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])}}; }

    // Frobenius norm, used as the distance in tests and tolerances.
    double norm() const {
        double s = 0.0;
        for (const auto& z : m) s += std::norm(z);
        return std::sqrt(s);
    }

    bool is_finite() const {
        for (const auto& z : m)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    // rho <- (rho + rho^dag)/2. Applied once per integration step to keep
    // accumulated rounding from building an anti-Hermitian component.
    void hermitize() {
        m[0] = cpx(m[0].real(), 0.0);
        m[3] = cpx(m[3].real(), 0.0);
        cpx off = 0.5 * (m[1] + std::conj(m[2]));
        m[1] = off;
        m[2] = std::conj(off);
    }

    // Eigenvalues of a Hermitian 2x2 in closed form, ascending order.
    std::array<double, 2> hermitian_eigenvalues() const {
        double a = m[0].real(), d = m[3].real();
        double h = 0.5 * (a + d);
        double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m[1]));
        return {h - r, h + r};
    }
};

inline CMat2 commutator(const CMat2& a, const CMat2& b) { return a * b - b * a; }

inline CMat2 anticommutator(const CMat2& a, const CMat2& b) { return a * b + b * a; }

// D[A]rho = A rho A^dag - 1/2 (A^dag A rho + rho A^dag A)
inline CMat2 dissipator(const CMat2& a, const CMat2& rho) {
    CMat2 ad = a.adjoint();
    CMat2 ada = ad * a;
    return a * rho * ad - 0.5 * anticommutator(ada, rho);
}

// D^dag[A]E = A^dag E A - 1/2 {A^dag A, E}; vanishes on E = I.
inline CMat2 adjoint_dissipator(const CMat2& a, const CMat2& e) {
    CMat2 ad = a.adjoint();
    CMat2 ada = ad * a;
    return ad * e * a - 0.5 * anticommutator(ada, e);
}

// Pauli operators in the basis (|e>, |g>).
namespace pauli {
inline const CMat2 sigma_z{{cpx(1), cpx(0), cpx(0), cpx(-1)}};
inline const CMat2 sigma_plus{{cpx(0), cpx(1), cpx(0), cpx(0)}};
inline const CMat2 sigma_minus{{cpx(0), cpx(0), cpx(1), cpx(0)}};
inline const CMat2 excited{{cpx(1), cpx(0), cpx(0), cpx(0)}};   // |e><e|
inline const CMat2 ground{{cpx(0), cpx(0), cpx(0), cpx(1)}};    // |g><g|
}  // namespace pauli

// 4x4 complex matrix acting on vec(rho) = (r00, r01, r10, r11).
// The per-state generators are precomputed into this form once, so the
// integration loop is two matvecs per block per step.
struct Superop2 {
    std::array<cpx, 16> s{};

    // Column j is the action of `f` on the j-th basis matrix. Valid for
    // any complex-linear map on 2x2 matrices.
    template <class F>
    static Superop2 from_action(F&& f) {
        Superop2 op;
        for (int j = 0; j < 4; ++j) {
            CMat2 basis;
            basis.m[j] = cpx(1);
            CMat2 out = f(basis);
            for (int i = 0; i < 4; ++i) op.s[4 * i + j] = out.m[i];
        }
        return op;
    }

    CMat2 apply(const CMat2& x) const {
        CMat2 r;
        for (int i = 0; i < 4; ++i) {
            cpx acc = s[4 * i] * x.m[0] + s[4 * i + 1] * x.m[1] + s[4 * i + 2] * x.m[2] + s[4 * i + 3] * x.m[3];
            r.m[i] = acc;
        }
        return r;
    }
};

}  // namespace spintrack
