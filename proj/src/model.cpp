#include "spintrack/model.hpp"

#include <stdexcept>

namespace spintrack {

ModelParams default_params() { return ModelParams{}; }

DetuningGrid DetuningGrid::uniform(double lo, double hi, int count) {
    if (count < 2 || hi <= lo) throw std::invalid_argument("DetuningGrid: need count >= 2 and hi > lo");
    DetuningGrid grid;
    grid.values.resize(count);
    double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) grid.values[i] = lo + step * i;
    return grid;
}

cpx drive_alpha(const ModelParams& p) {
    return std::sqrt(2.0 * p.kappa1) * p.beta_drive / cpx(p.kappa, p.delta_r);
}

double purcell_rate(const ModelParams& p, double delta_s) {
    double d = p.delta_r - delta_s;
    return 2.0 * p.g * p.g * p.kappa / (p.kappa * p.kappa + d * d);
}

double epsilon_s(const ModelParams& p, double delta_s) {
    double d = p.delta_r - delta_s;
    return p.g * p.g * d / (p.kappa * p.kappa + d * d);
}

CMat2 hamiltonian(const ModelParams& p, double delta_n) {
    cpx alpha = drive_alpha(p);
    CMat2 h = cpx(0.5 * delta_n) * pauli::sigma_z;
    h += cpx(p.g) * (alpha * pauli::sigma_plus + std::conj(alpha) * pauli::sigma_minus);
    h -= cpx(epsilon_s(p, delta_n)) * pauli::excited;  // sigma_+ sigma_- = |e><e|
    return h;
}

std::array<CMat2, 3> lindblads(const ModelParams& p, double delta_n) {
    return {
        cpx(std::sqrt(purcell_rate(p, delta_n))) * pauli::sigma_minus,
        cpx(std::sqrt(p.gamma_dec)) * pauli::sigma_minus,
        cpx(std::sqrt(0.5 * p.gamma_phi)) * pauli::sigma_z,
    };
}

OutputField c_out(const ModelParams& p, double delta_n) {
    double root2k1 = std::sqrt(2.0 * p.kappa1);
    cpx lowering = cpx(0.0, -1.0) * root2k1 * p.g / cpx(p.kappa, p.delta_r - delta_n);
    cpx offset = root2k1 * drive_alpha(p) - p.beta_drive;
    return {offset, lowering};
}

CMat2 meas_superop(const ModelParams& p, double delta_n, const CMat2& rho) {
    OutputField out = c_out(p, delta_n);
    cpx lo = std::polar(1.0, -p.phi_lo);
    CMat2 cop = out.offset * CMat2::identity() + out.lowering * pauli::sigma_minus;
    double root_eta = std::sqrt(p.eta);
    return root_eta * (lo * (cop * rho) + std::conj(lo) * (rho * cop.adjoint()));
}

CMat2 lindblad_rhs(const ModelParams& p, double delta_n, const CMat2& rho) {
    CMat2 h = hamiltonian(p, delta_n);
    CMat2 r = cpx(0.0, -1.0) * commutator(h, rho);
    for (const CMat2& c : lindblads(p, delta_n)) r += dissipator(c, rho);
    return r;
}

CMat2 adjoint_lindblad_rhs(const ModelParams& p, double delta_n, const CMat2& e) {
    CMat2 h = hamiltonian(p, delta_n);
    CMat2 r = cpx(0.0, 1.0) * commutator(h, e);
    for (const CMat2& c : lindblads(p, delta_n)) r += adjoint_dissipator(c, e);
    return r;
}

CMat2 adjoint_meas_superop(const ModelParams& p, double delta_n, const CMat2& e) {
    OutputField out = c_out(p, delta_n);
    cpx lo = std::polar(1.0, -p.phi_lo);
    CMat2 cop = out.offset * CMat2::identity() + out.lowering * pauli::sigma_minus;
    double root_eta = std::sqrt(p.eta);
    return root_eta * (std::conj(lo) * (cop.adjoint() * e) + lo * (e * cop));
}

}  // namespace spintrack
