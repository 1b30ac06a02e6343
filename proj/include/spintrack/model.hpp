// Physical operators of the adiabatically eliminated spin-in-cavity probe:
// detuning-dependent Hamiltonian, Lindblad channels, output field operator
// and the homodyne measurement superoperator.
#pragma once

#include <vector>

#include "spintrack/qmat.hpp"

namespace spintrack {

// All rates in units of the reference rate gamma, amplitudes in sqrt(gamma).
struct ModelParams {
    double gamma = 1.0;        // reference rate, sets the unit system
    double g = 2.0;            // spin-cavity coupling
    double kappa = 10.0;       // total cavity field decay rate
    double kappa1 = 10.0;      // output-coupling part of kappa
    double delta_r = 0.0;      // cavity-drive detuning
    double beta_drive = 1.0;   // coherent drive amplitude
    double eta = 1.0;          // homodyne detection efficiency, (0,1]
    // Local oscillator phase. At delta_r = 0 the phi = 0 quadrature is an even
    // function of the spin detuning (blind to its sign); pi/2 is the odd,
    // informative quadrature, so it is the default.
    double phi_lo = 1.5707963267948966;
    double gamma_dec = 1.0;    // spin decay outside the cavity channel
    double gamma_phi = 1.0;    // spin dephasing rate
    double delta_s0 = 0.0;     // bare spin-drive detuning at zero field
    double zeeman_coupling = 1.0;  // lumped g_q * mu, for reporting B in field units

    bool valid() const {
        return gamma > 0.0 && kappa > 0.0 && kappa1 > 0.0 && kappa >= kappa1 && eta > 0.0 && eta <= 1.0;
    }
    // Bad-cavity regime check; the adiabatic elimination assumes g << kappa.
    bool bad_cavity_ok() const { return g <= 0.5 * kappa; }
};

// Reference parameter set; eta and phi_lo are config-exposed defaults.
ModelParams default_params();

// Uniformly spaced hidden-state detunings, symmetric about the midpoint.
struct DetuningGrid {
    std::vector<double> values;

    static DetuningGrid uniform(double lo, double hi, int count);
    int size() const { return static_cast<int>(values.size()); }
    double spacing() const { return values.size() > 1 ? values[1] - values[0] : 0.0; }
};

// alpha = sqrt(2 kappa1) beta / (kappa + i delta_r), the eliminated
// intracavity amplitude.
cpx drive_alpha(const ModelParams& p);

// gamma_p = 2 g^2 kappa / (kappa^2 + (delta_r - delta_s)^2)
double purcell_rate(const ModelParams& p, double delta_s);

// eps_s = g^2 (delta_r - delta_s) / (kappa^2 + (delta_r - delta_s)^2)
double epsilon_s(const ModelParams& p, double delta_s);

// H_n = (delta_n/2) sigma_z + g(alpha sigma_+ + alpha* sigma_-)
//       - eps_s(delta_n) sigma_+ sigma_-
// delta_n is the full field-shifted detuning (delta_s0 assumed folded in).
CMat2 hamiltonian(const ModelParams& p, double delta_n);

// The three spin-space damping channels: Purcell decay, bare decay,
// dephasing. The Purcell rate is re-evaluated at each grid detuning.
std::array<CMat2, 3> lindblads(const ModelParams& p, double delta_n);

// c_out = offset * I + lowering * sigma_-, kept in affine form since the
// scalar offset enters traces and the operator part enters matrix products.
struct OutputField {
    cpx offset;    // sqrt(2 kappa1) alpha - beta
    cpx lowering;  // -i sqrt(2 kappa1) g / (kappa + i(delta_r - delta_s))
};
OutputField c_out(const ModelParams& p, double delta_n);

// X_Phi rho = sqrt(eta) (c_out e^{-i Phi} rho + rho c_out^dag e^{i Phi})
CMat2 meas_superop(const ModelParams& p, double delta_n, const CMat2& rho);

// Deterministic part of the master equation at one grid detuning:
// L rho = -i[H, rho] + sum_i D[c_i] rho
CMat2 lindblad_rhs(const ModelParams& p, double delta_n, const CMat2& rho);

// Adjoint generator and adjoint measurement term for the backward pass:
// L^dag E = i[H, E] + sum_i D^dag[c_i] E
// X^dag E = sqrt(eta) (e^{i Phi} c_out^dag E + E c_out e^{-i Phi})
CMat2 adjoint_lindblad_rhs(const ModelParams& p, double delta_n, const CMat2& e);
CMat2 adjoint_meas_superop(const ModelParams& p, double delta_n, const CMat2& e);

}  // namespace spintrack
