#pragma once

// Parameter containers and the closed-form critical quantities.
//
// The rest of the library works in dimensionless units: rates in units of the
// membrane frequency omega, lengths in units of sqrt(hbar / (m omega)). This
// header is the only place where laboratory (SI) quantities are converted.

#include "optodicke/constants.hpp"

namespace optodicke {

struct DimensionlessParams {
    double g = 1.0;      // photon tunnelling rate through the membrane
    double kappa = 1.0;  // cavity decay rate
    double eta_a = 1.0;  // pump amplitude, right mode
    double eta_b = -1.0; // pump amplitude, left mode
    double lambda = 1.0; // light-membrane coupling
    double V = 100.0;    // Kac size parameter
    double delta = 0.0;  // cavity-pump detuning
    double gamma = 0.0;  // membrane damping rate

    // eta_a == -eta_b: the pumping pattern that admits symmetry breaking.
    bool balanced_antisymmetric() const { return eta_a == -eta_b; }
    bool balanced_symmetric() const { return eta_a == eta_b; }
    // |eta_a| == |eta_b|: the Z2 parity of the driven Hamiltonian survives.
    bool parity_symmetric() const { return balanced_antisymmetric() || balanced_symmetric(); }

    // Pump amplitude used by the closed forms (eta_a = -eta_b = eta).
    double eta() const;

    void validate() const;
};

struct PhysicalParams {
    double L = 0.067;                 // cavity length (m)
    double m = 5e-14;                 // motional mass (kg)
    double omega = 2.0 * constants::pi * 1e5;                   // membrane angular frequency (rad/s)
    double omega_centre = 2.0 * constants::pi * constants::c / 1064e-9; // pump frequency (rad/s)
    double R_membrane = 0.5;          // membrane intensity reflectivity
    double P = 1e-3;                  // pump power (W)
    double Q = 1e6;                   // membrane quality factor
    double V = 1.0;                   // Kac size parameter

    void validate() const;

    // Silicon-nitride membrane in a 6.7 cm cavity pumped at 1064 nm,
    // omega = 2 pi x 100 kHz.
    static PhysicalParams reference_membrane();
};

struct CriticalSet {
    double lambda_c = 0.0;
    double lambda_c_detuned = 0.0;
    double mu = 0.0;       // lambda / lambda_c
    double epsilon0 = 0.0; // 2 g eta^2 V / (g^2 + kappa^2)
};

// g = (c / L) sqrt((1 - R) / R) in rad/s, from a delta-function membrane model.
double coupling_from_reflectivity(const PhysicalParams& p);

// lambda = (2 / L) (omega_centre / omega) sqrt(hbar / (m omega)).
double lambda_from_physical(const PhysicalParams& p);

// eta = sqrt(kappa P / (hbar omega_centre)); kappa and the result in rad/s.
double eta_from_power(double P, double kappa, double omega_centre);

// lambda_c = (g^2 + kappa^2) / (2 eta sqrt(g)).
double critical_coupling(double g, double kappa, double eta);

// Critical coupling for a detuned pump. Throws ValidationError when
// g + delta <= 0, where the transition is lost.
double detuned_critical_coupling(double g, double kappa, double eta, double delta);

// Pump power at which lambda_c equals the physical lambda. g and kappa are
// dimensional (rad/s).
double critical_power(const PhysicalParams& p, double g, double kappa);

double epsilon0(const DimensionlessParams& p);
double critical_coupling(const DimensionlessParams& p);
double mu(const DimensionlessParams& p);
CriticalSet critical_set(const DimensionlessParams& p);

// Copy of p with lambda set so that lambda / lambda_c == mu.
DimensionlessParams at_mu(DimensionlessParams p, double mu);

} // namespace optodicke
