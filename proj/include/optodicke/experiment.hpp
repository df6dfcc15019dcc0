#pragma once

// Laboratory estimates for a membrane-in-the-middle setup and the tunnelling
// sensitivity of the membrane cat state to unequal pumping.

#include "optodicke/model.hpp"

namespace optodicke::experiment {

// Rates g and kappa are angular frequencies (rad/s) throughout this header.

// Dimensionless parameters for pump power pp.P: rates in units of omega,
// eta_a = -eta_b = eta / omega.
DimensionlessParams to_dimensionless(const PhysicalParams& pp, double g, double kappa);

struct LabEstimate {
    double lambda = 0.0;
    double lambda_c = 0.0;
    double P_c = 0.0;  // W
    double P = 0.0;    // W
    double mu_P = 0.0; // sqrt(P / P_c)
    double mu = 0.0;   // lambda / lambda_c at power P
    double eta = 0.0;  // eta / omega at power P
    double R_snr = 0.0;
    double n_tot = 0.0;
    double n_diff = 0.0; // |n_a - n_b|
    double n_c = 0.0;
    double mech_loss_W = 0.0;
    double opt_loss_W = 0.0;
};

// (omega L / omega_centre) sqrt(g m V / (2 hbar)) sqrt(1 - 1/mu_P), mu_P
// from pp.P. Rejects pp.P <= P_c.
double signal_to_noise(const PhysicalParams& pp, double g, double kappa);

// Everything at P = P_over_Pc * P_c (pp.P is ignored). Below threshold the
// broken-phase quantities are zero.
LabEstimate lab_report(const PhysicalParams& pp, double g, double kappa, double P_over_Pc);

struct WkbSplitting {
    double Omega = 0.0;  // small-oscillation frequency in a well
    double E_well = 0.0; // well bottom plus zero-point energy
    double a_turn = 0.0; // barrier turning point
    double dE_split = 0.0;
    double log10_dE_split = 0.0;
};

// Requires mu > 1 and a barrier above the well's zero-point energy.
WkbSplitting wkb_splitting(double mu, double eps0);

struct Imbalance {
    double dE_imb = 0.0;              // energy offset between the wells
    double eta_sq_diff_critical = 0.0; // eta_a^2 - eta_b^2 at which dE_imb = dE_split
    double log10_abs_eta_sq_diff_critical = 0.0;
};

// Uses eta_ref = (|eta_a| + |eta_b|)/2 for mu and eps0. Requires mu > 1, g != kappa.
Imbalance critical_imbalance(const DimensionlessParams& p);

struct PowerImbalance {
    double dP_W = 0.0;        // 0 when below the smallest double
    bool representable = true; // false when dP_W underflowed
    double log10_dP = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
};

PowerImbalance power_imbalance(const PhysicalParams& pp, double g, double kappa, double P_over_Pc);

struct CatSensitivity {
    WkbSplitting wkb;
    bool has_imbalance = true; // false at g == kappa
    Imbalance imbalance;
    bool has_power = false;
    PowerImbalance power;
};

CatSensitivity cat_sensitivity(const DimensionlessParams& p);
CatSensitivity cat_sensitivity(const PhysicalParams& pp, double g, double kappa, double P_over_Pc);

} // namespace optodicke::experiment
