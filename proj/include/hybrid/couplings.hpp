#ifndef HYBRID_COUPLINGS_HPP
#define HYBRID_COUPLINGS_HPP

#include <string>
#include <vector>

namespace hybrid::couplings {

// All frequencies and rates in this module are angular (rad/s); conversion
// to nu = omega/2pi happens only at the output layer.

using WarningLog = std::vector<std::string>;

struct MechanicalMode {
  double m_eff = 0;        // kg
  double omega_m = 0;      // rad/s
  double quality_q = 1;    // dimensionless
  double temperature = 0;  // K
  void validate() const;
};

struct ChargeQubitParams {
  double v_g = 0;      // V
  double c_gate = 0;   // F
  double c_total = 0;  // F
  double gap = 0;      // m, electrode separation
  double e_c = 0;      // J, charging energy
  double e_j = 0;      // J, Josephson energy
  double delta_ng = 0; // gate-charge offset from degeneracy
  void validate() const;
};

struct FluxQubitParams {
  double b_field = 0;  // T
  double current = 0;  // A
  double length = 0;   // m
  void validate(WarningLog* warnings = nullptr) const;
};

struct SpinParams {
  double gradient = 0;         // T/m
  double g_factor = 2.0;       // dimensionless
  double magnetic_moment = 0;  // J/T, for force estimates
  double larmor = 0;           // rad/s
  void validate() const;
};

struct DeformationParams {
  double d_e = 0;     // J
  double d_g = 0;     // J
  double z_0 = 0;     // m, defect offset from the neutral plane
  double length = 0;  // m, beam length
  void validate() const;
};

struct DirectCouplingParams {
  double m_at = 0;      // kg
  double omega_at = 0;  // rad/s
  double epsilon = 1;   // trap-curvature ratio
  double n_atoms = 1;
  void validate(WarningLog* warnings = nullptr) const;
};

struct CavityMediatedParams {
  double g_at_f = 0;    // rad/s
  double g_m_f = 0;     // rad/s
  double detuning = 0;  // rad/s
  double kappa = 0;     // rad/s
  double omega_m = 0;   // rad/s
  void validate(WarningLog* warnings = nullptr) const;
};

// x_ZPF = sqrt(hbar / 2 m Omega)
double zero_point_motion(const MechanicalMode& mode);
// Gamma_th = kB T / hbar Q
double thermal_rate(const MechanicalMode& mode);
// Gamma_M = Omega / Q
double mechanical_damping(const MechanicalMode& mode);

double lambda_electrostatic(const ChargeQubitParams& p, const MechanicalMode& mode);
double lambda_lorentz(const FluxQubitParams& p, const MechanicalMode& mode,
                      WarningLog* warnings = nullptr);
double lambda_magnetic(const SpinParams& p, const MechanicalMode& mode);
double lambda_deformation(const DeformationParams& p, const MechanicalMode& mode);
double lambda_direct(const DirectCouplingParams& p, const MechanicalMode& mode,
                     WarningLog* warnings = nullptr);
double lambda_collective(const DirectCouplingParams& p, const MechanicalMode& mode,
                         WarningLog* warnings = nullptr);

// phonon-number dispersive shift, chi = 2 lambda^2 (E_J/hbar) / ((E_J/hbar)^2 - Omega^2)
double dispersive_shift(double e_j, double lambda, double omega_m);

// F = mu * grad B
double mrfm_force(double moment, double gradient);

double lambda_cavity_mediated(const CavityMediatedParams& p, WarningLog* warnings = nullptr);

double collective_coupling(double g_single, double n_atoms);
double cooperativity(double g_collective, double kappa, double gamma_a);

struct MeritReport {
  double lambda = 0;
  double lambda_t2 = 0;         // lambda * T2
  double lambda_over_thermal = 0;  // lambda / Gamma_th
  double gamma_th = 0;
  bool strong_coupling = false;  // both ratios > 1
};

MeritReport figure_of_merit(double lambda, double t2, const MechanicalMode& mode);

}  // namespace hybrid::couplings

#endif
