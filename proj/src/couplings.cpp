#include "hybrid/couplings.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hybrid/constants.hpp"
#include "hybrid/errors.hpp"

namespace hybrid::couplings {

namespace c = hybrid::constants;

namespace {
void warn(WarningLog* log, const std::string& msg) {
  if (log) log->push_back(msg);
}
}  // namespace

void MechanicalMode::validate() const {
  if (m_eff <= 0) throw std::invalid_argument("MechanicalMode: m_eff must be > 0");
  if (omega_m <= 0) throw std::invalid_argument("MechanicalMode: omega_m must be > 0");
  if (quality_q < 1) throw std::invalid_argument("MechanicalMode: Q must be >= 1");
  if (temperature < 0) throw std::invalid_argument("MechanicalMode: temperature must be >= 0");
}

void ChargeQubitParams::validate() const {
  if (c_gate > c_total) throw std::invalid_argument("ChargeQubitParams: C_g must be <= C_total");
  if (gap <= 0) throw std::invalid_argument("ChargeQubitParams: gap must be > 0");
  // e_j = 0 is the closed-junction limit (pure charge states)
  if (e_c <= 0 || e_j < 0)
    throw std::invalid_argument("ChargeQubitParams: E_C must be > 0 and E_J >= 0");
}

void FluxQubitParams::validate(WarningLog* warnings) const {
  if (b_field < 0 || current < 0 || length <= 0)
    throw std::invalid_argument("FluxQubitParams: fields must be positive");
  if (b_field > 10e-3)
    warn(warnings, "flux qubit: B exceeds 10 mT, above typical superconductor critical field");
}

void SpinParams::validate() const {
  if (gradient < 0) throw std::invalid_argument("SpinParams: gradient must be >= 0");
}

void DeformationParams::validate() const {
  if (length <= 0) throw std::invalid_argument("DeformationParams: length must be > 0");
  if (std::abs(z_0) > length / 2)
    throw std::invalid_argument("DeformationParams: |z_0| must be <= length/2");
}

void DirectCouplingParams::validate(WarningLog* warnings) const {
  if (m_at <= 0 || omega_at <= 0)
    throw std::invalid_argument("DirectCouplingParams: m_at and omega_at must be > 0");
  if (epsilon < 0) throw std::invalid_argument("DirectCouplingParams: epsilon must be >= 0");
  if (n_atoms < 1) throw std::invalid_argument("DirectCouplingParams: n_atoms must be >= 1");
  if (epsilon > 1)
    warn(warnings, "direct coupling: epsilon > 1 requires compensated trap engineering");
}

void CavityMediatedParams::validate(WarningLog* warnings) const {
  if (kappa <= 0) throw std::invalid_argument("CavityMediatedParams: kappa must be > 0");
  double g = std::max(std::abs(g_at_f), std::abs(g_m_f));
  if (g > 0 && std::abs(detuning) < 10 * g)
    warn(warnings, "cavity-mediated coupling: adiabatic elimination assumes |Delta| >> g");
}

double zero_point_motion(const MechanicalMode& mode) {
  mode.validate();
  return std::sqrt(c::hbar / (2.0 * mode.m_eff * mode.omega_m));
}

double thermal_rate(const MechanicalMode& mode) {
  mode.validate();
  return c::boltzmann * mode.temperature / (c::hbar * mode.quality_q);
}

double mechanical_damping(const MechanicalMode& mode) {
  mode.validate();
  return mode.omega_m / mode.quality_q;
}

double lambda_electrostatic(const ChargeQubitParams& p, const MechanicalMode& mode) {
  p.validate();
  double x = zero_point_motion(mode);
  return c::elementary_charge * p.v_g * (p.c_gate / p.c_total) * x / (p.gap * c::hbar);
}

double lambda_lorentz(const FluxQubitParams& p, const MechanicalMode& mode, WarningLog* warnings) {
  p.validate(warnings);
  double x = zero_point_motion(mode);
  return p.b_field * p.current * p.length * x / c::hbar;
}

double lambda_magnetic(const SpinParams& p, const MechanicalMode& mode) {
  p.validate();
  double x = zero_point_motion(mode);
  return p.g_factor * c::bohr_magneton * x * p.gradient / (2.0 * c::hbar);
}

double lambda_deformation(const DeformationParams& p, const MechanicalMode& mode) {
  p.validate();
  double x = zero_point_motion(mode);
  return (p.d_e - p.d_g) * p.z_0 * x / (p.length * p.length * c::hbar);
}

double lambda_direct(const DirectCouplingParams& p, const MechanicalMode& mode,
                     WarningLog* warnings) {
  p.validate(warnings);
  mode.validate();
  if (std::abs(p.omega_at - mode.omega_m) > 0.1 * mode.omega_m)
    warn(warnings, "direct coupling: trap and resonator detuned by more than 10%, "
                   "resonant formula is approximate");
  return p.epsilon * (p.omega_at / 2.0) * std::sqrt(p.m_at / mode.m_eff);
}

double lambda_collective(const DirectCouplingParams& p, const MechanicalMode& mode,
                         WarningLog* warnings) {
  return lambda_direct(p, mode, warnings) * std::sqrt(p.n_atoms);
}

double dispersive_shift(double e_j, double lambda, double omega_m) {
  double ej_freq = e_j / c::hbar;
  if (std::abs(ej_freq - omega_m) < 1e-6 * std::abs(ej_freq))
    throw precondition_error("dispersive_shift: E_J/hbar at the resonance pole Omega_M");
  return 2.0 * lambda * lambda * ej_freq / (ej_freq * ej_freq - omega_m * omega_m);
}

double mrfm_force(double moment, double gradient) { return moment * gradient; }

double lambda_cavity_mediated(const CavityMediatedParams& p, WarningLog* warnings) {
  p.validate(warnings);
  double gg = 2.0 * p.g_at_f * p.g_m_f;
  double sp = p.detuning + p.omega_m;
  double sm = p.detuning - p.omega_m;
  return gg * sp / (p.kappa * p.kappa + sp * sp) + gg * sm / (p.kappa * p.kappa + sm * sm);
}

double collective_coupling(double g_single, double n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("collective_coupling: n_atoms must be >= 1");
  return g_single * std::sqrt(n_atoms);
}

double cooperativity(double g_collective, double kappa, double gamma_a) {
  if (kappa <= 0 || gamma_a <= 0)
    throw std::invalid_argument("cooperativity: kappa and gamma_a must be > 0");
  return g_collective * g_collective / (kappa * gamma_a);
}

MeritReport figure_of_merit(double lambda, double t2, const MechanicalMode& mode) {
  MeritReport r;
  r.lambda = lambda;
  r.gamma_th = thermal_rate(mode);
  r.lambda_t2 = lambda * t2;
  r.lambda_over_thermal = (r.gamma_th > 0) ? lambda / r.gamma_th
                                           : (lambda > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  r.strong_coupling = r.lambda_t2 > 1.0 && r.lambda_over_thermal > 1.0;
  return r;
}

}  // namespace hybrid::couplings
