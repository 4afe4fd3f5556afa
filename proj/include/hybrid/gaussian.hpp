#ifndef HYBRID_GAUSSIAN_HPP
#define HYBRID_GAUSSIAN_HPP

#include <string>
#include <vector>

#include "hybrid/ode.hpp"
#include "hybrid/spaces.hpp"

namespace hybrid::gaussian {

// Linearized open-system model, dx = A x dt + noise, with symmetrized
// covariance obeying dSigma/dt = A Sigma + Sigma A^T + D. Quadrature
// convention q = (b+b^dag)/sqrt(2), p = i(b^dag-b)/sqrt(2): vacuum variance
// 1/2, phonon number n = (<q^2>+<p^2>-1)/2. Mechanical damping enters as
// momentum-proportional friction with white thermal diffusion.
struct GaussianModel {
  RealMatrix drift;      // A, rad/s
  RealMatrix diffusion;  // D, symmetrized noise
  std::vector<std::string> quadrature_labels;  // pairs (q, p) per mode

  // quantum (non-symmetrized, Hermitian) input-noise matrix for spectra;
  // empty when the model has no spectrum path
  Matrix quantum_noise;
  // cavity+atom subsystem driving the force spectrum seen by the mirror
  std::vector<int> spectrum_subsystem;
  int force_quadrature = -1;  // index into spectrum_subsystem coordinates
  double force_coupling = 0;  // g
  double omega_mech = 0;

  int size() const { return static_cast<int>(drift.rows()); }
  int modes() const { return size() / 2; }
  void validate() const;
};

// Membrane coupled to the atomic COM mode with reflectivity-asymmetric
// coupling: dp/dt = -Om_m q - 2 r lam q_at - gamma_m p, dp_at/dt =
// -Om_at q_at - 2 lam q - gamma_cool p_at. Quadrature order
// (q, p, q_at, p_at).
struct MembraneAtomParams {
  double omega_m = 0;
  double omega_at = 0;
  double lambda_n = 0;
  double reflectivity = 1.0;  // r in [0,1]
  double gamma_m = 0;
  double gamma_cool = 0;
  double n_th = 0;
  double n_at = 0;  // atomic bath occupation (laser cooling target)
  // momentum-diffusion rate accompanying the asymmetric coupling; the value
  // (1-r)*lambda_n per mode makes the full generator completely positive
  double radiation_diffusion = 0;
};

GaussianModel build_membrane_atom_model(const MembraneAtomParams& p);

// Mirror + cavity + atomic-ensemble filter. Quadrature order
// (q, p, a_x, a_y, c_x, c_y). Cavity amplitude decay kappa, atomic decay
// gamma_a (half-linewidths), vacuum inputs.
struct CavityAtomMirrorParams {
  double omega_m = 0;
  double gamma_m = 0;
  double g = 0;        // field-mirror coupling
  double kappa = 0;    // cavity decay
  double delta_f = 0;  // effective cavity detuning
  double g_a = 0;      // collective atom-cavity coupling G_a
  double gamma_a = 0;
  double delta_a = 0;
  double n_th = 0;
};

GaussianModel build_cavity_atom_mirror_model(const CavityAtomMirrorParams& p);

Eigen::VectorXcd drift_eigenvalues(const GaussianModel& m);
bool is_stable(const GaussianModel& m);

struct MeanSeries {
  RealVector t;
  RealMatrix x;  // rows = time points, cols = quadratures
  std::vector<std::string> labels;
};

MeanSeries evolve_means(const GaussianModel& m, const RealVector& x0, const RealVector& t_grid,
                        const ode::Options& opt = {});

struct CovarianceReport {
  RealMatrix covariance;
  std::vector<double> mode_occupation;  // per (q,p) pair
  double purity = 0;
  double residual = 0;            // max|A S + S A^T + D|
  double physicality_min_eig = 0;  // min eig of Sigma + (i/2) Omega_symp
};

// Solves A Sigma + Sigma A^T + D = 0 by a dense vectorized linear solve.
CovarianceReport steady_state_covariance(const GaussianModel& m);

struct ForceSpectrum {
  RealVector omega;
  RealVector s_f;  // >= 0
};

// Spectrum of the field-mediated force on the mirror, evaluated exactly from
// the cavity+atom transfer function; S_F(+Omega_M) is the anti-Stokes
// (cooling) rate, S_F(-Omega_M) the Stokes (heating) rate.
ForceSpectrum langevin_force_spectrum(const GaussianModel& m, const RealVector& omega_grid);

struct SidebandRates {
  double a_antistokes = 0;  // S_F(+Omega_M)
  double a_stokes = 0;      // S_F(-Omega_M)
};

SidebandRates sideband_rates(const GaussianModel& m, double omega_m);

// Gamma_opt = (g^2/kappa) C/(1+C)
double optical_damping(double g, double kappa, double cooperativity);
// n_res = A_s / (Gamma_M + Gamma_opt)
double residual_occupation(double a_stokes, double gamma_m, double gamma_opt);

struct SympatheticRates {
  double gamma_eff = 0;
  double delta_gamma = 0;
};

// Gamma_eff = Gamma_M + 4 r lambda_N^2 / gamma_cool (weak coupling)
SympatheticRates sympathetic_damping(double gamma_m, double reflectivity, double lambda_n,
                                     double gamma_cool,
                                     std::vector<std::string>* warnings = nullptr);

// Energy damping rate of the mechanical-like normal mode, -2 Re(eig),
// identified by eigenvector weight on the given quadrature pair.
double extract_mode_damping(const GaussianModel& m, int mode_index = 0);

}  // namespace hybrid::gaussian

#endif
