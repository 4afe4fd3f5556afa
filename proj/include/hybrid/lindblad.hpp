#ifndef HYBRID_LINDBLAD_HPP
#define HYBRID_LINDBLAD_HPP

#include <string>
#include <utility>
#include <vector>

#include "hybrid/ode.hpp"
#include "hybrid/operators.hpp"
#include "hybrid/spaces.hpp"

namespace hybrid::lindblad {

// Hamiltonians are stored divided by hbar (units rad/s).

struct CollapseTerm {
  Matrix op;
  double rate = 0;
  Matrix op_dag;   // cached adjoint
  Matrix ldag_l;   // cached op^dag op
};

// Asymmetric (cascaded) coupling, rho -> -i (1-r) s ([src, tgt rho] - [rho tgt, src]).
struct CascadedTerm {
  Matrix source;
  Matrix target;
  double strength = 0;      // s
  double reflectivity = 1;  // r in [0,1]
};

class LindbladModel {
 public:
  LindbladModel(HilbertSpace space, Matrix hamiltonian);

  void add_collapse(Matrix op, double rate);
  void add_cascaded(Matrix source, Matrix target, double strength, double reflectivity);

  const HilbertSpace& space() const { return space_; }
  const Matrix& hamiltonian() const { return h_; }
  const std::vector<CollapseTerm>& collapse_terms() const { return collapse_; }
  const std::vector<CascadedTerm>& cascaded_terms() const { return cascaded_; }

  // drho/dt for this generator
  Matrix apply(const Matrix& rho) const;

 private:
  HilbertSpace space_;
  Matrix h_;
  std::vector<CollapseTerm> collapse_;
  std::vector<CascadedTerm> cascaded_;
};

// The cascaded map alone; traceless on Hermitian inputs.
Matrix cascaded_superoperator(const CascadedTerm& term, const Matrix& rho);

struct Diagnostics {
  double max_trace_deviation = 0;
  double max_top_fock = 0;  // worst top-level population over factors and times
  double final_min_eigenvalue = 0;
  std::vector<std::string> warnings;
};

struct TimeSeries {
  RealVector t;
  std::vector<std::string> names;
  Matrix values;  // rows = time points
  Diagnostics diagnostics;
};

struct MasterOptions {
  ode::Options ode;
  double trace_guard = 1e-10;      // step rejected beyond this trace drift
  double warn_top_fock = 1e-6;     // truncation warning threshold
  double fail_top_fock = 1e-3;     // hard truncation failure
  double initial_top_fock = 1e-8;  // admission check on rho0 (top two levels)
};

using Observables = std::vector<std::pair<std::string, Matrix>>;

// Adaptive integration of rho' = -i[H, rho] + sum_k r_k D[L_k] rho + sum C rho.
// Trace preserved to 1e-8 at output points; the density matrix is
// re-symmetrized after every accepted step.
TimeSeries evolve_master(const LindbladModel& model, const QuantumState& rho0,
                         const RealVector& t_grid, const Observables& observables,
                         const MasterOptions& opt = {});

// State-vector path for closed models, psi' = -i H psi.
TimeSeries evolve_state(const HilbertSpace& space, const Matrix& hamiltonian,
                        const QuantumState& psi0, const RealVector& t_grid,
                        const Observables& observables, const MasterOptions& opt = {});

// Resonant exchange model H = (w_q/2) sigma_z + Om b'b + lam(sigma+ b + sigma- b'),
// w_q = Om + detuning. Space = qubit (x) fock(dim), observables P_e, n, q, p
// and the conserved excitation number.
TimeSeries simulate_jaynes_cummings(double lambda, double omega_m, double detuning, int dim,
                                    const QuantumState& psi0, const RealVector& t_grid,
                                    const MasterOptions& opt = {});

// Full transverse coupling H = (w_L/2) sigma_z + Om b'b + lam (b+b') sigma_x,
// or its rotating-wave form when use_rwa is set.
TimeSeries simulate_spin_resonator_full(double lambda, double omega_l, double omega_m, int dim,
                                        const QuantumState& psi0, const RealVector& t_grid,
                                        bool use_rwa, const MasterOptions& opt = {});

// QND model H = (w_q/2) sigma_z + Om b'b + chi (b'b + 1/2) sigma_z; phonon
// populations are conserved, the qubit phase advances by 2 chi (n + 1/2) per
// Fock level.
TimeSeries simulate_dispersive_qnd(double chi, double qubit_splitting, double omega_m, int dim,
                                   const QuantumState& rho0, const RealVector& t_grid,
                                   const MasterOptions& opt = {});

struct SympatheticParams {
  double omega_m = 0;
  double omega_at = 0;
  double lambda_n = 0;
  double reflectivity = 1;
  double gamma_m = 0;
  double gamma_cool = 0;
  double n_th = 0;
  // adds the momentum-diffusion channels D[q], D[q_at] at rate (1-r) lambda_n
  // that make the asymmetric coupling completely positive
  bool radiation_diffusion = true;
};

// Membrane + atomic COM master-equation model: H = Om_m b'b + Om_at a'a
// + 2 lam q q_at together with the cascaded term of strength -lam, so the
// mean values obey the reflectivity-asymmetric equations of motion.
LindbladModel membrane_atom_lindblad(const SympatheticParams& p, int dim_m, int dim_at);

struct ExponentialFit {
  double rate = 0;
  double amplitude = 0;
  double r_squared = 0;
  bool ok = false;
};

// Least squares on log(y - floor) over [t_skip, end].
ExponentialFit fit_exponential_decay(const RealVector& t, const RealVector& y, double floor_value,
                                     double t_skip);

struct CoolingResult {
  TimeSeries series;
  ExponentialFit fit;
  double gamma_eff_formula = 0;
  int dim_m = 0, dim_at = 0;  // dims actually used (after any truncation retry)
};

// Membrane cooling through the laser-cooled atoms; fits the decay of <b'b>
// and compares with Gamma_eff = Gamma_M + 4 r lam^2 / gamma_cool. Dims are
// doubled and the run repeated once if the truncation monitor trips.
CoolingResult simulate_sympathetic_cooling(const SympatheticParams& p, int dim_m, int dim_at,
                                           int initial_fock, const RealVector& t_grid,
                                           const MasterOptions& opt = {});

}  // namespace hybrid::lindblad

#endif
