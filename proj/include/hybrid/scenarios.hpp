#ifndef HYBRID_SCENARIOS_HPP
#define HYBRID_SCENARIOS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybrid/couplings.hpp"
#include "hybrid/gaussian.hpp"
#include "hybrid/lindblad.hpp"
#include "hybrid/spaces.hpp"

namespace hybrid::scenarios {

enum class Platform {
  cpb_resonator,
  flux_resonator,
  spin_resonator,
  quantum_dot,
  ion_direct,
  bec_cantilever,
  lattice_membrane,
  cavity_atom_mirror,
  cavity_single_atom_membrane,
};

struct LatticeParams {
  double gamma_cool = 0;    // laser-cooling rate of the atomic COM mode
  double reflectivity = 1;  // membrane power reflectivity r
};

// A named platform: parameter bundles in SI units plus the derived coupling
// constants and rates. Derived values are always recomputed from the params
// through the public calculator operations, never stored independently.
struct Scenario {
  std::string name;
  Platform platform = Platform::cpb_resonator;

  couplings::MechanicalMode mechanical;
  std::optional<couplings::ChargeQubitParams> charge;
  std::optional<couplings::FluxQubitParams> flux;
  std::optional<couplings::SpinParams> spin;
  std::optional<couplings::DeformationParams> deformation;
  std::optional<couplings::DirectCouplingParams> direct;
  std::optional<couplings::CavityMediatedParams> cavity;
  std::optional<gaussian::CavityAtomMirrorParams> cavity_mirror;
  std::optional<LatticeParams> lattice;

  double t2 = 0;               // qubit/spin coherence time, s
  double drive_frequency = 0;  // sideband drive omega_0 = E_J/hbar - Omega_M

  std::map<std::string, double> derived;
  std::map<std::string, std::string> units;       // unit per derived key
  std::map<std::string, std::string> provenance;  // per parameter and derived key
};

std::vector<std::string> builtin_names();
// throws std::invalid_argument listing the valid names for unknown input
Scenario builtin(const std::string& name);

// re-derives every entry of scenario.derived from the current params
void recompute_derived(Scenario& s);

// set a parameter by "section.key" path (e.g. "direct.epsilon") without
// touching the derived map; unknown paths throw std::invalid_argument
void set_parameter(Scenario& s, const std::string& path, double value);
// set_parameter followed by recompute_derived
void apply_override(Scenario& s, const std::string& path, double value);
std::vector<std::string> override_keys(const Scenario& s);

// CPB Hamiltonian in the charge basis over an odd window of charge states
// centred on the gate charge: diagonal E_C (N - N_g)^2, off-diagonal -E_J/2.
// Entries divided by hbar (rad/s).
Operator cpb_hamiltonian(const couplings::ChargeQubitParams& p, int charge_states);

// Two-level qubit-resonator model. Generic form: H = (E_C dNg/hbar) s_z
// - (E_J/2hbar) s_x + Om b'b + lam (b+b') s_z. Rotated (degeneracy-point)
// form: H = (E_J/2hbar) s_z + Om b'b + lam (b+b') s_x. Dephasing at 1/T2
// along the model's z axis and thermal mechanical dissipators attached.
lindblad::LindbladModel build_qubit_resonator_model(const Scenario& s, bool rotated_basis,
                                                    int fock_dim);

// Gaussian models bound to scenario parameters.
gaussian::GaussianModel membrane_atom_model(const Scenario& s);
gaussian::GaussianModel cavity_mirror_model(const Scenario& s);

struct EstimateRow {
  std::string platform;
  double lambda_lo = 0;  // rad/s
  double lambda_hi = 0;
  double reference_lo = 0;  // published range, rad/s
  double reference_hi = 0;
  double gamma_th = 0;
  double t2 = 0;
  bool strong_coupling = false;  // at lambda_hi
  std::string provenance;
};

// One row per coupling mechanism, evaluated from the recorded representative
// parameter spans; reproduces the published coupling-strength ranges.
std::vector<EstimateRow> estimate_table();
const char* estimate_spans_version();

}  // namespace hybrid::scenarios

#endif
