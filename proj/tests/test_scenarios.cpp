#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "hybrid/constants.hpp"
#include "hybrid/operators.hpp"
#include "hybrid/scenarios.hpp"

using namespace hybrid;
using namespace hybrid::scenarios;
namespace cn = hybrid::constants;

TEST_CASE("builtin names resolve and unknown names explain themselves") {
  for (const auto& name : builtin_names()) {
    auto s = builtin(name);
    CHECK(s.name == name);
    CHECK_FALSE(s.derived.empty());
    for (const auto& [key, value] : s.derived) {
      CHECK(s.units.count(key) == 1);
      CHECK(s.provenance.count(key) == 1);
      CHECK(std::isfinite(value));
    }
  }
  try {
    builtin("no_such_platform");
    FAIL("expected an exception");
  } catch (const std::invalid_argument& ex) {
    std::string msg = ex.what();
    CHECK(msg.find("ion_direct") != std::string::npos);
    CHECK(msg.find("bec_cantilever") != std::string::npos);
  }
}

TEST_CASE("ion_direct reproduces the published estimate") {
  auto s = builtin("ion_direct");
  double lam_hz = s.derived.at("lambda_direct") / cn::two_pi;
  CHECK(lam_hz == doctest::Approx(135.3965).scale(0.0).epsilon(1e-4));
  CHECK(std::abs(lam_hz - 150.0) / 150.0 < 0.15);
  CHECK(s.t2 == 1.0);

  // epsilon scales the coupling linearly
  apply_override(s, "direct.epsilon", 0.5);
  CHECK(s.derived.at("lambda_direct") / cn::two_pi == doctest::Approx(135.3965 / 2).scale(0.0).epsilon(1e-4));
}

TEST_CASE("bec_cantilever carries the published device numbers") {
  auto s = builtin("bec_cantilever");
  CHECK(s.mechanical.omega_m == doctest::Approx(cn::two_pi * 10e3).scale(0.0));
  CHECK(s.mechanical.m_eff == doctest::Approx(5e-12).scale(0.0));
  CHECK(s.mechanical.quality_q == doctest::Approx(3200).scale(0.0));
  CHECK(s.direct->n_atoms == doctest::Approx(2000).scale(0.0));
  // epsilon-scaled upper bound on the collective coupling
  CHECK(s.derived.at("lambda_collective") / cn::two_pi ==
        doctest::Approx(0.0379890).scale(0.0).epsilon(1e-4));
}

TEST_CASE("cavity_single_atom_membrane hits the target coupling") {
  auto s = builtin("cavity_single_atom_membrane");
  CHECK(s.derived.at("lambda") == doctest::Approx(cn::two_pi * 45e3).scale(0.0).epsilon(1e-9));
  CHECK(s.derived.at("strong_coupling") == 1.0);
  // thermal decoherence pinned at a tenth of the coupling
  CHECK(s.derived.at("gamma_th") ==
        doctest::Approx(0.1 * cn::two_pi * 45e3).scale(0.0).epsilon(1e-3));
  CHECK(s.derived.at("x_zpf") == doctest::Approx(4.017e-15).scale(0.0).epsilon(1e-3));
}

TEST_CASE("lattice_membrane sympathetic numbers") {
  auto s = builtin("lattice_membrane");
  CHECK(s.derived.at("lambda_n") / cn::two_pi == doctest::Approx(500.0).scale(0.0).epsilon(1e-9));
  double expect = 4.0 * 0.4 * std::pow(s.derived.at("lambda_n"), 2) / (cn::two_pi * 50e3);
  CHECK(s.derived.at("delta_gamma") == doctest::Approx(expect).scale(0.0).epsilon(1e-12));
}

TEST_CASE("derived values are never stale") {
  for (const auto& name : builtin_names()) {
    auto s = builtin(name);
    auto cached = s.derived;
    recompute_derived(s);
    for (const auto& [key, value] : cached) {
      double again = s.derived.at(key);
      CHECK(std::abs(again - value) <=
            1e-12 * std::max({1.0, std::abs(value), std::abs(again)}));
    }
  }
}

TEST_CASE("override paths validate") {
  auto s = builtin("ion_direct");
  CHECK_THROWS_AS(apply_override(s, "direct.no_such_field", 1.0), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(s, "charge.v_g", 1.0), std::invalid_argument);
  apply_override(s, "mechanical.temperature", 4.0);
  CHECK(s.mechanical.temperature == 4.0);
}

TEST_CASE("cpb hamiltonian in the charge basis") {
  couplings::ChargeQubitParams p;
  p.e_c = cn::planck_h * 50e9;
  p.e_j = cn::planck_h * 5e9;
  p.c_total = 2.0 * cn::elementary_charge * cn::elementary_charge / p.e_c;
  p.c_gate = 0.02 * p.c_total;
  p.v_g = 10.0;
  p.gap = 100e-9;
  p.delta_ng = 0.0;

  CHECK_THROWS_AS(cpb_hamiltonian(p, 4), std::invalid_argument);
  CHECK_THROWS_AS(cpb_hamiltonian(p, 1), std::invalid_argument);

  // closed junction: diagonal, eigenstates are charge states
  couplings::ChargeQubitParams p0 = p;
  p0.e_j = 0.0;
  Matrix h0 = cpb_hamiltonian(p0, 5).matrix();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      if (i != j) CHECK(std::abs(h0(i, j)) == 0.0);

  // degeneracy point: two lowest states are (|g> +- |e>)/sqrt(2) split by E_J
  Matrix h5 = cpb_hamiltonian(p, 5).matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(h5);
  double gap = es.eigenvalues()(1) - es.eigenvalues()(0);
  CHECK(gap == doctest::Approx(p.e_j / cn::hbar).scale(0.0).epsilon(0.02));

  // two-state model: eigenvalues E_C/4 -+ E_J/2, within 2%
  double e0_expect = (0.25 * p.e_c - 0.5 * p.e_j) / cn::hbar;
  double e1_expect = (0.25 * p.e_c + 0.5 * p.e_j) / cn::hbar;
  CHECK(std::abs(es.eigenvalues()(0) - e0_expect) <= 0.02 * std::abs(e0_expect));
  CHECK(std::abs(es.eigenvalues()(1) - e1_expect) <= 0.02 * std::abs(e1_expect));

  // ground state is the symmetric superposition of the degenerate pair
  Vector ground = es.eigenvectors().col(0);
  // charge window {-1..3}: the degenerate pair sits at indices 1 and 2
  Complex a = ground(1), b = ground(2);
  CHECK(std::abs(std::abs(a) - 1.0 / std::sqrt(2.0)) < 0.01);
  CHECK(std::abs(a - b) < 0.02);
}

TEST_CASE("cpb spectrum is periodic in the gate charge") {
  couplings::ChargeQubitParams p;
  p.e_c = cn::planck_h * 50e9;
  p.e_j = cn::planck_h * 5e9;
  p.c_total = 2.0 * cn::elementary_charge * cn::elementary_charge / p.e_c;
  p.c_gate = 0.02 * p.c_total;
  p.v_g = 10.0;
  p.gap = 100e-9;

  for (double dng : {0.0, 0.13, -0.27}) {
    p.delta_ng = dng;
    Eigen::SelfAdjointEigenSolver<Matrix> a(cpb_hamiltonian(p, 5).matrix(),
                                            Eigen::EigenvaluesOnly);
    p.delta_ng = dng + 1.0;  // shifts the window by exactly one charge state
    Eigen::SelfAdjointEigenSolver<Matrix> b(cpb_hamiltonian(p, 5).matrix(),
                                            Eigen::EigenvaluesOnly);
    for (int k = 0; k < 5; ++k)
      CHECK(std::abs(a.eigenvalues()(k) - b.eigenvalues()(k)) <=
            1e-9 * std::abs(a.eigenvalues()(k)));
  }
}

TEST_CASE("generic and rotated qubit-resonator models are unitarily equivalent") {
  auto s = builtin("cpb_resonator");
  REQUIRE(s.charge->delta_ng == 0.0);
  int fock = 4;
  auto generic = build_qubit_resonator_model(s, false, fock);
  auto rotated = build_qubit_resonator_model(s, true, fock);

  // |g~> = (|g>+|e>)/sqrt(2), |e~> = (|e>-|g>)/sqrt(2)
  Matrix u2(2, 2);
  u2 << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Matrix u = kron(u2, identity_matrix(fock));
  Matrix mapped = u * rotated.hamiltonian() * u.adjoint();
  double scale = generic.hamiltonian().cwiseAbs().maxCoeff();
  CHECK((mapped - generic.hamiltonian()).cwiseAbs().maxCoeff() < 1e-12 * scale);

  // dissipators attached: qubit dephasing plus two thermal mechanical channels
  CHECK(rotated.collapse_terms().size() == 3);

  // sideband drive bridges the qubit splitting and the mechanical quantum
  CHECK(s.drive_frequency ==
        doctest::Approx(s.charge->e_j / cn::hbar - s.mechanical.omega_m).scale(0.0).epsilon(1e-12));
}

TEST_CASE("scenario model builders bind the derived couplings") {
  auto s = builtin("lattice_membrane");
  auto gm = membrane_atom_model(s);
  double lam = s.derived.at("lambda_n");
  CHECK(gm.drift(1, 2) == doctest::Approx(-2.0 * 0.4 * lam).scale(0.0).epsilon(1e-12));
  CHECK(gm.drift(3, 0) == doctest::Approx(-2.0 * lam).scale(0.0).epsilon(1e-12));

  auto c = builtin("cavity_atom_mirror");
  auto cm = cavity_mirror_model(c);
  CHECK(cm.size() == 6);
  CHECK(gaussian::is_stable(cm));
  CHECK(c.derived.at("cooperativity") == doctest::Approx(100.0).scale(0.0).epsilon(1e-9));
  CHECK(c.derived.at("n_res") == doctest::Approx(0.01).scale(0.0).epsilon(0.35));
}

TEST_CASE("estimate table reproduces the published coupling ranges") {
  auto table = estimate_table();
  REQUIRE(table.size() == 5);

  auto find = [&](const std::string& name) -> const EstimateRow& {
    for (const auto& r : table)
      if (r.platform == name) return r;
    throw std::runtime_error("missing row " + name);
  };

  // each computed span overlaps its published range
  for (const auto& row : table) {
    CHECK(row.lambda_lo < row.lambda_hi);
    CHECK(row.lambda_lo <= row.reference_hi);
    CHECK(row.lambda_hi >= row.reference_lo);
  }

  const auto& el = find("electrostatic");
  CHECK(el.reference_lo == doctest::Approx(cn::two_pi * 5e6).scale(0.0));
  CHECK(el.reference_hi == doctest::Approx(cn::two_pi * 50e6).scale(0.0));
  CHECK(el.strong_coupling);  // MHz coupling vs microsecond coherence

  const auto& mag = find("magnetic");
  CHECK(mag.reference_lo == doctest::Approx(cn::two_pi * 10e3).scale(0.0));
  CHECK(mag.reference_hi == doctest::Approx(cn::two_pi * 100e3).scale(0.0));

  // nuclear row sits three orders of magnitude below the electron row
  const auto& nuc = find("magnetic_nuclear");
  double ratio = nuc.lambda_hi / mag.lambda_hi;
  CHECK(ratio == doctest::Approx(cn::proton_moment / cn::bohr_magneton).scale(0.0).epsilon(1e-9));
  CHECK(ratio > 1e-3 / 2);
  CHECK(ratio < 2e-3);

  const auto& lor = find("lorentz");
  CHECK(lor.reference_hi == doctest::Approx(cn::two_pi * 1e6).scale(0.0));
  const auto& def = find("deformation");
  CHECK(def.reference_lo == doctest::Approx(cn::two_pi * 1e6).scale(0.0));

  CHECK(std::string(estimate_spans_version()) == "spans-1");
}

TEST_CASE("spin scenario derives from the gradient, with the measured context noted") {
  auto s = builtin("spin_resonator");
  double lam = s.derived.at("lambda_mag");
  // reproduced through the calculator, in the tens-of-kHz range
  CHECK(lam / cn::two_pi > 10e3);
  CHECK(lam / cn::two_pi < 100e3);
  CHECK(s.provenance.at("spin").find("70 Hz") != std::string::npos);
  CHECK(s.derived.at("force") == doctest::Approx(cn::bohr_magneton * 1e7).scale(0.0).epsilon(1e-12));
}
