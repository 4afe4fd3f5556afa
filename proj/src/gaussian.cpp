#include "hybrid/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <stdexcept>

#include "hybrid/errors.hpp"

namespace hybrid::gaussian {

namespace {
const Complex kI(0.0, 1.0);

// symplectic form, direct sum of [[0,1],[-1,0]] per mode
RealMatrix symplectic_form(int size) {
  RealMatrix omega = RealMatrix::Zero(size, size);
  for (int k = 0; k + 1 < size; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  return omega;
}

// vacuum-input quadrature noise for amplitude decay rate kappa: Hermitian
// block kappa * [[1, i], [-i, 1]]; its symmetrized part is kappa*I
Matrix vacuum_noise_block(double kappa) {
  Matrix n(2, 2);
  n << kappa, kI * kappa, -kI * kappa, kappa;
  return n;
}
}  // namespace

void GaussianModel::validate() const {
  int n = size();
  if (n == 0 || n % 2 != 0)
    throw std::invalid_argument("GaussianModel: dimension must be even and nonzero");
  if (diffusion.rows() != n || diffusion.cols() != n || drift.cols() != n)
    throw std::invalid_argument("GaussianModel: drift/diffusion dimension mismatch");
  if ((diffusion - diffusion.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, diffusion.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("GaussianModel: diffusion must be symmetric");
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(diffusion, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, diffusion.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("GaussianModel: diffusion must be positive semidefinite");
}

GaussianModel build_membrane_atom_model(const MembraneAtomParams& p) {
  if (p.reflectivity < 0.0 || p.reflectivity > 1.0)
    throw std::invalid_argument("membrane-atom model: reflectivity must be in [0,1]");
  if (p.gamma_m < 0 || p.gamma_cool < 0 || p.n_th < 0 || p.n_at < 0 || p.radiation_diffusion < 0)
    throw std::invalid_argument("membrane-atom model: rates must be >= 0");

  GaussianModel m;
  m.quadrature_labels = {"q", "p", "q_at", "p_at"};
  m.drift = RealMatrix::Zero(4, 4);
  m.drift(0, 1) = p.omega_m;
  m.drift(1, 0) = -p.omega_m;
  m.drift(1, 2) = -2.0 * p.reflectivity * p.lambda_n;
  m.drift(1, 1) = -p.gamma_m;
  m.drift(2, 3) = p.omega_at;
  m.drift(3, 2) = -p.omega_at;
  m.drift(3, 0) = -2.0 * p.lambda_n;
  m.drift(3, 3) = -p.gamma_cool;

  m.diffusion = RealMatrix::Zero(4, 4);
  m.diffusion(1, 1) = 2.0 * p.gamma_m * (p.n_th + 0.5) + p.radiation_diffusion;
  m.diffusion(3, 3) = 2.0 * p.gamma_cool * (p.n_at + 0.5) + p.radiation_diffusion;
  m.omega_mech = p.omega_m;
  return m;
}

GaussianModel build_cavity_atom_mirror_model(const CavityAtomMirrorParams& p) {
  if (p.kappa <= 0 || p.gamma_a <= 0)
    throw std::invalid_argument("cavity-atom-mirror model: kappa and gamma_a must be > 0");
  if (p.gamma_m < 0 || p.n_th < 0)
    throw std::invalid_argument("cavity-atom-mirror model: rates must be >= 0");

  const double s2 = std::sqrt(2.0);
  GaussianModel m;
  m.quadrature_labels = {"q", "p", "a_x", "a_y", "c_x", "c_y"};
  m.drift = RealMatrix::Zero(6, 6);
  // mirror: dq = Om p, dp = -Gm p - Om q + g(a+a^dag) = ... + sqrt(2) g a_x
  m.drift(0, 1) = p.omega_m;
  m.drift(1, 0) = -p.omega_m;
  m.drift(1, 1) = -p.gamma_m;
  m.drift(1, 2) = s2 * p.g;
  // cavity: da = -(kappa + i Delta_f) a + i g q - i G_a c + a_in
  m.drift(2, 2) = -p.kappa;
  m.drift(2, 3) = p.delta_f;
  m.drift(2, 5) = p.g_a;
  m.drift(3, 2) = -p.delta_f;
  m.drift(3, 3) = -p.kappa;
  m.drift(3, 0) = s2 * p.g;
  m.drift(3, 4) = -p.g_a;
  // atoms: dc = -(gamma_a + i Delta_a) c - i G_a a + c_in
  m.drift(4, 4) = -p.gamma_a;
  m.drift(4, 5) = p.delta_a;
  m.drift(4, 3) = p.g_a;
  m.drift(5, 4) = -p.delta_a;
  m.drift(5, 5) = -p.gamma_a;
  m.drift(5, 2) = -p.g_a;

  m.diffusion = RealMatrix::Zero(6, 6);
  m.diffusion(1, 1) = 2.0 * p.gamma_m * (p.n_th + 0.5);
  m.diffusion(2, 2) = p.kappa;
  m.diffusion(3, 3) = p.kappa;
  m.diffusion(4, 4) = p.gamma_a;
  m.diffusion(5, 5) = p.gamma_a;

  m.quantum_noise = Matrix::Zero(6, 6);
  m.quantum_noise(1, 1) = 2.0 * p.gamma_m * (p.n_th + 0.5);
  m.quantum_noise.block(2, 2, 2, 2) = vacuum_noise_block(p.kappa);
  m.quantum_noise.block(4, 4, 2, 2) = vacuum_noise_block(p.gamma_a);

  m.spectrum_subsystem = {2, 3, 4, 5};
  m.force_quadrature = 0;  // a_x within the subsystem
  m.force_coupling = p.g;
  m.omega_mech = p.omega_m;
  return m;
}

Eigen::VectorXcd drift_eigenvalues(const GaussianModel& m) {
  Eigen::EigenSolver<RealMatrix> es(m.drift, false);
  return es.eigenvalues();
}

bool is_stable(const GaussianModel& m) {
  auto ev = drift_eigenvalues(m);
  for (long i = 0; i < ev.size(); ++i)
    if (ev(i).real() >= 0.0) return false;
  return true;
}

MeanSeries evolve_means(const GaussianModel& m, const RealVector& x0, const RealVector& t_grid,
                        const ode::Options& opt) {
  m.validate();
  if (x0.size() != m.size())
    throw std::invalid_argument("evolve_means: initial-state dimension mismatch");
  if (t_grid.size() < 1) throw std::invalid_argument("evolve_means: empty time grid");

  MeanSeries out;
  out.t = t_grid;
  out.labels = m.quadrature_labels;
  out.x.resize(t_grid.size(), m.size());

  RealVector y = x0;
  double t = 0.0;
  auto rhs = [&](double, const RealVector& v) -> RealVector { return m.drift * v; };
  for (long i = 0; i < t_grid.size(); ++i) {
    if (t_grid(i) < t) throw std::invalid_argument("evolve_means: time grid must be increasing");
    ode::integrate(rhs, y, t, t_grid(i), opt);
    t = t_grid(i);
    out.x.row(i) = y.transpose();
  }
  return out;
}

CovarianceReport steady_state_covariance(const GaussianModel& m) {
  m.validate();
  if (!is_stable(m))
    throw instability_error("steady_state_covariance: drift matrix is not strictly stable");

  const int n = m.size();
  // vec(A S + S A^T) = (I (x) A + A (x) I) vec(S), column-major
  RealMatrix big = RealMatrix::Zero(n * n, n * n);
  for (int col = 0; col < n; ++col)
    big.block(col * n, col * n, n, n) += m.drift;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        big(j * n + k, i * n + k) += m.drift(j, i);

  Eigen::Map<const RealVector> d_vec(m.diffusion.data(), n * n);
  RealVector s_vec = Eigen::PartialPivLU<RealMatrix>(big).solve(-d_vec);
  RealMatrix sigma = Eigen::Map<RealMatrix>(s_vec.data(), n, n);
  sigma = ((sigma + sigma.transpose()) / 2.0).eval();

  CovarianceReport rep;
  rep.covariance = sigma;
  rep.residual = (m.drift * sigma + sigma * m.drift.transpose() + m.diffusion).cwiseAbs().maxCoeff();
  for (int k = 0; k + 1 < n; k += 2)
    rep.mode_occupation.push_back((sigma(k, k) + sigma(k + 1, k + 1) - 1.0) / 2.0);
  double det = sigma.determinant();
  rep.purity = det > 0 ? 1.0 / (std::pow(2.0, n / 2) * std::sqrt(det)) : 0.0;

  Matrix phys = sigma.cast<Complex>() + (kI / 2.0) * symplectic_form(n).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Matrix> es(phys, Eigen::EigenvaluesOnly);
  rep.physicality_min_eig = es.eigenvalues().minCoeff();
  return rep;
}

namespace {
// subsystem spectrum matrix S_x(w) = (A + i w)^-1 N ((A + i w)^-1)^dag
Matrix subsystem_spectrum(const Matrix& a_sub, const Matrix& n_sub, double omega) {
  const long n = a_sub.rows();
  Matrix shifted = a_sub + kI * omega * Matrix::Identity(n, n);
  Matrix resolvent = shifted.partialPivLu().solve(Matrix::Identity(n, n));
  return resolvent * n_sub * resolvent.adjoint();
}
}  // namespace

ForceSpectrum langevin_force_spectrum(const GaussianModel& m, const RealVector& omega_grid) {
  if (m.spectrum_subsystem.empty() || m.quantum_noise.size() == 0)
    throw std::invalid_argument("langevin_force_spectrum: model carries no spectrum subsystem");
  const int ns = static_cast<int>(m.spectrum_subsystem.size());
  Matrix a_sub(ns, ns), n_sub(ns, ns);
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < ns; ++j) {
      a_sub(i, j) = m.drift(m.spectrum_subsystem[i], m.spectrum_subsystem[j]);
      n_sub(i, j) = m.quantum_noise(m.spectrum_subsystem[i], m.spectrum_subsystem[j]);
    }
  // subsystem must relax on its own
  Eigen::ComplexEigenSolver<Matrix> es(a_sub, false);
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i).real() >= 0.0)
      throw instability_error("langevin_force_spectrum: cavity+atom subsystem not stable");

  ForceSpectrum out;
  out.omega = omega_grid;
  out.s_f.resize(omega_grid.size());
  const double g2 = m.force_coupling * m.force_coupling;
  for (long k = 0; k < omega_grid.size(); ++k) {
    Matrix s = subsystem_spectrum(a_sub, n_sub, omega_grid(k));
    // F = g(a + a^dag) = sqrt(2) g a_x; the matrix element (b+b^dag)/sqrt(2)
    // of the mechanical quadrature halves the rate: A(w) = g^2 S_axax(w)
    out.s_f(k) = g2 * s(m.force_quadrature, m.force_quadrature).real();
  }
  return out;
}

SidebandRates sideband_rates(const GaussianModel& m, double omega_m) {
  RealVector grid(2);
  grid << omega_m, -omega_m;
  auto spec = langevin_force_spectrum(m, grid);
  return {spec.s_f(0), spec.s_f(1)};
}

double optical_damping(double g, double kappa, double cooperativity) {
  if (kappa <= 0) throw std::invalid_argument("optical_damping: kappa must be > 0");
  if (cooperativity < 0) throw std::invalid_argument("optical_damping: C must be >= 0");
  return (g * g / kappa) * cooperativity / (1.0 + cooperativity);
}

double residual_occupation(double a_stokes, double gamma_m, double gamma_opt) {
  double denom = gamma_m + gamma_opt;
  if (denom <= 0) throw precondition_error("residual_occupation: no damping channel");
  return a_stokes / denom;
}

SympatheticRates sympathetic_damping(double gamma_m, double reflectivity, double lambda_n,
                                     double gamma_cool, std::vector<std::string>* warnings) {
  if (gamma_cool <= 0)
    throw precondition_error("sympathetic_damping: gamma_cool must be > 0");
  if (reflectivity < 0 || reflectivity > 1)
    throw std::invalid_argument("sympathetic_damping: reflectivity must be in [0,1]");
  if (warnings && std::abs(lambda_n) > 0.1 * gamma_cool)
    warnings->push_back("sympathetic_damping: outside weak-coupling regime lambda_N << gamma_cool");
  SympatheticRates r;
  r.delta_gamma = 4.0 * reflectivity * lambda_n * lambda_n / gamma_cool;
  r.gamma_eff = gamma_m + r.delta_gamma;
  return r;
}

double extract_mode_damping(const GaussianModel& m, int mode_index) {
  Eigen::EigenSolver<RealMatrix> es(m.drift, true);
  const auto& ev = es.eigenvalues();
  const auto& vec = es.eigenvectors();
  int best = -1;
  double best_weight = -1.0;
  for (long i = 0; i < ev.size(); ++i) {
    if (ev(i).imag() < 0) continue;  // one of each conjugate pair
    double w = std::norm(vec(2 * mode_index, i)) + std::norm(vec(2 * mode_index + 1, i));
    w /= vec.col(i).squaredNorm();
    if (w > best_weight) {
      best_weight = w;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw std::runtime_error("extract_mode_damping: no candidate eigenvalue");
  return -2.0 * ev(best).real();
}

}  // namespace hybrid::gaussian
