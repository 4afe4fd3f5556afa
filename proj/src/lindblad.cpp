#include "hybrid/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "hybrid/errors.hpp"

namespace hybrid::lindblad {

namespace {
const Complex kI(0.0, 1.0);
}

LindbladModel::LindbladModel(HilbertSpace space, Matrix hamiltonian)
    : space_(std::move(space)), h_(std::move(hamiltonian)) {
  if (h_.rows() != h_.cols() || h_.rows() != space_.total_dim())
    throw std::invalid_argument("LindbladModel: Hamiltonian dimension mismatch");
  double scale = std::max(1.0, h_.cwiseAbs().maxCoeff());
  if ((h_ - h_.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("LindbladModel: Hamiltonian must be Hermitian");
}

void LindbladModel::add_collapse(Matrix op, double rate) {
  if (op.rows() != space_.total_dim() || op.cols() != space_.total_dim())
    throw std::invalid_argument("add_collapse: operator dimension mismatch");
  if (rate < 0) throw std::invalid_argument("add_collapse: rate must be >= 0");
  if (rate == 0) return;
  CollapseTerm term;
  term.op = std::move(op);
  term.rate = rate;
  term.op_dag = term.op.adjoint();
  term.ldag_l = term.op_dag * term.op;
  collapse_.push_back(std::move(term));
}

void LindbladModel::add_cascaded(Matrix source, Matrix target, double strength,
                                 double reflectivity) {
  if (source.rows() != space_.total_dim() || target.rows() != space_.total_dim())
    throw std::invalid_argument("add_cascaded: operator dimension mismatch");
  if (reflectivity < 0 || reflectivity > 1)
    throw std::invalid_argument("add_cascaded: reflectivity must be in [0,1]");
  cascaded_.push_back({std::move(source), std::move(target), strength, reflectivity});
}

Matrix cascaded_superoperator(const CascadedTerm& term, const Matrix& rho) {
  if (term.source.rows() != rho.rows() || term.target.rows() != rho.rows())
    throw std::invalid_argument("cascaded_superoperator: operator/state dimension mismatch");
  const double pref = (1.0 - term.reflectivity) * term.strength;
  if (pref == 0.0) return Matrix::Zero(rho.rows(), rho.cols());
  const Matrix& s = term.source;
  const Matrix& t = term.target;
  // -i pref ([s, t rho] - [rho t, s])
  Matrix t_rho = t * rho;
  Matrix rho_t = rho * t;
  return -kI * pref * (s * t_rho - t_rho * s - rho_t * s + s * rho_t);
}

Matrix LindbladModel::apply(const Matrix& rho) const {
  Matrix out = -kI * (h_ * rho - rho * h_);
  for (const auto& c : collapse_)
    out += c.rate * ((c.op * rho) * c.op_dag - 0.5 * (c.ldag_l * rho + rho * c.ldag_l));
  for (const auto& t : cascaded_) out += cascaded_superoperator(t, rho);
  return out;
}

namespace {

struct FactorMonitor {
  // factors worth monitoring for truncation (dim >= 3)
  std::vector<int> factors;
};

FactorMonitor make_monitor(const HilbertSpace& space) {
  FactorMonitor m;
  for (int k = 0; k < space.factors(); ++k)
    if (space.dim(k) >= 3) m.factors.push_back(k);
  return m;
}

double worst_top_population(const Matrix& rho, const HilbertSpace& space,
                            const FactorMonitor& mon, int levels) {
  double worst = 0.0;
  for (int k : mon.factors)
    worst = std::max(worst, top_level_population(rho, space, k, levels));
  return worst;
}

double worst_top_population(const Vector& psi, const HilbertSpace& space,
                            const FactorMonitor& mon, int levels) {
  double worst = 0.0;
  for (int k : mon.factors)
    worst = std::max(worst, top_level_population(psi, space, k, levels));
  return worst;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

void check_admission(double top_two, const MasterOptions& opt, const HilbertSpace& space) {
  if (top_two > opt.initial_top_fock) {
    int suggestion = 0;
    for (int k = 0; k < space.factors(); ++k) suggestion = std::max(suggestion, 2 * space.dim(k));
    throw truncation_error("initial state populates the top two Fock levels at " +
                               short_number(top_two) + ", beyond " +
                               short_number(opt.initial_top_fock) + "; enlarge the truncation",
                           suggestion);
  }
}

}  // namespace

TimeSeries evolve_master(const LindbladModel& model, const QuantumState& rho0,
                         const RealVector& t_grid, const Observables& observables,
                         const MasterOptions& opt) {
  if (rho0.space() != model.space())
    throw std::invalid_argument("evolve_master: state/model space mismatch");
  for (const auto& [name, op] : observables)
    if (op.rows() != model.space().total_dim())
      throw std::invalid_argument("evolve_master: observable dimension mismatch: " + name);

  const auto mon = make_monitor(model.space());
  Matrix rho = rho0.density();
  check_admission(worst_top_population(rho, model.space(), mon, 2), opt, model.space());

  TimeSeries out;
  out.t = t_grid;
  out.names.reserve(observables.size());
  for (const auto& [name, op] : observables) out.names.push_back(name);
  out.values.resize(t_grid.size(), static_cast<long>(observables.size()));

  auto rhs = [&model](double, const Matrix& r) -> Matrix { return model.apply(r); };
  // the generator preserves the trace exactly, so any per-step trace motion
  // is integration error; reject such steps and re-symmetrize accepted ones
  double trace_ref = rho.trace().real();
  auto guard = [&](double, Matrix& r) -> bool {
    double tr = r.trace().real();
    if (std::abs(tr - trace_ref) > opt.trace_guard) return false;
    trace_ref = tr;
    r = ((r + r.adjoint()) / 2.0).eval();
    return true;
  };

  bool warned = false;
  double t = 0.0;
  for (long i = 0; i < t_grid.size(); ++i) {
    if (t_grid(i) < t) throw std::invalid_argument("evolve_master: time grid must be increasing");
    ode::integrate(rhs, rho, t, t_grid(i), opt.ode, guard);
    t = t_grid(i);

    double trace_dev = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    out.diagnostics.max_trace_deviation = std::max(out.diagnostics.max_trace_deviation, trace_dev);
    double top = worst_top_population(rho, model.space(), mon, 1);
    out.diagnostics.max_top_fock = std::max(out.diagnostics.max_top_fock, top);
    if (top > opt.fail_top_fock) {
      int suggestion = 0;
      for (int k = 0; k < model.space().factors(); ++k)
        suggestion = std::max(suggestion, 2 * model.space().dim(k));
      throw truncation_error("top Fock level population " + short_number(top) +
                                 " exceeds the hard truncation ceiling",
                             suggestion);
    }
    if (!warned && top > opt.warn_top_fock) {
      out.diagnostics.warnings.push_back(
          "truncation: top Fock level population exceeded " + short_number(opt.warn_top_fock));
      warned = true;
    }
    for (size_t j = 0; j < observables.size(); ++j)
      out.values(i, static_cast<long>(j)) = (observables[j].second * rho).trace();
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  out.diagnostics.final_min_eigenvalue = es.eigenvalues().minCoeff();
  return out;
}

TimeSeries evolve_state(const HilbertSpace& space, const Matrix& hamiltonian,
                        const QuantumState& psi0, const RealVector& t_grid,
                        const Observables& observables, const MasterOptions& opt) {
  if (!psi0.is_vector())
    throw std::invalid_argument("evolve_state: needs a state-vector input");
  if (psi0.space() != space) throw std::invalid_argument("evolve_state: space mismatch");
  double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("evolve_state: Hamiltonian must be Hermitian");

  const auto mon = make_monitor(space);
  Vector psi = psi0.vector();
  check_admission(worst_top_population(psi, space, mon, 2), opt, space);

  TimeSeries out;
  out.t = t_grid;
  for (const auto& [name, op] : observables) out.names.push_back(name);
  out.values.resize(t_grid.size(), static_cast<long>(observables.size()));

  auto rhs = [&hamiltonian](double, const Vector& v) -> Vector { return -kI * (hamiltonian * v); };

  bool warned = false;
  double t = 0.0;
  for (long i = 0; i < t_grid.size(); ++i) {
    if (t_grid(i) < t) throw std::invalid_argument("evolve_state: time grid must be increasing");
    ode::integrate(rhs, psi, t, t_grid(i), opt.ode);
    t = t_grid(i);

    out.diagnostics.max_trace_deviation =
        std::max(out.diagnostics.max_trace_deviation, std::abs(psi.norm() - 1.0));
    double top = worst_top_population(psi, space, mon, 1);
    out.diagnostics.max_top_fock = std::max(out.diagnostics.max_top_fock, top);
    if (top > opt.fail_top_fock)
      throw truncation_error("top Fock level population exceeds the hard truncation ceiling",
                             2 * space.dim(mon.factors.empty() ? 0 : mon.factors.front()));
    if (!warned && top > opt.warn_top_fock) {
      out.diagnostics.warnings.push_back(
          "truncation: top Fock level population exceeded " + short_number(opt.warn_top_fock));
      warned = true;
    }
    for (size_t j = 0; j < observables.size(); ++j)
      out.values(i, static_cast<long>(j)) = psi.dot(observables[j].second * psi);
  }
  out.diagnostics.final_min_eigenvalue = 0.0;
  return out;
}

namespace {

HilbertSpace qubit_fock_space(int dim) { return HilbertSpace({2, dim}, {"qubit", "mode"}); }

Observables qubit_fock_observables(const HilbertSpace& space) {
  Matrix b = embed(annihilation_matrix(space.dim(1)), 1, space).matrix();
  Matrix n = b.adjoint() * b;
  Matrix sz = embed(pauli_matrix(Pauli::z), 0, space).matrix();
  Matrix pe = (Matrix::Identity(space.total_dim(), space.total_dim()) + sz) / 2.0;
  Observables obs;
  obs.emplace_back("P_e", pe);
  obs.emplace_back("n", n);
  obs.emplace_back("excitation", pe + n);
  obs.emplace_back("sigma_x", embed(pauli_matrix(Pauli::x), 0, space).matrix());
  obs.emplace_back("sigma_y", embed(pauli_matrix(Pauli::y), 0, space).matrix());
  return obs;
}

}  // namespace

TimeSeries simulate_jaynes_cummings(double lambda, double omega_m, double detuning, int dim,
                                    const QuantumState& psi0, const RealVector& t_grid,
                                    const MasterOptions& opt) {
  if (dim < 2) throw std::invalid_argument("simulate_jaynes_cummings: dim must be >= 2");
  HilbertSpace space = qubit_fock_space(dim);
  Matrix b = embed(annihilation_matrix(dim), 1, space).matrix();
  Matrix sz = embed(pauli_matrix(Pauli::z), 0, space).matrix();
  Matrix sp = embed(pauli_matrix(Pauli::plus), 0, space).matrix();
  Matrix sm = embed(pauli_matrix(Pauli::minus), 0, space).matrix();
  double omega_q = omega_m + detuning;
  Matrix h = 0.5 * omega_q * sz + omega_m * (b.adjoint() * b).eval() +
             lambda * (sp * b + sm * b.adjoint().eval());
  return evolve_state(space, h, psi0, t_grid, qubit_fock_observables(space), opt);
}

TimeSeries simulate_spin_resonator_full(double lambda, double omega_l, double omega_m, int dim,
                                        const QuantumState& psi0, const RealVector& t_grid,
                                        bool use_rwa, const MasterOptions& opt) {
  if (dim < 2) throw std::invalid_argument("simulate_spin_resonator_full: dim must be >= 2");
  if (use_rwa)
    return simulate_jaynes_cummings(lambda, omega_m, omega_l - omega_m, dim, psi0, t_grid, opt);
  HilbertSpace space = qubit_fock_space(dim);
  Matrix b = embed(annihilation_matrix(dim), 1, space).matrix();
  Matrix sz = embed(pauli_matrix(Pauli::z), 0, space).matrix();
  Matrix sx = embed(pauli_matrix(Pauli::x), 0, space).matrix();
  Matrix h = 0.5 * omega_l * sz + omega_m * (b.adjoint() * b).eval() +
             lambda * ((b + b.adjoint().eval()) * sx).eval();
  return evolve_state(space, h, psi0, t_grid, qubit_fock_observables(space), opt);
}

TimeSeries simulate_dispersive_qnd(double chi, double qubit_splitting, double omega_m, int dim,
                                   const QuantumState& rho0, const RealVector& t_grid,
                                   const MasterOptions& opt) {
  if (dim < 2) throw std::invalid_argument("simulate_dispersive_qnd: dim must be >= 2");
  HilbertSpace space = qubit_fock_space(dim);
  Matrix b = embed(annihilation_matrix(dim), 1, space).matrix();
  Matrix n = b.adjoint() * b;
  Matrix sz = embed(pauli_matrix(Pauli::z), 0, space).matrix();
  long d = space.total_dim();
  Matrix h = 0.5 * qubit_splitting * sz + omega_m * n +
             chi * ((n + 0.5 * Matrix::Identity(d, d)) * sz).eval();

  Observables obs;
  obs.emplace_back("sigma_x", embed(pauli_matrix(Pauli::x), 0, space).matrix());
  obs.emplace_back("sigma_y", embed(pauli_matrix(Pauli::y), 0, space).matrix());
  obs.emplace_back("n", n);
  for (int k = 0; k < dim; ++k) {
    Matrix pk = Matrix::Zero(dim, dim);
    pk(k, k) = 1.0;
    obs.emplace_back("P_" + std::to_string(k), embed(pk, 1, space).matrix());
  }

  if (rho0.is_vector())
    return evolve_state(space, h, rho0, t_grid, obs, opt);
  LindbladModel model(space, h);
  return evolve_master(model, rho0, t_grid, obs, opt);
}

LindbladModel membrane_atom_lindblad(const SympatheticParams& p, int dim_m, int dim_at) {
  if (dim_m < 2 || dim_at < 2)
    throw std::invalid_argument("membrane_atom_lindblad: dims must be >= 2");
  if (p.reflectivity < 0 || p.reflectivity > 1)
    throw std::invalid_argument("membrane_atom_lindblad: reflectivity must be in [0,1]");
  if (p.gamma_m < 0 || p.gamma_cool < 0 || p.n_th < 0)
    throw std::invalid_argument("membrane_atom_lindblad: rates must be >= 0");

  HilbertSpace space({dim_m, dim_at}, {"membrane", "atoms"});
  Matrix b = embed(annihilation_matrix(dim_m), 0, space).matrix();
  Matrix a = embed(annihilation_matrix(dim_at), 1, space).matrix();
  Matrix q = embed(position_matrix(dim_m), 0, space).matrix();
  Matrix q_at = embed(position_matrix(dim_at), 1, space).matrix();

  // +2 lam q q_at with the cascaded strength -lam reproduces the asymmetric
  // mean-value equations dp = -Om q - 2 r lam q_at, dp_at = -Om q_at - 2 lam q
  Matrix h = p.omega_m * (b.adjoint() * b).eval() + p.omega_at * (a.adjoint() * a).eval() +
             2.0 * p.lambda_n * (q * q_at).eval();
  LindbladModel model(space, h);
  if (p.reflectivity < 1.0 && p.lambda_n != 0.0)
    model.add_cascaded(q, q_at, -p.lambda_n, p.reflectivity);
  if (p.gamma_m > 0) {
    model.add_collapse(b, p.gamma_m * (p.n_th + 1.0));
    model.add_collapse(b.adjoint(), p.gamma_m * p.n_th);
  }
  if (p.gamma_cool > 0) model.add_collapse(a, p.gamma_cool);
  if (p.radiation_diffusion) {
    double rate = (1.0 - p.reflectivity) * std::abs(p.lambda_n);
    if (rate > 0) {
      model.add_collapse(q, rate);
      model.add_collapse(q_at, rate);
    }
  }
  return model;
}

ExponentialFit fit_exponential_decay(const RealVector& t, const RealVector& y, double floor_value,
                                     double t_skip) {
  ExponentialFit fit;
  double v_max = 0.0;
  for (long i = 0; i < t.size(); ++i)
    if (t(i) >= t_skip) v_max = std::max(v_max, y(i) - floor_value);
  if (v_max <= 0) return fit;
  // drop the tail where the signal has sunk into the floor estimate
  double v_min = 0.02 * v_max;
  std::vector<double> ts, ls;
  for (long i = 0; i < t.size(); ++i) {
    double v = y(i) - floor_value;
    if (t(i) >= t_skip && v > v_min) {
      ts.push_back(t(i));
      ls.push_back(std::log(v));
    }
  }
  if (ts.size() < 4) return fit;
  double n = static_cast<double>(ts.size());
  double st = 0, sl = 0, stt = 0, stl = 0, sll = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sl += ls[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * ls[i];
    sll += ls[i] * ls[i];
  }
  double denom = n * stt - st * st;
  if (denom <= 0) return fit;
  double slope = (n * stl - st * sl) / denom;
  double intercept = (sl - slope * st) / n;
  double ss_tot = sll - sl * sl / n;
  double ss_res = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    double r = ls[i] - (intercept + slope * ts[i]);
    ss_res += r * r;
  }
  fit.rate = -slope;
  fit.amplitude = std::exp(intercept);
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.ok = fit.rate > 0 && fit.r_squared > 0.9;
  return fit;
}

CoolingResult simulate_sympathetic_cooling(const SympatheticParams& p, int dim_m, int dim_at,
                                           int initial_fock, const RealVector& t_grid,
                                           const MasterOptions& opt) {
  CoolingResult result;
  for (int attempt = 0; attempt < 2; ++attempt) {
    LindbladModel model = membrane_atom_lindblad(p, dim_m, dim_at);
    const auto& space = model.space();
    Matrix b = embed(annihilation_matrix(dim_m), 0, space).matrix();
    Matrix a = embed(annihilation_matrix(dim_at), 1, space).matrix();
    Observables obs;
    obs.emplace_back("n_m", (b.adjoint() * b).eval());
    obs.emplace_back("n_at", (a.adjoint() * a).eval());
    obs.emplace_back("q", embed(position_matrix(dim_m), 0, space).matrix());
    obs.emplace_back("p", embed(momentum_matrix(dim_m), 0, space).matrix());
    obs.emplace_back("q_at", embed(position_matrix(dim_at), 1, space).matrix());
    obs.emplace_back("p_at", embed(momentum_matrix(dim_at), 1, space).matrix());

    QuantumState rho0 = fock_state(space, {initial_fock, 0});
    result.dim_m = dim_m;
    result.dim_at = dim_at;
    try {
      result.series = evolve_master(model, rho0, t_grid, obs, opt);
    } catch (const truncation_error&) {
      if (attempt == 0) {
        dim_m *= 2;
        dim_at *= 2;
        continue;
      }
      throw;
    }
    if (result.series.diagnostics.max_top_fock <= opt.warn_top_fock) break;
    // one retry with doubled truncation
    dim_m *= 2;
    dim_at *= 2;
  }

  RealVector n_m = result.series.values.col(0).real();
  // skip the atomic equilibration transient; fit toward the cold steady state
  double t_skip = (p.gamma_cool > 0) ? 3.0 / p.gamma_cool : result.series.t(0);
  double tail = n_m.tail(std::max<long>(2, n_m.size() / 20)).mean();
  double delta_gamma = 4.0 * p.reflectivity * p.lambda_n * p.lambda_n;
  result.gamma_eff_formula = p.gamma_m + (p.gamma_cool > 0 ? delta_gamma / p.gamma_cool : 0.0);
  result.fit = fit_exponential_decay(result.series.t, n_m, tail, t_skip);
  return result;
}

}  // namespace hybrid::lindblad
