#include "hybrid/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace hybrid {

namespace {
const Complex kI(0.0, 1.0);
}

Matrix identity_matrix(long dim) { return Matrix::Identity(dim, dim); }

Matrix annihilation_matrix(int dim) {
  if (dim < 2) throw std::invalid_argument("annihilation: dim must be >= 2");
  Matrix b = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

Matrix number_matrix(int dim) {
  if (dim < 2) throw std::invalid_argument("number: dim must be >= 2");
  Matrix n = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

Matrix position_matrix(int dim) {
  Matrix b = annihilation_matrix(dim);
  return (b + b.adjoint().eval()) / std::sqrt(2.0);
}

Matrix momentum_matrix(int dim) {
  Matrix b = annihilation_matrix(dim);
  return kI * (b.adjoint().eval() - b) / std::sqrt(2.0);
}

Matrix pauli_matrix(Pauli which) {
  Matrix m = Matrix::Zero(2, 2);
  switch (which) {
    case Pauli::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Pauli::y:  // basis order (|g>, |e>): sigma_y = i|g><e| - i|e><g|
      m(0, 1) = kI;
      m(1, 0) = -kI;
      break;
    case Pauli::z:
      m(0, 0) = -1.0;
      m(1, 1) = 1.0;
      break;
    case Pauli::plus:  // |e><g|
      m(1, 0) = 1.0;
      break;
    case Pauli::minus:  // |g><e|
      m(0, 1) = 1.0;
      break;
  }
  return m;
}

Matrix kron(const Matrix& slow, const Matrix& fast) {
  Matrix out(slow.rows() * fast.rows(), slow.cols() * fast.cols());
  for (long i = 0; i < slow.rows(); ++i)
    for (long j = 0; j < slow.cols(); ++j)
      out.block(i * fast.rows(), j * fast.cols(), fast.rows(), fast.cols()) = slow(i, j) * fast;
  return out;
}

Vector fock_vector(int dim, int n) {
  if (n < 0 || n >= dim) throw std::invalid_argument("fock_vector: level out of range");
  Vector v = Vector::Zero(dim);
  v(n) = 1.0;
  return v;
}

Vector coherent_vector(int dim, Complex alpha) {
  Vector v(dim);
  // c_n = alpha^n / sqrt(n!), built recursively, then normalized on the
  // truncated space
  Complex c = 1.0;
  v(0) = c;
  for (int n = 1; n < dim; ++n) {
    c *= alpha / std::sqrt(static_cast<double>(n));
    v(n) = c;
  }
  v.normalize();
  return v;
}

Matrix thermal_density(int dim, double nbar) {
  if (nbar < 0) throw std::invalid_argument("thermal_density: nbar must be >= 0");
  Matrix rho = Matrix::Zero(dim, dim);
  if (nbar == 0.0) {
    rho(0, 0) = 1.0;
    return rho;
  }
  double x = nbar / (nbar + 1.0);
  double w = 1.0, sum = 0.0;
  for (int n = 0; n < dim; ++n) {
    rho(n, n) = w;
    sum += w;
    w *= x;
  }
  rho /= sum;
  return rho;
}

Operator annihilation(int dim) {
  return Operator(HilbertSpace({dim}), annihilation_matrix(dim));
}

Operator pauli(Pauli which) { return Operator(HilbertSpace({2}), pauli_matrix(which)); }

Operator embed(const Matrix& op, int target_factor, const HilbertSpace& space) {
  if (target_factor < 0 || target_factor >= space.factors())
    throw std::invalid_argument("embed: factor index out of range");
  if (op.rows() != op.cols() || op.rows() != space.dim(target_factor))
    throw std::invalid_argument("embed: operator dimension does not match target factor");
  long before = 1, after = 1;
  for (int k = 0; k < target_factor; ++k) before *= space.dim(k);
  for (int k = target_factor + 1; k < space.factors(); ++k) after *= space.dim(k);
  Matrix m = kron(identity_matrix(before), kron(op, identity_matrix(after)));
  return Operator(space, std::move(m));
}

Operator embed(const Operator& op, int target_factor, const HilbertSpace& space) {
  if (op.space().factors() != 1)
    throw std::invalid_argument("embed: operator must live on a single factor");
  return embed(op.matrix(), target_factor, space);
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Complex expectation_matrix(const QuantumState& state, const Matrix& op) {
  if (op.rows() != state.space().total_dim())
    throw std::invalid_argument("expectation: operator/state dimension mismatch");
  if (state.is_vector()) return state.vector().dot(op * state.vector());
  return (state.density() * op).trace();
}

Complex expectation(const QuantumState& state, const Operator& op) {
  if (state.space() != op.space())
    throw std::invalid_argument("expectation: operator/state space mismatch");
  return expectation_matrix(state, op.matrix());
}

QuantumState fock_state(const HilbertSpace& space, const std::vector<int>& occupation) {
  Vector psi = Vector::Zero(space.total_dim());
  psi(space.flatten(occupation)) = 1.0;
  return QuantumState::from_vector(space, std::move(psi));
}

QuantumState product_density(const HilbertSpace& space, const std::vector<Matrix>& factor_rhos) {
  if (static_cast<int>(factor_rhos.size()) != space.factors())
    throw std::invalid_argument("product_density: one factor density per subsystem");
  Matrix rho = factor_rhos[0];
  for (size_t k = 1; k < factor_rhos.size(); ++k) rho = kron(rho, factor_rhos[k]);
  return QuantumState::from_density(space, std::move(rho));
}

double top_level_population(const Matrix& rho, const HilbertSpace& space, int factor, int levels) {
  double pop = 0.0;
  long total = space.total_dim();
  long stride = space.stride(factor);
  int d = space.dim(factor);
  for (long i = 0; i < total; ++i) {
    int level = static_cast<int>((i / stride) % d);
    if (level >= d - levels) pop += rho(i, i).real();
  }
  return pop;
}

double top_level_population(const Vector& psi, const HilbertSpace& space, int factor, int levels) {
  double pop = 0.0;
  long stride = space.stride(factor);
  int d = space.dim(factor);
  for (long i = 0; i < psi.size(); ++i) {
    int level = static_cast<int>((i / stride) % d);
    if (level >= d - levels) pop += std::norm(psi(i));
  }
  return pop;
}

}  // namespace hybrid
