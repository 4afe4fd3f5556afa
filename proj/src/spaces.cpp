#include "hybrid/spaces.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace hybrid {

HilbertSpace::HilbertSpace(std::vector<int> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  if (dims_.empty()) throw std::invalid_argument("HilbertSpace: no factors");
  total_ = 1;
  for (int d : dims_) {
    if (d < 2) throw std::invalid_argument("HilbertSpace: factor dimension must be >= 2");
    total_ *= d;
  }
  if (labels_.empty()) {
    labels_.reserve(dims_.size());
    for (size_t k = 0; k < dims_.size(); ++k) labels_.push_back("s" + std::to_string(k));
  }
  if (labels_.size() != dims_.size())
    throw std::invalid_argument("HilbertSpace: one label per factor required");
}

long HilbertSpace::stride(int factor) const {
  long s = 1;
  for (size_t k = factor + 1; k < dims_.size(); ++k) s *= dims_[k];
  return s;
}

long HilbertSpace::flatten(const std::vector<int>& multi_index) const {
  if (static_cast<int>(multi_index.size()) != factors())
    throw std::invalid_argument("flatten: index rank mismatch");
  long idx = 0;
  for (int k = 0; k < factors(); ++k) {
    if (multi_index[k] < 0 || multi_index[k] >= dims_[k])
      throw std::invalid_argument("flatten: index out of range");
    idx += multi_index[k] * stride(k);
  }
  return idx;
}

Operator::Operator(HilbertSpace space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != space_.total_dim())
    throw std::invalid_argument("Operator: matrix dimension does not match space");
}

bool Operator::is_hermitian(double tol) const {
  double scale = matrix_.cwiseAbs().maxCoeff();
  double dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  return dev <= tol * scale || dev == 0.0;
}

Operator Operator::operator+(const Operator& rhs) const {
  if (space_ != rhs.space_) throw std::invalid_argument("Operator+: space mismatch");
  return Operator(space_, matrix_ + rhs.matrix_);
}

Operator Operator::operator-(const Operator& rhs) const {
  if (space_ != rhs.space_) throw std::invalid_argument("Operator-: space mismatch");
  return Operator(space_, matrix_ - rhs.matrix_);
}

Operator Operator::operator*(const Operator& rhs) const {
  if (space_ != rhs.space_) throw std::invalid_argument("Operator*: space mismatch");
  return Operator(space_, matrix_ * rhs.matrix_);
}

QuantumState QuantumState::from_vector(HilbertSpace space, Vector psi) {
  if (psi.size() != space.total_dim())
    throw std::invalid_argument("QuantumState: vector length does not match space");
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("QuantumState: vector not normalized");
  QuantumState s;
  s.space_ = std::move(space);
  s.is_vector_ = true;
  s.psi_ = std::move(psi);
  return s;
}

QuantumState QuantumState::from_density(HilbertSpace space, Matrix rho) {
  if (rho.rows() != rho.cols() || rho.rows() != space.total_dim())
    throw std::invalid_argument("QuantumState: density dimension does not match space");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("QuantumState: density matrix not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw std::invalid_argument("QuantumState: density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("QuantumState: density matrix not positive semidefinite");
  QuantumState s;
  s.space_ = std::move(space);
  s.is_vector_ = false;
  s.rho_ = std::move(rho);
  return s;
}

const Vector& QuantumState::vector() const {
  if (!is_vector_) throw std::logic_error("QuantumState: not a vector state");
  return psi_;
}

Matrix QuantumState::density() const {
  if (is_vector_) return psi_ * psi_.adjoint();
  return rho_;
}

}  // namespace hybrid
