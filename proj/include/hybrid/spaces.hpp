#ifndef HYBRID_SPACES_HPP
#define HYBRID_SPACES_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace hybrid {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Composed truncated Hilbert space. Factor 0 is the slowest-varying index:
// the global basis index of the multi-index (i0, i1, ...) is
// i0*d1*d2*... + i1*d2*... + ... (leftmost tensor factor).
class HilbertSpace {
 public:
  HilbertSpace() = default;
  explicit HilbertSpace(std::vector<int> dims, std::vector<std::string> labels = {});

  int factors() const { return static_cast<int>(dims_.size()); }
  int dim(int factor) const { return dims_.at(factor); }
  const std::vector<int>& dims() const { return dims_; }
  long total_dim() const { return total_; }
  const std::string& label(int factor) const { return labels_.at(factor); }

  // row stride of factor k in the flattened basis
  long stride(int factor) const;
  long flatten(const std::vector<int>& multi_index) const;

  bool operator==(const HilbertSpace& other) const { return dims_ == other.dims_; }
  bool operator!=(const HilbertSpace& other) const { return !(*this == other); }

 private:
  std::vector<int> dims_;
  std::vector<std::string> labels_;
  long total_ = 0;
};

// Dense operator on a composed space.
class Operator {
 public:
  Operator() = default;
  Operator(HilbertSpace space, Matrix matrix);

  const HilbertSpace& space() const { return space_; }
  const Matrix& matrix() const { return matrix_; }
  long dim() const { return matrix_.rows(); }

  // max|M - M^dag| <= tol * max|M|
  bool is_hermitian(double tol = 1e-12) const;
  Operator dagger() const { return Operator(space_, matrix_.adjoint()); }

  Operator operator+(const Operator& rhs) const;
  Operator operator-(const Operator& rhs) const;
  Operator operator*(const Operator& rhs) const;
  friend Operator operator*(Complex scale, const Operator& op) {
    return Operator(op.space_, scale * op.matrix_);
  }
  friend Operator operator*(double scale, const Operator& op) {
    return Operator(op.space_, scale * op.matrix_);
  }

 private:
  HilbertSpace space_;
  Matrix matrix_;
};

// State vector or density matrix on a composed space. Validated on
// construction: vectors normalized to 1e-10, density matrices Hermitian
// with unit trace to 1e-10 and eigenvalues >= -1e-10.
class QuantumState {
 public:
  static QuantumState from_vector(HilbertSpace space, Vector psi);
  static QuantumState from_density(HilbertSpace space, Matrix rho);

  bool is_vector() const { return is_vector_; }
  const HilbertSpace& space() const { return space_; }
  const Vector& vector() const;
  // density matrix view; forms |psi><psi| for vector states
  Matrix density() const;

 private:
  QuantumState() = default;
  HilbertSpace space_;
  bool is_vector_ = true;
  Vector psi_;
  Matrix rho_;
};

}  // namespace hybrid

#endif
