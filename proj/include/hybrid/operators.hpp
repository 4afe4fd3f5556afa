#ifndef HYBRID_OPERATORS_HPP
#define HYBRID_OPERATORS_HPP

#include "hybrid/spaces.hpp"

namespace hybrid {

enum class Pauli { x, y, z, plus, minus };

// --- raw matrix builders -------------------------------------------------

Matrix identity_matrix(long dim);

// <n-1|b|n> = sqrt(n); satisfies the truncated [b, b^dag] = 1 on all Fock
// states below dim-1
Matrix annihilation_matrix(int dim);
Matrix number_matrix(int dim);

// dimensionless quadratures, q = (b + b^dag)/sqrt(2), p = i(b^dag - b)/sqrt(2),
// vacuum variance 1/2
Matrix position_matrix(int dim);
Matrix momentum_matrix(int dim);

// qubit basis order (|g>, |e>), sigma_z|e> = +|e>
Matrix pauli_matrix(Pauli which);

Matrix kron(const Matrix& slow, const Matrix& fast);

Vector fock_vector(int dim, int n);
Vector coherent_vector(int dim, Complex alpha);
// geometric-series thermal state, renormalized on the truncated space
Matrix thermal_density(int dim, double nbar);

// --- space-aware constructors --------------------------------------------

Operator annihilation(int dim);
Operator pauli(Pauli which);

// lift a single-factor operator to the composed space (identity elsewhere)
Operator embed(const Operator& op, int target_factor, const HilbertSpace& space);
Operator embed(const Matrix& op, int target_factor, const HilbertSpace& space);

Matrix commutator(const Matrix& a, const Matrix& b);

// <psi|O|psi> or tr(rho O); real to 1e-10 for Hermitian O on valid states
Complex expectation(const QuantumState& state, const Operator& op);
Complex expectation_matrix(const QuantumState& state, const Matrix& op);

QuantumState fock_state(const HilbertSpace& space, const std::vector<int>& occupation);
// product density matrix from one factor-density per subsystem
QuantumState product_density(const HilbertSpace& space, const std::vector<Matrix>& factor_rhos);

// population of the top `levels` Fock levels of the given factor
double top_level_population(const Matrix& rho, const HilbertSpace& space, int factor, int levels);
double top_level_population(const Vector& psi, const HilbertSpace& space, int factor, int levels);

}  // namespace hybrid

#endif
