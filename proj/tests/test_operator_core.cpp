#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "hybrid/operators.hpp"
#include "hybrid/spaces.hpp"

using namespace hybrid;

TEST_CASE("hilbert space invariants") {
  HilbertSpace s({2, 3, 4}, {"qubit", "a", "b"});
  CHECK(s.total_dim() == 24);
  CHECK(s.stride(0) == 12);
  CHECK(s.stride(2) == 1);
  CHECK(s.flatten({1, 2, 3}) == 12 + 8 + 3);
  CHECK_THROWS_AS(HilbertSpace({1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(HilbertSpace(std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("annihilation operator entries") {
  Matrix b2 = annihilation_matrix(2);
  CHECK(b2(0, 1).real() == doctest::Approx(1.0).scale(0.0));
  CHECK(b2(1, 0) == Complex(0, 0));
  CHECK(b2(0, 0) == Complex(0, 0));

  Matrix b3 = annihilation_matrix(3);
  CHECK(b3(1, 2).real() == doctest::Approx(std::sqrt(2.0)).scale(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(annihilation_matrix(1), std::invalid_argument);
}

TEST_CASE("number operator by direct matrix multiply") {
  // <n|b'b|n> = n for all n below the truncation
  int dim = 8;
  Matrix b = annihilation_matrix(dim);
  Matrix n = b.adjoint() * b;
  for (int k = 0; k < dim; ++k)
    CHECK(std::abs(n(k, k).real() - k) <= 1e-14 * std::max(1.0, double(k)));
}

TEST_CASE("truncated commutator is identity except the top corner") {
  for (int dim = 2; dim <= 9; ++dim) {
    Matrix b = annihilation_matrix(dim);
    Matrix c = commutator(b, b.adjoint());
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double expected = (i == j) ? (i == dim - 1 ? -(dim - 1.0) : 1.0) : 0.0;
        CHECK(std::abs(c(i, j) - Complex(expected)) < 1e-12);
      }
  }
}

TEST_CASE("pauli matrices") {
  Matrix z = pauli_matrix(Pauli::z);
  CHECK(z(0, 0) == Complex(-1.0));  // |g> first
  CHECK(z(1, 1) == Complex(1.0));

  Matrix x = pauli_matrix(Pauli::x);
  CHECK((x * x - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);

  Matrix y = pauli_matrix(Pauli::y);
  Matrix lhs = commutator(x, y);
  Matrix rhs = Complex(0, 2) * z;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-15);

  // sigma_+ raises |g> to |e>
  Vector g = fock_vector(2, 0);
  Vector e = pauli_matrix(Pauli::plus) * g;
  CHECK(std::abs(e(1) - Complex(1.0)) < 1e-15);
}

TEST_CASE("embed: identity, commuting supports, trace scaling") {
  HilbertSpace space({2, 3, 4});
  Operator id0 = embed(identity_matrix(2), 0, space);
  CHECK((id0.matrix() - Matrix::Identity(24, 24)).cwiseAbs().maxCoeff() == 0.0);

  Operator sz = embed(pauli_matrix(Pauli::z), 0, space);
  Operator b = embed(annihilation_matrix(3), 1, space);
  CHECK((sz.matrix() * b.matrix() - b.matrix() * sz.matrix()).cwiseAbs().maxCoeff() < 1e-14);

  // trace(embed(op, k)) = trace(op) * prod of other dims
  Matrix n3 = number_matrix(3);
  Operator embedded = embed(n3, 1, space);
  CHECK(embedded.matrix().trace().real() ==
        doctest::Approx(n3.trace().real() * 2 * 4).scale(0.0).epsilon(1e-14));

  CHECK_THROWS_AS(embed(number_matrix(5), 1, space), std::invalid_argument);
}

TEST_CASE("embed preserves hermiticity and spectrum multiplicity") {
  HilbertSpace space({3, 2});
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  Matrix h(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h(i, j) = Complex(dist(rng), dist(rng));
  h = ((h + h.adjoint()) / 2.0).eval();

  Operator big = embed(h, 0, space);
  CHECK(big.is_hermitian());

  Eigen::SelfAdjointEigenSolver<Matrix> small_eig(h, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> big_eig(big.matrix(), Eigen::EigenvaluesOnly);
  std::vector<double> expected;
  for (int k = 0; k < 3; ++k)
    for (int copy = 0; copy < 2; ++copy) expected.push_back(small_eig.eigenvalues()(k));
  std::sort(expected.begin(), expected.end());
  for (int k = 0; k < 6; ++k)
    CHECK(big_eig.eigenvalues()(k) == doctest::Approx(expected[k]).scale(0.0).epsilon(1e-12));
}

TEST_CASE("basis ordering: factor 0 is the slowest index") {
  HilbertSpace space({2, 3});
  // |e> (x) |1>: global index 1*3 + 1 = 4
  QuantumState s = fock_state(space, {1, 1});
  CHECK(std::abs(s.vector()(4) - Complex(1.0)) < 1e-15);

  Matrix n = embed(number_matrix(3), 1, space).matrix();
  CHECK(n(4, 4).real() == doctest::Approx(1.0).scale(0.0));
  Matrix sz = embed(pauli_matrix(Pauli::z), 0, space).matrix();
  CHECK(sz(4, 4).real() == doctest::Approx(1.0).scale(0.0));  // excited
  CHECK(sz(1, 1).real() == doctest::Approx(-1.0).scale(0.0)); // ground, |g,1>
}

TEST_CASE("expectation values") {
  HilbertSpace mode({5});
  QuantumState ground = fock_state(mode, {0});
  Matrix b = annihilation_matrix(5);
  Operator n(mode, b.adjoint() * b);
  CHECK(std::abs(expectation(ground, n)) < 1e-15);

  HilbertSpace mode8({8});
  QuantumState three = fock_state(mode8, {3});
  Operator n8(mode8, annihilation_matrix(8).adjoint() * annihilation_matrix(8));
  CHECK(expectation(three, n8).real() == doctest::Approx(3.0).scale(0.0));

  // thermal state, explicit geometric series as the oracle
  double nbar = 0.5;
  int dim = 40;
  double x = nbar / (nbar + 1.0);
  Matrix rho = Matrix::Zero(dim, dim);
  double norm = 0, mean = 0, w = 1;
  for (int k = 0; k < dim; ++k) {
    rho(k, k) = w;
    norm += w;
    mean += k * w;
    w *= x;
  }
  rho /= norm;
  mean /= norm;
  HilbertSpace big({dim});
  QuantumState thermal = QuantumState::from_density(big, rho);
  Operator nbig(big, annihilation_matrix(dim).adjoint() * annihilation_matrix(dim));
  Complex got = expectation(thermal, nbig);
  CHECK(got.real() == doctest::Approx(mean).scale(0.0).epsilon(1e-12));
  CHECK(got.real() == doctest::Approx(0.5).scale(0.0).epsilon(1e-9));
  CHECK(std::abs(got.imag()) < 1e-12);

  // library helper agrees with the explicit construction
  Matrix helper = thermal_density(dim, nbar);
  CHECK((helper - rho).cwiseAbs().maxCoeff() < 1e-15);

  // space mismatch
  CHECK_THROWS_AS(expectation(ground, nbig), std::invalid_argument);
}

TEST_CASE("expectation of hermitian operators is real on mixed states") {
  std::mt19937 rng(21);
  std::normal_distribution<double> dist;
  int dim = 6;
  HilbertSpace space({dim});

  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(dist(rng), dist(rng));
  Matrix rho = m * m.adjoint();
  rho /= rho.trace();
  QuantumState state = QuantumState::from_density(space, rho);

  Matrix h(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) h(i, j) = Complex(dist(rng), dist(rng));
  h = ((h + h.adjoint()) / 2.0).eval();
  CHECK(std::abs(expectation_matrix(state, h).imag()) < 1e-10);
}

TEST_CASE("state validation") {
  HilbertSpace space({3});
  Vector bad = Vector::Ones(3);
  CHECK_THROWS_AS(QuantumState::from_vector(space, bad), std::invalid_argument);

  Matrix not_herm = Matrix::Zero(3, 3);
  not_herm(0, 1) = 1.0;
  not_herm(0, 0) = 1.0;
  CHECK_THROWS_AS(QuantumState::from_density(space, not_herm), std::invalid_argument);

  Matrix wrong_trace = 0.5 * Matrix::Identity(3, 3);
  CHECK_THROWS_AS(QuantumState::from_density(space, wrong_trace), std::invalid_argument);

  Matrix negative = Matrix::Zero(3, 3);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(QuantumState::from_density(space, negative), std::invalid_argument);
}

TEST_CASE("hermiticity flag tolerance") {
  HilbertSpace space({2});
  Matrix almost = pauli_matrix(Pauli::x);
  almost(0, 1) += Complex(0, 1e-14);
  CHECK(Operator(space, almost).is_hermitian());
  almost(0, 1) += Complex(0, 1e-6);
  CHECK_FALSE(Operator(space, almost).is_hermitian());
}

TEST_CASE("coherent state moments") {
  int dim = 25;
  Complex alpha(0.8, 0.3);
  Vector v = coherent_vector(dim, alpha);
  HilbertSpace space({dim});
  QuantumState s = QuantumState::from_vector(space, v);
  Matrix b = annihilation_matrix(dim);
  Complex mean_b = expectation_matrix(s, b);
  CHECK(std::abs(mean_b - alpha) < 1e-10);
  Complex mean_n = expectation_matrix(s, (b.adjoint() * b).eval());
  CHECK(mean_n.real() == doctest::Approx(std::norm(alpha)).scale(0.0).epsilon(1e-10));
}

TEST_CASE("top level population monitor") {
  HilbertSpace space({2, 4});
  QuantumState s = fock_state(space, {0, 3});
  CHECK(top_level_population(s.vector(), space, 1, 1) == doctest::Approx(1.0).scale(0.0));
  CHECK(top_level_population(s.vector(), space, 1, 2) == doctest::Approx(1.0).scale(0.0));
  QuantumState low = fock_state(space, {1, 0});
  CHECK(top_level_population(low.vector(), space, 1, 2) == doctest::Approx(0.0));
  CHECK(top_level_population(low.density(), space, 1, 2) == doctest::Approx(0.0));
}
