// Copyright 2026 The phasemc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "phasemc/linalg.hpp"
#include "test_helpers.hpp"

using namespace phasemc;

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

}  // namespace

TEST_CASE("matvec basics") {
  ComplexVector v(2);
  v << Complex(1, 0), Complex(0, 1);

  CHECK(matvec(ComplexMatrix::Identity(2, 2), v) == v);

  ComplexVector flipped = matvec(pauli_x(), ComplexVector(ComplexVector::Unit(2, 0)));
  CHECK(flipped(0) == Complex(0, 0));
  CHECK(flipped(1) == Complex(1, 0));

  ComplexMatrix pauli_y(2, 2);
  pauli_y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  ComplexVector rotated = matvec(pauli_y, ComplexVector(ComplexVector::Unit(2, 0)));
  CHECK(rotated(0) == Complex(0, 0));
  CHECK(rotated(1) == Complex(0, 1));

  ComplexVector wrong(3);
  wrong.setZero();
  CHECK_THROWS_AS(matvec(pauli_x(), wrong), std::invalid_argument);
}

TEST_CASE("HermitianOperator validation") {
  CHECK_NOTHROW(HermitianOperator(pauli_x()));

  ComplexMatrix bad(2, 2);
  bad << 0, 1, 2, 0;
  CHECK_THROWS_AS(HermitianOperator{bad}, std::invalid_argument);

  ComplexMatrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(HermitianOperator{rect}, std::invalid_argument);
}

TEST_CASE("hermitian_eigen on sigma_x has eigenvalues -1, +1") {
  // characteristic polynomial lambda^2 - 1 = 0
  const auto eig = hermitian_eigen(HermitianOperator(pauli_x()));
  CHECK(eig.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(eig.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-12));

  const ComplexMatrix v = eig.eigenvectors;
  CHECK((v.adjoint() * v - ComplexMatrix::Identity(2, 2)).norm() <= 1e-10);
  const ComplexMatrix rebuilt =
      v * eig.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
  CHECK((rebuilt - pauli_x()).norm() <= 1e-10 * pauli_x().norm());
}

TEST_CASE("hermitian_eigen diagonal and degenerate cases") {
  ComplexMatrix d(2, 2);
  d << Complex(3, 0), 0, 0, Complex(-2, 0);
  const auto eig = hermitian_eigen(HermitianOperator(d));
  CHECK(eig.eigenvalues(0) == doctest::Approx(-2.0));
  CHECK(eig.eigenvalues(1) == doctest::Approx(3.0));

  // degenerate pair must not fail and must still give an orthonormal basis
  const auto deg = hermitian_eigen(HermitianOperator(2.0 * ComplexMatrix::Identity(2, 2)));
  CHECK(deg.eigenvalues(0) == doctest::Approx(2.0));
  CHECK(deg.eigenvalues(1) == doctest::Approx(2.0));
  CHECK((deg.eigenvectors.adjoint() * deg.eigenvectors - ComplexMatrix::Identity(2, 2)).norm() <=
        1e-10);
}

TEST_CASE("hermitian_eigen reconstruction on random matrices") {
  for (const Eigen::Index n : {3, 5, 8}) {
    const ComplexMatrix m = test::random_hermitian(n, 100 + static_cast<unsigned>(n));
    const HermitianOperator h(m);
    const auto eig = hermitian_eigen(h);
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
      CHECK(eig.eigenvalues(k) <= eig.eigenvalues(k + 1));
    }
    const ComplexMatrix rebuilt =
        eig.eigenvectors * eig.eigenvalues.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
    CHECK((rebuilt - m).norm() <= 1e-10 * m.norm());
  }
}

TEST_CASE("unitary_propagator closed forms") {
  const HermitianOperator h(pauli_x());

  CHECK((unitary_propagator(h, 0.0, 1.0) - ComplexMatrix::Identity(2, 2)).norm() <= 1e-12);

  // exp(-i sigma_x t) = cos(t) I - i sin(t) sigma_x; at t = pi/2 this is
  // [[0, -i], [-i, 0]]
  const ComplexMatrix u = unitary_propagator(h, std::numbers::pi / 2.0, 1.0);
  CHECK(std::abs(u(0, 0)) <= 1e-12);
  CHECK(std::abs(u(1, 1)) <= 1e-12);
  CHECK(std::abs(u(0, 1) - Complex(0, -1)) <= 1e-12);
  CHECK(std::abs(u(1, 0) - Complex(0, -1)) <= 1e-12);

  ComplexMatrix d(2, 2);
  d << Complex(0.7, 0), 0, 0, Complex(-1.3, 0);
  const double t = 2.37, planck = 0.5;
  const ComplexMatrix ud = unitary_propagator(HermitianOperator(d), t, planck);
  CHECK(std::abs(ud(0, 1)) <= 1e-14);
  CHECK(std::abs(ud(0, 0) - std::exp(Complex(0, -0.7 * t / planck))) <= 1e-12);
  CHECK(std::abs(ud(1, 1) - std::exp(Complex(0, 1.3 * t / planck))) <= 1e-12);

  CHECK_THROWS_AS(unitary_propagator(h, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("unitary_propagator is unitary and a one-parameter group") {
  for (const Eigen::Index n : {2, 4, 8}) {
    const HermitianOperator h(test::random_hermitian(n, 200 + static_cast<unsigned>(n)));
    for (const double t : {0.1, 1.0, 10.0}) {
      const ComplexMatrix u = unitary_propagator(h, t, 1.0);
      CHECK((u * u.adjoint() - ComplexMatrix::Identity(n, n)).norm() <= 1e-9);
    }
    const double t1 = 0.4, t2 = 1.7;
    const ComplexMatrix lhs = unitary_propagator(h, t1 + t2, 1.0);
    const ComplexMatrix rhs = unitary_propagator(h, t1, 1.0) * unitary_propagator(h, t2, 1.0);
    CHECK((lhs - rhs).norm() <= 1e-9);
  }
}
