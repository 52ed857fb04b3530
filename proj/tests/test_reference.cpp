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

#include <cmath>
#include <numbers>

#include "phasemc/reference.hpp"
#include "test_helpers.hpp"

using namespace phasemc;

namespace {

HermitianOperator sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(m);
}

SimulationParams moment_params(double tau, double gamma) {
  SimulationParams p;
  p.tau = tau;
  p.gamma = gamma;
  p.t_max = 1.0;
  return p;
}

}  // namespace

TEST_CASE("DensityMatrix invariants") {
  CHECK_NOTHROW(DensityMatrix::maximally_mixed(4));
  CHECK_NOTHROW(DensityMatrix::pure(test::random_state(3, 5)));

  RealVector w(2);
  w << 0.3, 0.7;
  const DensityMatrix mix = DensityMatrix::diagonal(w);
  CHECK(mix.matrix()(1, 1).real() == doctest::Approx(0.7));

  // trace != 1
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::Identity(2, 2)), std::invalid_argument);
  // negative eigenvalue
  ComplexMatrix indefinite(2, 2);
  indefinite << Complex(1.5, 0), 0, 0, Complex(-0.5, 0);
  CHECK_THROWS_AS(DensityMatrix{indefinite}, std::invalid_argument);
  // non-Hermitian
  ComplexMatrix skew(2, 2);
  skew << Complex(0.5, 0), Complex(0.1, 0), Complex(-0.1, 0), Complex(0.5, 0);
  CHECK_THROWS_AS(DensityMatrix{skew}, std::invalid_argument);
}

TEST_CASE("schrodinger_evolve closed forms") {
  ComplexVector z0(2);
  z0 << Complex(1, 0), Complex(0, 0);

  CHECK((schrodinger_evolve(z0, sigma_x(), 0.0, 1.0) - z0).norm() <= 1e-12);

  for (const double t : {0.3, 1.0, 2.5}) {
    const ComplexVector z = schrodinger_evolve(z0, sigma_x(), t, 1.0);
    CHECK(std::abs(z(0) - Complex(std::cos(t), 0)) <= 1e-12);
    CHECK(std::abs(z(1) - Complex(0, -std::sin(t))) <= 1e-12);
  }

  ComplexMatrix d(2, 2);
  d << Complex(0.9, 0), 0, 0, Complex(-0.4, 0);
  const ComplexVector ze = schrodinger_evolve(z0, HermitianOperator(d), 1.7, 2.0);
  CHECK(std::abs(ze(0) - std::exp(Complex(0, -0.9 * 1.7 / 2.0))) <= 1e-12);
  CHECK(std::abs(ze(1)) <= 1e-14);
  CHECK(std::abs(std::abs(ze(0)) - 1.0) <= 1e-12);  // populations constant

  // long-time norm conservation
  const HermitianOperator h(test::random_hermitian(5, 31));
  const ComplexVector z100 = schrodinger_evolve(test::random_state(5, 32), h, 100.0, 1.0);
  CHECK(std::abs(z100.norm() - 1.0) <= 1e-10);
}

TEST_CASE("liouville_evolve preserves structure") {
  const HermitianOperator h(test::random_hermitian(4, 41));
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(4);

  // maximally mixed is stationary
  CHECK((liouville_evolve(mixed, h, 2.3, 1.0).matrix() - mixed.matrix()).norm() <= 1e-12);

  // diagonal rho commuting with diagonal H is stationary
  ComplexMatrix hd = ComplexMatrix::Zero(2, 2);
  hd(0, 0) = 1.0;
  hd(1, 1) = -2.0;
  RealVector w(2);
  w << 0.25, 0.75;
  const DensityMatrix diag_rho = DensityMatrix::diagonal(w);
  CHECK((liouville_evolve(diag_rho, HermitianOperator(hd), 5.0, 1.0).matrix() -
         diag_rho.matrix())
            .norm() <= 1e-12);

  // unitary conjugation preserves trace, hermiticity, and the spectrum
  const DensityMatrix rho0 = DensityMatrix::pure(test::random_state(4, 42));
  const DensityMatrix rho_t = liouville_evolve(rho0, h, 3.1, 0.7);
  CHECK(std::abs(rho_t.matrix().trace() - Complex(1, 0)) <= 1e-12);
  CHECK(is_hermitian(rho_t.matrix(), 1e-10));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> s0(rho0.matrix()), st(rho_t.matrix());
  CHECK((s0.eigenvalues() - st.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("pure-state factorization through the Liouville equation") {
  const HermitianOperator h(test::random_hermitian(3, 55));
  const ComplexVector z0 = test::random_state(3, 56);
  const double t = 1.9;

  const DensityMatrix rho_t = liouville_evolve(DensityMatrix::pure(z0), h, t, 1.0);
  const ComplexVector psi = schrodinger_evolve(z0, h, t, 1.0);
  CHECK((rho_t.matrix() - psi * psi.adjoint()).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("RK4 fallback agrees with the spectral propagator") {
  const HermitianOperator h(test::random_hermitian(3, 77));
  const DensityMatrix rho0 = DensityMatrix::pure(test::random_state(3, 78));
  const ComplexMatrix via_rk4 = liouville_evolve_rk4(rho0.matrix(), h, 1.0, 1e-3, 1.0);
  const ComplexMatrix via_spectral = liouville_evolve(rho0, h, 1.0, 1.0).matrix();
  CHECK((via_rk4 - via_spectral).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("exact mean recursion") {
  ComplexVector z0(2);
  z0 << Complex(0.6, 0), Complex(0, 0.8);

  SUBCASE("steps=0 returns the initial vector") {
    CHECK(exact_mean_recursion(z0, sigma_x(), moment_params(1e-3, 1.0), 0) == z0);
  }

  SUBCASE("gamma=0 equals the composed Euler iteration bit for bit") {
    const SimulationParams p = moment_params(1e-3, 0.0);
    ComplexVector z = z0;
    const Complex drift(0.0, -p.tau / p.planck_h);
    for (int k = 0; k < 100; ++k) {
      ComplexVector hz = sigma_x().matrix() * z;
      z = Complex(1.0, 0.0) * z + drift * hz;
    }
    CHECK(exact_mean_recursion(z0, sigma_x(), p, 100) == z);
  }

  SUBCASE("H=0 decays geometrically") {
    const HermitianOperator zero(ComplexMatrix::Zero(2, 2));
    const SimulationParams p = moment_params(1e-3, 2.0);
    const ComplexVector out = exact_mean_recursion(z0, zero, p, 500);
    const double factor = std::exp(-2.0 * 1e-3 * 500.0 / 2.0);
    CHECK((out - factor * z0).norm() <= 1e-12);
  }

  SUBCASE("preconditions") {
    SimulationParams p = moment_params(1e-3, 1.0);
    p.noise_dist = NoiseDist::kRademacher;
    CHECK_THROWS_AS(exact_mean_recursion(z0, sigma_x(), p, 1), std::invalid_argument);
    p = moment_params(1e-3, 1.0);
    p.renormalize = true;
    CHECK_THROWS_AS(exact_mean_recursion(z0, sigma_x(), p, 1), std::invalid_argument);
    p = moment_params(1e-3, 1.0);
    p.scheme = Scheme::kExpanded;
    CHECK_THROWS_AS(exact_mean_recursion(z0, sigma_x(), p, 1), std::invalid_argument);
  }
}

TEST_CASE("exact covariance recursion") {
  ComplexVector z0(2);
  z0 << Complex(1, 0), Complex(0, 0);
  const ComplexMatrix rho0 = z0 * z0.adjoint();

  SUBCASE("H=0 leaves rho unchanged for any gamma") {
    const HermitianOperator zero(ComplexMatrix::Zero(2, 2));
    const auto out = exact_covariance_recursion(rho0, zero, moment_params(1e-3, 3.0), 700);
    CHECK((out.matrix - rho0).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(out.trace == doctest::Approx(1.0));
  }

  SUBCASE("consistency with the Liouville equation as tau -> 0") {
    const HermitianOperator h = sigma_x();
    const DensityMatrix dm(rho0);
    const ComplexMatrix target = liouville_evolve(dm, h, 1.0, 1.0).matrix();
    const auto err = [&](double tau) {
      SimulationParams p = moment_params(tau, 1.0);
      const auto steps = static_cast<std::int64_t>(std::llround(1.0 / tau));
      return (exact_covariance_recursion(rho0, h, p, steps).matrix - target)
          .cwiseAbs()
          .maxCoeff();
    };
    const double coarse = err(1e-2);
    const double fine = err(1e-3);
    CHECK(coarse / fine >= 5.0);  // first-order consistency
    CHECK(fine <= 0.02);
  }

  SUBCASE("trace drifts only at second order and is reported") {
    const auto out = exact_covariance_recursion(rho0, sigma_x(), moment_params(1e-3, 1.0), 1000);
    CHECK(is_hermitian(out.matrix, 1e-12));
    CHECK(out.trace > 1.0);
    CHECK(out.trace == doctest::Approx(1.0).epsilon(2e-3));
  }

  SUBCASE("rademacher phase mean uses cos(sqrt(tau gamma))") {
    SimulationParams p = moment_params(1e-2, 2.0);
    p.noise_dist = NoiseDist::kRademacher;
    const auto rad = exact_covariance_recursion(rho0, sigma_x(), p, 1);
    SimulationParams pg = moment_params(1e-2, 2.0);
    const auto gauss = exact_covariance_recursion(rho0, sigma_x(), pg, 1);
    const double c_rad = std::cos(std::sqrt(1e-2 * 2.0));
    const double c_gauss = std::exp(-2.0 * 1e-2 / 2.0);
    // the two one-step maps differ exactly by the phase-mean coefficient
    const ComplexMatrix hm = sigma_x().matrix();
    const ComplexMatrix comm = (hm * rho0 - rho0 * hm) / Complex(0, 1);
    const ComplexMatrix diff_expected = 1e-2 * (c_rad - c_gauss) * comm;
    CHECK((rad.matrix - gauss.matrix - diff_expected).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("canonical transformation is an exact bijection") {
  const double planck = 0.5;
  const double alpha = default_alpha(planck);
  CHECK(alpha == doctest::Approx(1.0));  // 1/sqrt(2 * 0.5)

  const ComplexVector z = test::random_state(4, 91);
  const CanonicalState c = complex_to_canonical(z, alpha, planck);
  CHECK(2.0 * c.alpha * c.beta == doctest::Approx(1.0 / planck).epsilon(1e-14));

  // alpha = beta => z = (q + i p) / sqrt(2 h)
  for (Eigen::Index j = 0; j < 4; ++j) {
    CHECK(z(j).real() == doctest::Approx(c.q(j) / std::sqrt(2.0 * planck)).epsilon(1e-13));
    CHECK(z(j).imag() == doctest::Approx(c.p(j) / std::sqrt(2.0 * planck)).epsilon(1e-13));
  }

  const ComplexVector back = canonical_to_complex(c);
  CHECK((back - z).cwiseAbs().maxCoeff() <= 1e-14);

  const ComplexVector zero_state = ComplexVector::Zero(2);
  const CanonicalState origin = complex_to_canonical(zero_state, 1.0, 0.5);
  CHECK(origin.q.norm() == 0.0);
  CHECK(origin.p.norm() == 0.0);

  CHECK_THROWS_AS(complex_to_canonical(z, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("classical flow of a diagonal Hamiltonian is periodic ellipses") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.8;
  d(1, 1) = 1.9;
  const HermitianOperator h(d);
  const double planck = 1.3;

  const ComplexVector z0 = test::random_state(2, 17);
  const CanonicalState c0 = complex_to_canonical(z0, default_alpha(planck), planck);

  // each degree of freedom has period 2 pi h / E_j; after one period of
  // mode 0 the q_0/p_0 pair returns
  const double period0 = 2.0 * std::numbers::pi * planck / 0.8;
  const CanonicalState c = classical_evolve(c0, h, period0, period0 / 4096.0, planck,
                                            ClassicalScheme::kExactLinearFlow);
  CHECK(c.q(0) == doctest::Approx(c0.q(0)).epsilon(1e-9));
  CHECK(c.p(0) == doctest::Approx(c0.p(0)).epsilon(1e-9));

  CHECK(classical_evolve(c0, h, 0.0, 0.1, planck).q == c0.q);
}

TEST_CASE("classical exact flow reproduces the quantum evolution") {
  const double planck = 0.7;
  const HermitianOperator h(test::random_hermitian(4, 61));
  const ComplexVector z0 = test::random_state(4, 62);
  const double t = 5.0;

  const CanonicalState c0 = complex_to_canonical(z0, default_alpha(planck), planck);
  const CanonicalState ct =
      classical_evolve(c0, h, t, 0.01, planck, ClassicalScheme::kExactLinearFlow);
  const ComplexVector via_classical = canonical_to_complex(ct);
  const ComplexVector via_quantum = schrodinger_evolve(z0, h, t, planck);
  CHECK((via_classical - via_quantum).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("leapfrog is second order and conserves energy to O(dt^2)") {
  const double planck = 1.0;
  const HermitianOperator h(test::random_hermitian(4, 71));
  const ComplexVector z0 = test::random_state(4, 72);
  const CanonicalState c0 = complex_to_canonical(z0, default_alpha(planck), planck);
  const double t = 1.0;

  const auto state_error = [&](double dt) {
    const CanonicalState lf = classical_evolve(c0, h, t, dt, planck, ClassicalScheme::kLeapfrog);
    const ComplexVector ref = schrodinger_evolve(z0, h, t, planck);
    return (canonical_to_complex(lf) - ref).cwiseAbs().maxCoeff();
  };
  const double e1 = state_error(1.0 / 128.0);
  const double e2 = state_error(1.0 / 256.0);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 1.9);

  const auto energy_error = [&](double dt) {
    const CanonicalState lf = classical_evolve(c0, h, t, dt, planck, ClassicalScheme::kLeapfrog);
    return std::abs(classical_energy(lf, h) - classical_energy(c0, h));
  };
  const double h1 = energy_error(1.0 / 128.0);
  const double h2 = energy_error(1.0 / 256.0);
  CHECK(h1 / h2 >= 3.5);

  // exact flow conserves the Hamiltonian function to machine precision
  const CanonicalState ex = classical_evolve(c0, h, t, 0.01, planck);
  CHECK(std::abs(classical_energy(ex, h) - classical_energy(c0, h)) <= 1e-11);
}
