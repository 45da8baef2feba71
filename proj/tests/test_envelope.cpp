#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "lcone/envelope.hpp"
#include "lcone/errors.hpp"
#include "lcone/lattice.hpp"

using namespace lcone;

TEST_CASE("chi solves chi ln chi = chi + 1 to machine precision") {
  double chi = solve_chi();
  CHECK(std::abs(chi * std::log(chi) - chi - 1.0) < 1e-14);
  CHECK(chi == doctest::Approx(3.5911214766686221).epsilon(1e-13));
  CHECK(std::round(chi * 100.0) / 100.0 == 3.59);
}

TEST_CASE("envelope constants for chains and grids") {
  EnvelopeParams chain = make_params(Lattice::chain(10, false), 1.0);
  CHECK(chain.Delta == 1.0);
  CHECK(chain.D == 2.0);
  CHECK(chain.v0 == doctest::Approx(chain.chi).epsilon(1e-15));
  CHECK(chain.v == doctest::Approx(chain.chi + 2.0).epsilon(1e-15));
  CHECK(chain.C > 9.9);
  CHECK(chain.C < 10.1);
  CHECK(chain.C == doctest::Approx(2.0 * chain.chi * chain.chi / (chain.chi - 1.0)).epsilon(1e-15));

  EnvelopeParams grid = make_params(Lattice::grid(5, 5, false), 0.7);
  CHECK(grid.Delta == 2.0);
  CHECK(grid.D == 4.0);
  CHECK(grid.v0 == doctest::Approx(grid.chi * 2.0 * 0.7).epsilon(1e-15));
  CHECK(grid.v == doctest::Approx(grid.v0 + 4.0 * 0.7).epsilon(1e-15));

  CHECK_THROWS_AS(make_params(Lattice::chain(4, false), 0.0), std::invalid_argument);
}

TEST_CASE("envelope ODE matches dense matrix exponentiation") {
  Lattice lat = Lattice::chain(12, false);
  Eigen::VectorXd alpha0 = Eigen::VectorXd::Zero(12);
  alpha0[0] = 2.0;
  alpha0[5] = 0.5;
  Eigen::MatrixXd m = lat.adjacency_dense();
  for (double tau : {0.5, 1.0}) {
    for (double t : {0.0, 0.3, 1.7, 4.0}) {
      Eigen::VectorXd expected =
          std::exp(lat.max_degree() * tau * t) * ((tau * t * m).exp() * alpha0);
      Eigen::VectorXd got = envelope_ode(lat, tau, alpha0, t);
      double scale = std::max(alpha0.lpNorm<1>(), expected.cwiseAbs().maxCoeff());
      CHECK((got - expected).cwiseAbs().maxCoeff() <= 1e-10 * scale);
    }
  }
}

TEST_CASE("envelope is monotone in time and fixed at t = 0") {
  Lattice lat = Lattice::grid(3, 3, false);
  Eigen::VectorXd alpha0 = Eigen::VectorXd::Zero(9);
  alpha0[4] = 1.0;
  CHECK((envelope_ode(lat, 1.0, alpha0, 0.0) - alpha0).norm() == 0.0);
  Eigen::VectorXd prev = alpha0;
  for (double t : {0.2, 0.5, 1.0, 2.0}) {
    Eigen::VectorXd cur = envelope_ode(lat, 1.0, alpha0, t);
    CHECK(((cur - prev).array() >= -1e-12).all());
    prev = cur;
  }
}

TEST_CASE("a single decoupled mode keeps its envelope constant") {
  Lattice lat = Lattice::from_edges(1, {});
  Eigen::VectorXd alpha0(1);
  alpha0 << 3.0;
  CHECK(envelope_ode(lat, 1.0, alpha0, 5.0)[0] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("envelope rejects malformed input") {
  Lattice lat = Lattice::chain(4, false);
  Eigen::VectorXd alpha0 = Eigen::VectorXd::Ones(4);
  Eigen::VectorXd wrong = Eigen::VectorXd::Ones(3);
  Eigen::VectorXd negative = alpha0;
  negative[2] = -0.5;
  CHECK_THROWS_AS(envelope_ode(lat, 1.0, wrong, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(envelope_ode(lat, 1.0, negative, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(envelope_ode(lat, 1.0, alpha0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(envelope_ode(lat, -1.0, alpha0, 1.0), std::invalid_argument);
}

TEST_CASE("cone bounds implement their closed forms") {
  EnvelopeParams p = make_params(Lattice::chain(6, false), 1.0);
  double n0 = 2.0;
  CHECK(analytic_density_bound(p, n0, 3.0, 0.5) ==
        doctest::Approx(p.C * n0 * std::exp(p.v * 0.5 - 3.0)).epsilon(1e-15));
  CHECK(moment_bound(p, 4.0, 2.0, 1.0) ==
        doctest::Approx(p.C * 4.0 * std::exp(p.v * 1.0 - 2.0)).epsilon(1e-15));
  double balanced = observable_bound(p, ObservableClass::balanced, 1.5, 4.0, 0.25);
  double general = observable_bound(p, ObservableClass::general, 1.5, 4.0, 0.25);
  CHECK(balanced == doctest::Approx(1.5 * std::exp(p.v * 0.25 - 4.0)).epsilon(1e-15));
  CHECK(general == doctest::Approx(1.5 * std::exp(0.5 * (p.v * 0.25 - 4.0))).epsilon(1e-15));
  // outside the cone the general exponent decays slower
  CHECK(general > balanced);
}

TEST_CASE("elementwise certificate holds on chains and grids") {
  for (double tau : {0.7, 1.0}) {
    for (double t : {0.1, 0.5, 1.0}) {
      CHECK(elementwise_expm_certificate(Lattice::chain(20, false), tau, t) <= 1.0);
      CHECK(elementwise_expm_certificate(Lattice::grid(8, 8, false), tau, t) <= 1.0);
    }
  }
  // the ratio is strictly positive (the bound is not vacuous)
  CHECK(elementwise_expm_certificate(Lattice::chain(20, false), 1.0, 1.0) > 0.01);
}

TEST_CASE("certificate rejects out-of-contract input") {
  Lattice lat = Lattice::chain(4, false);
  CHECK_THROWS_AS(elementwise_expm_certificate(lat, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(elementwise_expm_certificate(lat, 1.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(elementwise_expm_certificate(Lattice::chain(2001, false), 1.0, 0.1),
                  ResourceLimitError);
}
