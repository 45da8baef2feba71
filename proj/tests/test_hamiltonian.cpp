#include <doctest.h>

#include <memory>
#include <stdexcept>

#include <Eigen/Dense>

#include "lcone/hamiltonian.hpp"

using namespace lcone;

namespace {

ModelSpec bose_hubbard(std::shared_ptr<const Lattice> lat, double tau, double u, double mu) {
  ModelSpec spec;
  spec.lattice = std::move(lat);
  spec.species = {SpeciesSpec{Statistics::boson, 0}};
  spec.tau = TauSchedule::constant(tau);
  spec.U = {u};
  spec.mu = {mu};
  return spec;
}

}  // namespace

TEST_CASE("tau schedules evaluate piecewise with left-closed segments") {
  TauSchedule tau = TauSchedule::piecewise({0.0, 1.0, 2.5}, {1.0, -0.5, 2.0});
  CHECK(tau.at(0.0) == 1.0);
  CHECK(tau.at(0.999) == 1.0);
  CHECK(tau.at(1.0) == -0.5);
  CHECK(tau.at(2.5) == 2.0);
  CHECK(tau.at(100.0) == 2.0);
  CHECK(tau.sup_abs() == 2.0);
  CHECK_FALSE(tau.is_constant());
  CHECK(TauSchedule::constant(0.7).is_constant());
  CHECK_THROWS_AS(TauSchedule::piecewise({0.5, 1.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(TauSchedule::piecewise({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(tau.at(-1.0), std::invalid_argument);
}

TEST_CASE("single particle on two sites gives the textbook 2x2 matrix") {
  auto lat = std::make_shared<Lattice>(Lattice::chain(2, false));
  ModelSpec spec = bose_hubbard(lat, 1.0, 0.0, 0.0);
  SectorBasis basis(2, spec.species, {1});
  SparseOperator h = build_hamiltonian(spec, basis, 0.0);
  Eigen::MatrixXd dense = Eigen::MatrixXd(h.matrix());
  Eigen::MatrixXd expected(2, 2);
  expected << 0, -1, -1, 0;
  CHECK((dense - expected).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(h.hermitian());
  CHECK(h.hermiticity_defect() == 0.0);
}

TEST_CASE("on-site repulsion puts U/2 n(n-1) on the diagonal") {
  auto lat = std::make_shared<Lattice>(Lattice::from_edges(1, {}));
  ModelSpec spec = bose_hubbard(lat, 0.0, 2.0, 0.0);
  SectorBasis basis(1, spec.species, {2});
  Eigen::VectorXd diag = diagonal_interaction(spec, basis);
  REQUIRE(diag.size() == 1);
  CHECK(diag[0] == 2.0);  // (U/2) * 2 * 1

  SectorBasis five(1, spec.species, {5});
  CHECK(diagonal_interaction(spec, five)[0] == 20.0);  // (U/2) * 5 * 4
}

TEST_CASE("two bosons on two sites hop with sqrt(2) amplitudes") {
  auto lat = std::make_shared<Lattice>(Lattice::chain(2, false));
  ModelSpec spec = bose_hubbard(lat, 1.0, 0.0, 0.0);
  SectorBasis basis(2, spec.species, {2});
  Eigen::MatrixXd dense = Eigen::MatrixXd(build_hamiltonian(spec, basis, 0.0).matrix());
  // basis order (0,2), (1,1), (2,0)
  Eigen::MatrixXd expected(3, 3);
  double r = -std::sqrt(2.0);
  expected << 0, r, 0, r, 0, r, 0, r, 0;
  CHECK((dense - expected).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("chemical potential shifts a fixed-N sector uniformly") {
  auto lat = std::make_shared<Lattice>(Lattice::chain(3, false));
  ModelSpec with_mu = bose_hubbard(lat, 0.8, 1.3, 0.7);
  ModelSpec without = bose_hubbard(lat, 0.8, 1.3, 0.0);
  SectorBasis basis(3, with_mu.species, {2});
  Eigen::MatrixXd a = Eigen::MatrixXd(build_hamiltonian(with_mu, basis, 0.0).matrix());
  Eigen::MatrixXd b = Eigen::MatrixXd(build_hamiltonian(without, basis, 0.0).matrix());
  Eigen::MatrixXd shift = a - b;
  CHECK((shift + 0.7 * 2.0 * Eigen::MatrixXd::Identity(6, 6)).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("interaction diagonal is exact for large occupations") {
  auto lat = std::make_shared<Lattice>(Lattice::from_edges(1, {}));
  ModelSpec spec = bose_hubbard(lat, 0.0, 3.0, 0.0);
  SectorBasis basis(1, spec.species, {100});
  // (3/2) * 100 * 99 = 14850, exactly representable
  CHECK(diagonal_interaction(spec, basis)[0] == 14850.0);
}

TEST_CASE("density-density and polynomial terms enter the diagonal") {
  auto lat = std::make_shared<Lattice>(Lattice::chain(2, false));
  ModelSpec spec = bose_hubbard(lat, 0.0, 0.0, 0.0);
  OnSiteTerm cubic;
  cubic.site = 0;
  cubic.exponents = {3};
  cubic.coeff = 0.25;
  spec.on_site_terms.push_back(cubic);
  PairTerm pair;
  pair.site_j = 0;
  pair.site_k = 1;
  pair.coeff = -1.5;
  spec.pair_terms.push_back(pair);

  SectorBasis basis(2, spec.species, {3});
  Eigen::VectorXd diag = diagonal_interaction(spec, basis);
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    double n0 = basis.occupation(i, 0, 0);
    double n1 = basis.occupation(i, 0, 1);
    CHECK(diag[static_cast<Eigen::Index>(i)] ==
          doctest::Approx(0.25 * n0 * n0 * n0 - 1.5 * n0 * n1).epsilon(1e-15));
  }
}

TEST_CASE("kinetic matrix is exactly symmetric for every statistics") {
  auto lat = std::make_shared<Lattice>(Lattice::grid(2, 3, false));
  for (Statistics stat : {Statistics::boson, Statistics::fermion, Statistics::hardcore}) {
    ModelSpec spec;
    spec.lattice = lat;
    spec.species = {SpeciesSpec{stat, 0}};
    spec.tau = TauSchedule::constant(0.9);
    spec.U = {1.0};
    spec.mu = {0.0};
    SectorBasis basis(6, spec.species, {3});
    SparseOperator h = build_hamiltonian(spec, basis, 0.0);
    CHECK(h.hermiticity_defect() == 0.0);
  }
}

TEST_CASE("time-dependent hopping scales the kinetic part only") {
  auto lat = std::make_shared<Lattice>(Lattice::chain(2, false));
  ModelSpec spec = bose_hubbard(lat, 0.0, 4.0, 0.0);
  spec.tau = TauSchedule::piecewise({0.0, 1.0}, {1.0, 3.0});
  SectorBasis basis(2, spec.species, {1});
  SectorHamiltonian ham(spec, basis);
  Eigen::MatrixXd early = Eigen::MatrixXd(ham.at_time(0.5).matrix());
  Eigen::MatrixXd late = Eigen::MatrixXd(ham.at_time(2.0).matrix());
  CHECK(early(0, 1) == -1.0);
  CHECK(late(0, 1) == -3.0);
  CHECK(early(0, 0) == late(0, 0));
}

TEST_CASE("two species couple only through density terms") {
  auto lat = std::make_shared<Lattice>(Lattice::chain(2, false));
  ModelSpec spec;
  spec.lattice = lat;
  spec.species = {SpeciesSpec{Statistics::boson, 0}, SpeciesSpec{Statistics::fermion, 0}};
  spec.tau = TauSchedule::constant(1.0);
  spec.U = {0.0, 0.0};
  spec.mu = {0.0, 0.0};
  PairTerm cross;
  cross.site_j = 0;
  cross.site_k = 0;
  cross.species_j = 0;
  cross.species_k = 1;
  cross.coeff = 2.0;
  spec.pair_terms.push_back(cross);

  SectorBasis basis(2, spec.species, {1, 1});
  Eigen::VectorXd diag = diagonal_interaction(spec, basis);
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    double expected = 2.0 * basis.occupation(i, 0, 0) * basis.occupation(i, 1, 0);
    CHECK(diag[static_cast<Eigen::Index>(i)] == expected);
  }
  CHECK(build_hamiltonian(spec, basis, 0.0).hermiticity_defect() == 0.0);
}

TEST_CASE("space Hamiltonian is block diagonal over sectors") {
  auto lat = std::make_shared<Lattice>(Lattice::chain(2, false));
  ModelSpec spec = bose_hubbard(lat, 1.0, 2.0, 0.0);
  FockSpace space(2, spec.species, {2});
  SpaceHamiltonian ham(spec, space);
  Eigen::MatrixXd dense = Eigen::MatrixXd(ham.at_time(0.0).matrix());
  for (std::size_t s = 0; s < space.sector_count(); ++s) {
    SectorBasis sector(2, spec.species, space.sector(s).particle_numbers());
    Eigen::MatrixXd block = Eigen::MatrixXd(build_hamiltonian(spec, sector, 0.0).matrix());
    Eigen::Index off = static_cast<Eigen::Index>(space.offset(s));
    Eigen::Index d = static_cast<Eigen::Index>(sector.dim());
    CHECK((dense.block(off, off, d, d) - block).lpNorm<Eigen::Infinity>() == 0.0);
  }
  // nothing outside the blocks
  double off_block = 0.0;
  for (std::size_t s = 0; s < space.sector_count(); ++s) {
    Eigen::Index off = static_cast<Eigen::Index>(space.offset(s));
    Eigen::Index d = static_cast<Eigen::Index>(space.sector(s).dim());
    dense.block(off, off, d, d).setZero();
  }
  off_block = dense.cwiseAbs().maxCoeff();
  CHECK(off_block == 0.0);
}

TEST_CASE("model validation rejects inconsistent input") {
  auto lat = std::make_shared<Lattice>(Lattice::chain(3, false));
  ModelSpec spec = bose_hubbard(lat, 1.0, 1.0, 0.0);
  spec.U = {1.0, 2.0};  // one species, two couplings
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  ModelSpec bad_site = bose_hubbard(lat, 1.0, 1.0, 0.0);
  OnSiteTerm term;
  term.site = 7;
  term.exponents = {1};
  term.coeff = 1.0;
  bad_site.on_site_terms.push_back(term);
  CHECK_THROWS_AS(bad_site.validate(), std::invalid_argument);

  ModelSpec bad_loss = bose_hubbard(lat, 1.0, 1.0, 0.0);
  bad_loss.loss_rate = -0.1;
  CHECK_THROWS_AS(bad_loss.validate(), std::invalid_argument);

  SectorBasis wrong(4, spec.species, {1});
  CHECK_THROWS_AS(check_compatible(bose_hubbard(lat, 1.0, 0.0, 0.0), wrong.num_sites(),
                                   wrong.species()),
                  std::invalid_argument);
}
