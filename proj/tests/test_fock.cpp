#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lcone/errors.hpp"
#include "lcone/fock.hpp"

using namespace lcone;

namespace {

// brute-force enumeration by an odometer over all (cap+1)^L tuples, keeping
// the ones with the right particle total, in lexicographic order
std::vector<std::vector<int>> enumerate_reference(int sites, int cap, long particles) {
  std::vector<std::vector<int>> out;
  std::vector<int> occ(static_cast<std::size_t>(sites), 0);
  while (true) {
    long total = 0;
    for (int n : occ) total += n;
    if (total == particles) out.push_back(occ);
    int pos = sites - 1;
    while (pos >= 0 && occ[static_cast<std::size_t>(pos)] == cap) {
      occ[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++occ[static_cast<std::size_t>(pos)];
  }
  return out;
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

TEST_CASE("uncapped boson sector matches brute-force enumeration") {
  // 3 bosons on 12 sites: dim = C(12 + 3 - 1, 3) = 364
  SpeciesSector sector(12, SpeciesSpec{Statistics::boson, 0}, 3);
  auto reference = enumerate_reference(12, 3, 3);  // cap 3 = N suffices for uncapped
  REQUIRE(sector.dim() == 364);
  REQUIRE(sector.dim() == reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    CHECK(sector.state(i) == reference[i]);
    CHECK(sector.rank(reference[i]) == i);
  }
}

TEST_CASE("capped boson sector respects n_max") {
  SpeciesSector sector(6, SpeciesSpec{Statistics::boson, 2}, 4);
  auto reference = enumerate_reference(6, 2, 4);
  REQUIRE(sector.dim() == reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    CHECK(sector.state(i) == reference[i]);
    CHECK(sector.rank(reference[i]) == i);
  }
  for (std::size_t i = 0; i < sector.dim(); ++i) {
    for (int n : sector.state(i)) CHECK(n <= 2);
  }
}

TEST_CASE("fermion and hardcore sector dimensions are binomial") {
  for (Statistics stat : {Statistics::fermion, Statistics::hardcore}) {
    SpeciesSector sector(9, SpeciesSpec{stat, 0}, 4);
    CHECK(sector.dim() == static_cast<std::size_t>(binomial(9, 4)));
    CHECK(sector.cap() == 1);
  }
  CHECK_THROWS_AS(SpeciesSector(4, SpeciesSpec{Statistics::fermion, 3}, 2), std::invalid_argument);
}

TEST_CASE("empty and full sectors are one-dimensional") {
  SpeciesSector vacuum(5, SpeciesSpec{Statistics::boson, 0}, 0);
  CHECK(vacuum.dim() == 1);
  CHECK(vacuum.state(0) == std::vector<int>(5, 0));
  SpeciesSector full(4, SpeciesSpec{Statistics::hardcore, 0}, 4);
  CHECK(full.dim() == 1);
  CHECK(full.state(0) == std::vector<int>(4, 1));
  CHECK_THROWS_AS(SpeciesSector(4, SpeciesSpec{Statistics::hardcore, 0}, 5),
                  std::invalid_argument);
}

TEST_CASE("multi-species basis is row-major with species 0 slowest") {
  SectorBasis basis(3, {SpeciesSpec{Statistics::boson, 0}, SpeciesSpec{Statistics::fermion, 0}},
                    {2, 1});
  const SpeciesSector& bosons = basis.species_sector(0);
  const SpeciesSector& fermions = basis.species_sector(1);
  REQUIRE(basis.dim() == bosons.dim() * fermions.dim());
  std::vector<std::size_t> parts(2);
  for (std::size_t g = 0; g < basis.dim(); ++g) {
    basis.split(g, parts);
    CHECK(parts[0] == g / fermions.dim());
    CHECK(parts[1] == g % fermions.dim());
    CHECK(basis.combine(parts) == g);
    auto occ = basis.unrank(g);
    CHECK(basis.rank(occ) == g);
    for (int site = 0; site < 3; ++site) {
      CHECK(basis.occupation(g, 0, site) == occ[0][static_cast<std::size_t>(site)]);
      CHECK(basis.occupation(g, 1, site) == occ[1][static_cast<std::size_t>(site)]);
    }
  }
}

TEST_CASE("boson hops carry sqrt factors and stay in the sector") {
  SectorBasis basis(3, {SpeciesSpec{Statistics::boson, 0}}, {2});
  std::size_t idx = basis.rank({{2, 0, 0}});
  HopAmplitude hop = apply_hop(basis, 0, 0, 1, idx);  // b†_1 b_0 |2,0,0> = 2 |1,1,0>
  REQUIRE(hop.valid);
  CHECK(hop.index == basis.rank({{1, 1, 0}}));
  CHECK(hop.amplitude == doctest::Approx(std::sqrt(2.0) * std::sqrt(1.0)));

  HopAmplitude dead = apply_hop(basis, 0, 1, 0, idx);  // annihilates the empty site
  CHECK_FALSE(dead.valid);

  HopAmplitude diag = apply_hop(basis, 0, 0, 0, idx);  // n_0
  REQUIRE(diag.valid);
  CHECK(diag.index == idx);
  CHECK(diag.amplitude == doctest::Approx(2.0));
}

TEST_CASE("capped boson hops vanish when the target site is full") {
  SectorBasis basis(2, {SpeciesSpec{Statistics::boson, 1}}, {1});
  std::size_t idx = basis.rank({{1, 0}});
  HopAmplitude hop = apply_hop(basis, 0, 0, 1, idx);
  REQUIRE(hop.valid);
  CHECK(hop.amplitude == doctest::Approx(1.0));
  // with both sites at the cap nothing can move
  SectorBasis full(2, {SpeciesSpec{Statistics::boson, 1}}, {2});
  CHECK_FALSE(apply_hop(full, 0, 0, 1, 0).valid);
}

TEST_CASE("fermion hop across an occupied site picks up a minus sign") {
  // |1,1,1,0> --(b†_3 b_0)--> crosses sites 1 and 2, both occupied: sign +1
  SectorBasis basis(4, {SpeciesSpec{Statistics::fermion, 0}}, {3});
  std::size_t idx = basis.rank({{1, 1, 1, 0}});
  HopAmplitude hop = apply_hop(basis, 0, 0, 3, idx);
  REQUIRE(hop.valid);
  CHECK(hop.index == basis.rank({{0, 1, 1, 1}}));
  CHECK(hop.amplitude == doctest::Approx(1.0));

  // |1,1,0,0> --(b†_2 b_0)--> crosses the occupied site 1: sign -1
  SectorBasis two(4, {SpeciesSpec{Statistics::fermion, 0}}, {2});
  std::size_t idx2 = two.rank({{1, 1, 0, 0}});
  HopAmplitude hop2 = apply_hop(two, 0, 0, 2, idx2);
  REQUIRE(hop2.valid);
  CHECK(hop2.amplitude == doctest::Approx(-1.0));

  // nearest-neighbor hop never crosses anything: |1,0,1> --(b†_1 b_2)--> +1
  SectorBasis three(3, {SpeciesSpec{Statistics::fermion, 0}}, {2});
  std::size_t idx3 = three.rank({{1, 0, 1}});
  HopAmplitude hop3 = apply_hop(three, 0, 2, 1, idx3);
  REQUIRE(hop3.valid);
  CHECK(hop3.index == three.rank({{1, 1, 0}}));
  CHECK(hop3.amplitude == doctest::Approx(1.0));

  // Pauli exclusion: hopping onto an occupied site dies
  CHECK_FALSE(apply_hop(two, 0, 0, 1, idx2).valid);
}

TEST_CASE("ladder operators connect adjacent sectors with sqrt(n) amplitudes") {
  SpeciesSpec spec{Statistics::boson, 0};
  SpeciesSector two(3, spec, 2);
  SpeciesSector one(3, spec, 1);
  std::size_t idx = two.rank({0, 2, 0});
  LadderAmplitude down = apply_annihilation(two, one, spec, 1, idx);
  REQUIRE(down.valid);
  CHECK(down.index == one.rank({0, 1, 0}));
  CHECK(down.amplitude == doctest::Approx(std::sqrt(2.0)));

  LadderAmplitude up = apply_creation(one, two, spec, 1, down.index);
  REQUIRE(up.valid);
  CHECK(up.index == idx);
  CHECK(up.amplitude == doctest::Approx(std::sqrt(2.0)));

  CHECK_FALSE(apply_annihilation(two, one, spec, 0, idx).valid);
}

TEST_CASE("fermionic ladder operators carry the string parity") {
  SpeciesSpec spec{Statistics::fermion, 0};
  SpeciesSector two(3, spec, 2);
  SpeciesSector one(3, spec, 1);
  // b_2 |1,0,1> = -|1,0,0> (one occupied site below site 2)
  std::size_t idx = two.rank({1, 0, 1});
  LadderAmplitude down = apply_annihilation(two, one, spec, 2, idx);
  REQUIRE(down.valid);
  CHECK(down.index == one.rank({1, 0, 0}));
  CHECK(down.amplitude == doctest::Approx(-1.0));
}

TEST_CASE("Fock space stacks sectors in ascending count order") {
  FockSpace space(2, {SpeciesSpec{Statistics::boson, 0}}, {2});
  // sectors N = 0, 1, 2 with dims 1, 2, 3
  REQUIRE(space.sector_count() == 3);
  CHECK(space.dim() == 6);
  CHECK(space.offset(0) == 0);
  CHECK(space.offset(1) == 1);
  CHECK(space.offset(2) == 3);
  CHECK(space.sector(2).particle_numbers() == std::vector<long>{2});
  CHECK(space.sector_index({1}) == 1);
  CHECK(space.sector_index({5}) == -1);
  CHECK(space.sector_of(0) == 0);
  CHECK(space.sector_of(2) == 1);
  CHECK(space.sector_of(5) == 2);
}

TEST_CASE("multi-species Fock space uses mixed-radix sector indexing") {
  FockSpace space(2, {SpeciesSpec{Statistics::boson, 0}, SpeciesSpec{Statistics::hardcore, 0}},
                  {1, 2});
  REQUIRE(space.sector_count() == 6);
  std::size_t i = 0;
  for (long n0 = 0; n0 <= 1; ++n0) {
    for (long n1 = 0; n1 <= 2; ++n1) {
      CHECK(space.sector_index({n0, n1}) == static_cast<std::ptrdiff_t>(i));
      CHECK(space.sector(i).particle_numbers() == std::vector<long>{n0, n1});
      ++i;
    }
  }
}

TEST_CASE("dimension guard rejects absurd sectors") {
  CHECK_THROWS_AS(SpeciesSector(64, SpeciesSpec{Statistics::boson, 0}, 32), ResourceLimitError);
}
