#ifndef LCONE_FOCK_HPP
#define LCONE_FOCK_HPP

#include <cstddef>
#include <vector>

namespace lcone {

enum class Statistics { boson, fermion, hardcore };

/// One particle species. n_max <= 0 means uncapped (the fixed-N sector then
/// caps occupations at N). Fermions and hardcore bosons always have cap 1.
struct SpeciesSpec {
  Statistics statistics = Statistics::boson;
  int n_max = 0;
};

/// Fixed-particle-number occupation basis for a single species.
///
/// States are enumerated in ascending lexicographic order of the occupation
/// tuple (n_0, n_1, ..., n_{L-1}); ranking is combinatorial (a counting
/// table of bounded compositions), no hashing, O(L * cap) per rank.
class SpeciesSector {
 public:
  SpeciesSector(int num_sites, SpeciesSpec spec, long particles);

  std::size_t dim() const { return states_.size(); }
  int num_sites() const { return num_sites_; }
  long particles() const { return particles_; }
  const SpeciesSpec& spec() const { return spec_; }
  int cap() const { return cap_; }  // effective per-site cap within this sector

  const std::vector<int>& state(std::size_t index) const;
  std::size_t rank(const std::vector<int>& occupations) const;

 private:
  int num_sites_;
  SpeciesSpec spec_;
  long particles_;
  int cap_;
  std::vector<std::vector<int>> states_;
  // ways_[l][n]: fillings of the last l sites with n particles, per-site <= cap_
  std::vector<std::vector<std::size_t>> ways_;
};

/// Tensor product of per-species fixed-N sectors on a common lattice.
/// Global indices are row-major with species 0 slowest, which coincides with
/// lexicographic order on the concatenated occupation tuples.
class SectorBasis {
 public:
  SectorBasis(int num_sites, std::vector<SpeciesSpec> species, std::vector<long> particle_numbers);

  std::size_t dim() const { return dim_; }
  int num_sites() const { return num_sites_; }
  std::size_t species_count() const { return sectors_.size(); }
  const SpeciesSector& species_sector(std::size_t s) const { return sectors_[s]; }
  const std::vector<long>& particle_numbers() const { return particle_numbers_; }
  const std::vector<SpeciesSpec>& species() const { return species_; }

  /// Per-species sub-index of a global basis index.
  std::size_t species_index(std::size_t global, std::size_t s) const;
  /// Recombine per-species sub-indices into the global index.
  std::size_t combine(const std::vector<std::size_t>& per_species) const;
  void split(std::size_t global, std::vector<std::size_t>& per_species) const;

  std::size_t rank(const std::vector<std::vector<int>>& occupations) const;
  std::vector<std::vector<int>> unrank(std::size_t global) const;

  int occupation(std::size_t global, std::size_t s, int site) const;

 private:
  int num_sites_;
  std::vector<SpeciesSpec> species_;
  std::vector<long> particle_numbers_;
  std::vector<SpeciesSector> sectors_;
  std::vector<std::size_t> strides_;
  std::size_t dim_;
};

struct HopAmplitude {
  bool valid = false;       // false: the hop annihilates the state
  std::size_t index = 0;    // target basis index within the same sector
  double amplitude = 0.0;   // matrix element of b†_to b_from (with fermionic sign)
};

/// Apply b†_to b_from for one species to a basis state. Number-conserving:
/// the result stays inside the sector. Fermionic amplitudes carry the
/// Jordan-Wigner sign for the natural site ordering 0 < 1 < ... < L-1
/// (annihilation first, each operator picking up the parity of the
/// occupations strictly below its site).
HopAmplitude apply_hop(const SectorBasis& basis, std::size_t species, int from_site, int to_site,
                       std::size_t state_index);

struct LadderAmplitude {
  bool valid = false;
  std::size_t index = 0;  // index in the destination sector
  double amplitude = 0.0;
};

/// b_site: maps a state of `src` into the sector with one particle fewer.
LadderAmplitude apply_annihilation(const SpeciesSector& src, const SpeciesSector& dst,
                                   const SpeciesSpec& spec, int site, std::size_t state_index);
/// b†_site: maps a state of `src` into the sector with one particle more.
LadderAmplitude apply_creation(const SpeciesSector& src, const SpeciesSector& dst,
                               const SpeciesSpec& spec, int site, std::size_t state_index);

/// Direct sum of SectorBasis blocks over all particle-number vectors
/// 0 <= N_s <= max_counts[s], ordered lexicographically ascending in the
/// count vector. This is the state space for dissipative runs and for
/// observables that do not conserve particle number.
class FockSpace {
 public:
  FockSpace(int num_sites, std::vector<SpeciesSpec> species, std::vector<long> max_counts);

  std::size_t dim() const { return dim_; }
  std::size_t sector_count() const { return sectors_.size(); }
  const SectorBasis& sector(std::size_t i) const { return sectors_[i]; }
  std::size_t offset(std::size_t i) const { return offsets_[i]; }
  int num_sites() const { return num_sites_; }
  const std::vector<SpeciesSpec>& species() const { return species_; }
  const std::vector<long>& max_counts() const { return max_counts_; }

  /// Index of the sector with the given particle-number vector, or -1.
  std::ptrdiff_t sector_index(const std::vector<long>& counts) const;
  /// Sector containing a global index.
  std::size_t sector_of(std::size_t global) const;

 private:
  int num_sites_;
  std::vector<SpeciesSpec> species_;
  std::vector<long> max_counts_;
  std::vector<SectorBasis> sectors_;
  std::vector<std::size_t> offsets_;
  std::size_t dim_;
};

}  // namespace lcone

#endif
