#include "lcone/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lcone/errors.hpp"

namespace lcone {

namespace {

int effective_cap(const SpeciesSpec& spec, long particles) {
  if (spec.statistics == Statistics::fermion || spec.statistics == Statistics::hardcore) {
    if (spec.n_max > 1) {
      throw std::invalid_argument("fermion/hardcore species cannot have n_max > 1");
    }
    return 1;
  }
  long cap = (spec.n_max > 0) ? spec.n_max : particles;
  if (cap > particles) cap = particles;
  if (cap > std::numeric_limits<int>::max()) {
    throw std::invalid_argument("occupation cap too large");
  }
  return static_cast<int>(cap);
}

}  // namespace

SpeciesSector::SpeciesSector(int num_sites, SpeciesSpec spec, long particles)
    : num_sites_(num_sites), spec_(spec), particles_(particles) {
  if (num_sites <= 0) throw std::invalid_argument("sector needs at least one site");
  if (particles < 0) throw std::invalid_argument("negative particle number");
  cap_ = (particles == 0) ? 0 : effective_cap(spec, particles);
  if (static_cast<long>(cap_) * num_sites < particles) {
    throw std::invalid_argument("sector is empty: " + std::to_string(particles) +
                                " particles exceed capacity " +
                                std::to_string(static_cast<long>(cap_) * num_sites));
  }

  // ways_[l][n]: number of occupation tuples on l sites summing to n with each
  // entry in [0, cap_]. Row l = 0 is the empty product.
  ways_.assign(num_sites_ + 1, std::vector<std::size_t>(particles_ + 1, 0));
  ways_[0][0] = 1;
  for (int l = 1; l <= num_sites_; ++l) {
    for (long n = 0; n <= particles_; ++n) {
      std::size_t total = 0;
      for (int k = 0; k <= cap_ && k <= n; ++k) {
        std::size_t add = ways_[l - 1][n - k];
        if (add > std::numeric_limits<std::size_t>::max() - total) {
          throw ResourceLimitError("sector dimension overflows size_t");
        }
        total += add;
      }
      ways_[l][n] = total;
    }
  }
  std::size_t dim = ways_[num_sites_][particles_];
  if (dim == 0) throw std::invalid_argument("sector is empty");
  if (dim > (std::size_t{1} << 28)) {
    throw ResourceLimitError("sector dimension " + std::to_string(dim) + " exceeds limit");
  }

  // Enumerate ascending lexicographically with an odometer that respects the
  // trailing-capacity constraint, so no candidate is ever discarded.
  states_.reserve(dim);
  std::vector<int> occ(num_sites_, 0);
  long remaining = particles_;
  // first (lexicographically smallest) state: push everything to the right
  for (int j = num_sites_ - 1; j >= 0 && remaining > 0; --j) {
    int take = static_cast<int>(std::min<long>(cap_, remaining));
    occ[j] = take;
    remaining -= take;
  }
  states_.push_back(occ);
  while (states_.size() < dim) {
    // find rightmost position that can absorb one more particle from its right
    long right_sum = 0;
    int pos = -1;
    for (int j = num_sites_ - 1; j >= 1; --j) {
      right_sum += occ[j];
      if (right_sum > 0 && occ[j - 1] < cap_) {
        pos = j - 1;
        break;
      }
    }
    if (pos < 0) throw std::logic_error("sector enumeration exhausted early");
    long tail = right_sum - 1;  // one particle moves up to pos
    occ[pos] += 1;
    for (int j = pos + 1; j < num_sites_; ++j) occ[j] = 0;
    for (int j = num_sites_ - 1; j > pos && tail > 0; --j) {
      int take = static_cast<int>(std::min<long>(cap_, tail));
      occ[j] = take;
      tail -= take;
    }
    states_.push_back(occ);
  }
}

const std::vector<int>& SpeciesSector::state(std::size_t index) const {
  if (index >= states_.size()) throw std::out_of_range("state index out of range");
  return states_[index];
}

std::size_t SpeciesSector::rank(const std::vector<int>& occupations) const {
  if (static_cast<int>(occupations.size()) != num_sites_) {
    throw std::invalid_argument("occupation tuple has wrong length");
  }
  long total = 0;
  for (int n : occupations) {
    if (n < 0 || n > cap_) throw std::invalid_argument("occupation outside [0, cap]");
    total += n;
  }
  if (total != particles_) {
    throw std::invalid_argument("occupation tuple has wrong particle number");
  }
  // count lexicographically smaller tuples: at each site, tuples that put a
  // smaller occupation there and distribute the remainder to the right
  std::size_t below = 0;
  long remaining = particles_;
  for (int j = 0; j < num_sites_; ++j) {
    for (int k = 0; k < occupations[j]; ++k) {
      long rest = remaining - k;
      if (rest >= 0 && rest <= particles_) below += ways_[num_sites_ - 1 - j][rest];
    }
    remaining -= occupations[j];
  }
  return below;
}

SectorBasis::SectorBasis(int num_sites, std::vector<SpeciesSpec> species,
                         std::vector<long> particle_numbers)
    : num_sites_(num_sites), species_(std::move(species)),
      particle_numbers_(std::move(particle_numbers)) {
  if (species_.empty()) throw std::invalid_argument("need at least one species");
  if (species_.size() != particle_numbers_.size()) {
    throw std::invalid_argument("one particle number per species required");
  }
  sectors_.reserve(species_.size());
  for (std::size_t s = 0; s < species_.size(); ++s) {
    sectors_.emplace_back(num_sites_, species_[s], particle_numbers_[s]);
  }
  strides_.assign(sectors_.size(), 1);
  dim_ = 1;
  for (std::size_t s = sectors_.size(); s-- > 0;) {
    strides_[s] = dim_;
    if (sectors_[s].dim() != 0 && dim_ > std::numeric_limits<std::size_t>::max() / sectors_[s].dim()) {
      throw ResourceLimitError("basis dimension overflows size_t");
    }
    dim_ *= sectors_[s].dim();
  }
  if (dim_ > (std::size_t{1} << 28)) {
    throw ResourceLimitError("basis dimension " + std::to_string(dim_) + " exceeds limit");
  }
}

std::size_t SectorBasis::species_index(std::size_t global, std::size_t s) const {
  return (global / strides_[s]) % sectors_[s].dim();
}

std::size_t SectorBasis::combine(const std::vector<std::size_t>& per_species) const {
  if (per_species.size() != sectors_.size()) {
    throw std::invalid_argument("per-species index count mismatch");
  }
  std::size_t global = 0;
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    if (per_species[s] >= sectors_[s].dim()) throw std::out_of_range("species index out of range");
    global += per_species[s] * strides_[s];
  }
  return global;
}

void SectorBasis::split(std::size_t global, std::vector<std::size_t>& per_species) const {
  per_species.resize(sectors_.size());
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    per_species[s] = species_index(global, s);
  }
}

std::size_t SectorBasis::rank(const std::vector<std::vector<int>>& occupations) const {
  if (occupations.size() != sectors_.size()) {
    throw std::invalid_argument("one occupation tuple per species required");
  }
  std::size_t global = 0;
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    global += sectors_[s].rank(occupations[s]) * strides_[s];
  }
  return global;
}

std::vector<std::vector<int>> SectorBasis::unrank(std::size_t global) const {
  if (global >= dim_) throw std::out_of_range("basis index out of range");
  std::vector<std::vector<int>> occ(sectors_.size());
  for (std::size_t s = 0; s < sectors_.size(); ++s) {
    occ[s] = sectors_[s].state(species_index(global, s));
  }
  return occ;
}

int SectorBasis::occupation(std::size_t global, std::size_t s, int site) const {
  return sectors_[s].state(species_index(global, s))[site];
}

namespace {

int parity_below(const std::vector<int>& occ, int site) {
  int p = 0;
  for (int j = 0; j < site; ++j) p += occ[j];
  return p & 1;
}

}  // namespace

HopAmplitude apply_hop(const SectorBasis& basis, std::size_t species, int from_site, int to_site,
                       std::size_t state_index) {
  if (species >= basis.species_count()) throw std::out_of_range("species index out of range");
  const SpeciesSector& sector = basis.species_sector(species);
  if (from_site < 0 || from_site >= sector.num_sites() || to_site < 0 ||
      to_site >= sector.num_sites()) {
    throw std::out_of_range("hop site out of range");
  }
  std::size_t sub = basis.species_index(state_index, species);
  std::vector<int> occ = sector.state(sub);

  HopAmplitude result;
  if (from_site == to_site) {
    if (occ[from_site] == 0) return result;
    result.valid = true;
    result.index = state_index;
    result.amplitude = static_cast<double>(occ[from_site]);  // b†_j b_j = n_j
    return result;
  }
  if (occ[from_site] == 0) return result;
  if (occ[to_site] >= sector.cap()) return result;

  double amp = 0.0;
  switch (sector.spec().statistics) {
    case Statistics::boson:
      amp = std::sqrt(static_cast<double>(occ[from_site]) *
                      static_cast<double>(occ[to_site] + 1));
      break;
    case Statistics::hardcore:
      amp = 1.0;
      break;
    case Statistics::fermion: {
      // annihilate at from_site first, then create at to_site; each picks up
      // the Jordan-Wigner parity of the sites strictly below it
      int sign = parity_below(occ, from_site);
      occ[from_site] -= 1;
      sign ^= parity_below(occ, to_site);
      occ[from_site] += 1;
      amp = sign ? -1.0 : 1.0;
      break;
    }
  }
  occ[from_site] -= 1;
  occ[to_site] += 1;
  std::size_t new_sub = sector.rank(occ);

  std::vector<std::size_t> parts;
  basis.split(state_index, parts);
  parts[species] = new_sub;
  result.valid = true;
  result.index = basis.combine(parts);
  result.amplitude = amp;
  return result;
}

LadderAmplitude apply_annihilation(const SpeciesSector& src, const SpeciesSector& dst,
                                   const SpeciesSpec& spec, int site, std::size_t state_index) {
  if (dst.particles() != src.particles() - 1) {
    throw std::invalid_argument("annihilation must lower the particle number by one");
  }
  if (site < 0 || site >= src.num_sites()) throw std::out_of_range("site out of range");
  std::vector<int> occ = src.state(state_index);
  LadderAmplitude result;
  if (occ[site] == 0) return result;

  double amp = 0.0;
  switch (spec.statistics) {
    case Statistics::boson:
      amp = std::sqrt(static_cast<double>(occ[site]));
      break;
    case Statistics::hardcore:
      amp = 1.0;
      break;
    case Statistics::fermion:
      amp = parity_below(occ, site) ? -1.0 : 1.0;
      break;
  }
  occ[site] -= 1;
  result.valid = true;
  result.index = dst.rank(occ);
  result.amplitude = amp;
  return result;
}

LadderAmplitude apply_creation(const SpeciesSector& src, const SpeciesSector& dst,
                               const SpeciesSpec& spec, int site, std::size_t state_index) {
  if (dst.particles() != src.particles() + 1) {
    throw std::invalid_argument("creation must raise the particle number by one");
  }
  if (site < 0 || site >= src.num_sites()) throw std::out_of_range("site out of range");
  std::vector<int> occ = src.state(state_index);
  LadderAmplitude result;
  if (occ[site] >= dst.cap()) return result;

  double amp = 0.0;
  switch (spec.statistics) {
    case Statistics::boson:
      amp = std::sqrt(static_cast<double>(occ[site] + 1));
      break;
    case Statistics::hardcore:
      amp = 1.0;
      break;
    case Statistics::fermion:
      amp = parity_below(occ, site) ? -1.0 : 1.0;
      break;
  }
  occ[site] += 1;
  result.valid = true;
  result.index = dst.rank(occ);
  result.amplitude = amp;
  return result;
}

FockSpace::FockSpace(int num_sites, std::vector<SpeciesSpec> species, std::vector<long> max_counts)
    : num_sites_(num_sites), species_(std::move(species)), max_counts_(std::move(max_counts)) {
  if (species_.empty()) throw std::invalid_argument("need at least one species");
  if (species_.size() != max_counts_.size()) {
    throw std::invalid_argument("one maximum count per species required");
  }
  for (long m : max_counts_) {
    if (m < 0) throw std::invalid_argument("negative maximum count");
  }
  // lexicographically ascending count vectors, species 0 slowest
  std::vector<long> counts(species_.size(), 0);
  dim_ = 0;
  while (true) {
    sectors_.emplace_back(num_sites_, species_, counts);
    offsets_.push_back(dim_);
    dim_ += sectors_.back().dim();
    if (dim_ > (std::size_t{1} << 28)) {
      throw ResourceLimitError("Fock space dimension exceeds limit");
    }
    std::size_t s = species_.size();
    while (s-- > 0) {
      if (counts[s] < max_counts_[s]) {
        ++counts[s];
        for (std::size_t t = s + 1; t < species_.size(); ++t) counts[t] = 0;
        break;
      }
      if (s == 0) return;
    }
  }
}

std::ptrdiff_t FockSpace::sector_index(const std::vector<long>& counts) const {
  if (counts.size() != species_.size()) return -1;
  std::size_t idx = 0;
  for (std::size_t s = 0; s < species_.size(); ++s) {
    if (counts[s] < 0 || counts[s] > max_counts_[s]) return -1;
    idx = idx * static_cast<std::size_t>(max_counts_[s] + 1) + static_cast<std::size_t>(counts[s]);
  }
  return static_cast<std::ptrdiff_t>(idx);
}

std::size_t FockSpace::sector_of(std::size_t global) const {
  if (global >= dim_) throw std::out_of_range("Fock space index out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), global);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

}  // namespace lcone
