#include "lcone/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace lcone {

SparseOperator::SparseOperator(SparseReal matrix, bool hermitian)
    : matrix_(std::move(matrix)), hermitian_(hermitian) {
  if (matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument("operator matrix must be square");
  }
  matrix_.makeCompressed();
}

VectorXc SparseOperator::apply(const VectorXc& v) const {
  VectorXc out(v.size());
  apply_into(v, out);
  return out;
}

void SparseOperator::apply_into(const VectorXc& v, VectorXc& out) const {
  if (static_cast<std::size_t>(v.size()) != dim()) {
    throw std::invalid_argument("vector length does not match operator dimension");
  }
  Eigen::VectorXd re = matrix_ * v.real();
  Eigen::VectorXd im = matrix_ * v.imag();
  out.resize(v.size());
  out.real() = re;
  out.imag() = im;
}

double SparseOperator::hermiticity_defect() const {
  SparseReal diff = SparseReal(matrix_ - SparseReal(matrix_.transpose()));
  double defect = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SparseReal::InnerIterator it(diff, k); it; ++it) {
      defect = std::max(defect, std::abs(it.value()));
    }
  }
  return defect;
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& other) {
  if (dim() != other.dim()) throw std::invalid_argument("operator dimension mismatch");
  matrix_ += other.matrix_;
  matrix_.makeCompressed();
  hermitian_ = hermitian_ && other.hermitian_;
  return *this;
}

SparseOperator operator*(double scale, const SparseOperator& op) {
  return SparseOperator(SparseReal(scale * op.matrix_), op.hermitian_);
}

void TripletBuilder::add(std::size_t row, std::size_t col, double value) {
  if (row >= dim_ || col >= dim_) throw std::out_of_range("triplet index out of range");
  if (value != 0.0) {
    triplets_.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
  }
}

SparseReal TripletBuilder::build() const {
  SparseReal m(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  m.setFromTriplets(triplets_.begin(), triplets_.end());
  m.makeCompressed();
  return m;
}

SparseReal hop_matrix(const SectorBasis& basis, std::size_t species, int from_site, int to_site) {
  TripletBuilder builder(basis.dim());
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    HopAmplitude hop = apply_hop(basis, species, from_site, to_site, i);
    if (hop.valid) builder.add(hop.index, i, hop.amplitude);
  }
  return builder.build();
}

SparseReal annihilation_block(const SectorBasis& src, const SectorBasis& dst, std::size_t species,
                              int site) {
  if (src.species_count() != dst.species_count()) {
    throw std::invalid_argument("species count mismatch between sectors");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  const SpeciesSector& from = src.species_sector(species);
  const SpeciesSector& to = dst.species_sector(species);
  std::vector<std::size_t> parts;
  for (std::size_t i = 0; i < src.dim(); ++i) {
    src.split(i, parts);
    LadderAmplitude a =
        apply_annihilation(from, to, src.species()[species], site, parts[species]);
    if (!a.valid) continue;
    parts[species] = a.index;
    std::size_t j = dst.combine(parts);
    triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), a.amplitude);
  }
  SparseReal m(static_cast<Eigen::Index>(dst.dim()), static_cast<Eigen::Index>(src.dim()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

Eigen::VectorXd number_diagonal(const SectorBasis& basis, std::size_t species, int site) {
  if (species >= basis.species_count()) throw std::out_of_range("species index out of range");
  if (site < 0 || site >= basis.num_sites()) throw std::out_of_range("site index out of range");
  Eigen::VectorXd diag(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    diag[static_cast<Eigen::Index>(i)] = basis.occupation(i, species, site);
  }
  return diag;
}

Eigen::VectorXd total_number_diagonal(const SectorBasis& basis) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.dim()));
  long total = 0;
  for (long n : basis.particle_numbers()) total += n;
  diag.setConstant(static_cast<double>(total));
  return diag;
}

SparseReal ladder_monomial_matrix(const FockSpace& space, std::size_t species, int site, int p,
                                  int q) {
  if (p < 0 || q < 0) throw std::invalid_argument("ladder exponents must be nonnegative");
  if (species >= space.species().size()) throw std::out_of_range("species index out of range");
  if (site < 0 || site >= space.num_sites()) throw std::out_of_range("site index out of range");

  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t sec = 0; sec < space.sector_count(); ++sec) {
    const SectorBasis& src = space.sector(sec);
    std::vector<long> counts = src.particle_numbers();
    counts[species] += p - q;
    std::ptrdiff_t linear = space.sector_index(counts);
    if (linear < 0) continue;
    // sector_index gives the lexicographic position among count vectors, and
    // sectors are stored in exactly that order
    std::size_t dst_sec = static_cast<std::size_t>(linear);
    const SectorBasis& dst = space.sector(dst_sec);
    std::size_t src_off = space.offset(sec);
    std::size_t dst_off = space.offset(dst_sec);

    const SpeciesSector& sector = src.species_sector(species);
    const SpeciesSpec& spec = src.species()[species];
    int cap_limit = dst.species_sector(species).cap();
    std::vector<std::size_t> parts;
    for (std::size_t i = 0; i < src.dim(); ++i) {
      src.split(i, parts);
      // apply b^q, then (b†)^p, one quantum at a time; all action is at one
      // site so the Jordan-Wigner string parity is fixed throughout
      std::vector<int> occ = sector.state(parts[species]);
      bool string_odd = false;
      for (int s2 = 0; s2 < site; ++s2) string_odd ^= (occ[s2] & 1) != 0;
      double amp = 1.0;
      bool dead = false;
      int n = occ[site];
      for (int step = 0; step < q; ++step) {
        if (n == 0) {
          dead = true;
          break;
        }
        switch (spec.statistics) {
          case Statistics::boson:
            amp *= std::sqrt(static_cast<double>(n));
            break;
          case Statistics::hardcore:
            break;
          case Statistics::fermion:
            if (string_odd) amp = -amp;
            break;
        }
        --n;
      }
      for (int step = 0; step < p && !dead; ++step) {
        if (n >= cap_limit) {
          dead = true;
          break;
        }
        switch (spec.statistics) {
          case Statistics::boson:
            amp *= std::sqrt(static_cast<double>(n + 1));
            break;
          case Statistics::hardcore:
            break;
          case Statistics::fermion:
            if (string_odd) amp = -amp;
            break;
        }
        ++n;
      }
      if (dead) continue;
      occ[site] = n;
      std::size_t new_sub = dst.species_sector(species).rank(occ);
      parts[species] = new_sub;
      std::size_t j = dst.combine(parts);
      triplets.emplace_back(static_cast<int>(dst_off + j), static_cast<int>(src_off + i), amp);
    }
  }
  SparseReal m(static_cast<Eigen::Index>(space.dim()), static_cast<Eigen::Index>(space.dim()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace lcone
