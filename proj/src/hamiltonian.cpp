#include "lcone/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lcone/errors.hpp"

namespace lcone {

TauSchedule TauSchedule::constant(double tau) {
  if (!std::isfinite(tau)) throw std::invalid_argument("tau must be finite");
  TauSchedule s;
  s.start_times_ = {0.0};
  s.values_ = {tau};
  return s;
}

TauSchedule TauSchedule::piecewise(std::vector<double> start_times, std::vector<double> values) {
  if (start_times.empty() || start_times.size() != values.size()) {
    throw std::invalid_argument("schedule needs matching nonempty time and value lists");
  }
  if (start_times.front() != 0.0) {
    throw std::invalid_argument("schedule must start at t = 0");
  }
  for (std::size_t i = 0; i + 1 < start_times.size(); ++i) {
    if (!(start_times[i] < start_times[i + 1])) {
      throw std::invalid_argument("schedule breakpoints must be strictly increasing");
    }
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("schedule values must be finite");
  }
  TauSchedule s;
  s.start_times_ = std::move(start_times);
  s.values_ = std::move(values);
  return s;
}

double TauSchedule::at(double t) const {
  if (t < 0.0) throw std::invalid_argument("schedule queried at negative time");
  auto it = std::upper_bound(start_times_.begin(), start_times_.end(), t);
  return values_[static_cast<std::size_t>(it - start_times_.begin()) - 1];
}

double TauSchedule::sup_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void ModelSpec::validate() const {
  if (!lattice) throw std::invalid_argument("model has no lattice");
  if (species.empty()) throw std::invalid_argument("model needs at least one species");
  if (U.size() != species.size() || mu.size() != species.size()) {
    throw std::invalid_argument("U and mu must have one entry per species");
  }
  if (loss_rate < 0.0) throw std::invalid_argument("loss rate must be nonnegative");
  int L = lattice->num_sites();
  for (const OnSiteTerm& term : on_site_terms) {
    if (term.site < 0 || term.site >= L) {
      throw std::invalid_argument("on-site term references site " + std::to_string(term.site) +
                                  " outside the lattice");
    }
    if (term.exponents.size() != species.size()) {
      throw std::invalid_argument("on-site term needs one exponent per species");
    }
    for (int e : term.exponents) {
      if (e < 0) throw std::invalid_argument("on-site term exponents must be nonnegative");
    }
  }
  for (const PairTerm& term : pair_terms) {
    if (term.site_j < 0 || term.site_j >= L || term.site_k < 0 || term.site_k >= L) {
      throw std::invalid_argument("pair term references a site outside the lattice");
    }
    if (term.species_j >= species.size() || term.species_k >= species.size()) {
      throw std::invalid_argument("pair term references an unknown species");
    }
  }
}

void check_compatible(const ModelSpec& spec, int num_sites,
                      const std::vector<SpeciesSpec>& species) {
  spec.validate();
  if (spec.lattice->num_sites() != num_sites) {
    throw std::invalid_argument("basis has " + std::to_string(num_sites) +
                                " sites but the lattice has " +
                                std::to_string(spec.lattice->num_sites()));
  }
  if (species.size() != spec.species.size()) {
    throw std::invalid_argument("basis species count differs from the model");
  }
  for (std::size_t s = 0; s < species.size(); ++s) {
    if (species[s].statistics != spec.species[s].statistics ||
        species[s].n_max != spec.species[s].n_max) {
      throw std::invalid_argument("basis species " + std::to_string(s) +
                                  " differs from the model");
    }
  }
}

namespace {

long long checked_pow(long long base, int exp) {
  long long result = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && std::abs(result) > (1LL << 62) / std::abs(base)) {
      throw ResourceLimitError("occupation power overflows 64-bit arithmetic");
    }
    result *= base;
  }
  return result;
}

}  // namespace

Eigen::VectorXd diagonal_interaction(const ModelSpec& spec, const SectorBasis& basis) {
  check_compatible(spec, basis.num_sites(), basis.species());
  const std::size_t S = spec.species.size();
  const int L = basis.num_sites();
  Eigen::VectorXd diag(static_cast<Eigen::Index>(basis.dim()));

  for (std::size_t i = 0; i < basis.dim(); ++i) {
    double energy = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      const std::vector<int>& occ = basis.species_sector(s).state(basis.species_index(i, s));
      for (int j = 0; j < L; ++j) {
        long long n = occ[j];
        energy += 0.5 * spec.U[s] * static_cast<double>(n * (n - 1));
        energy -= spec.mu[s] * static_cast<double>(n);
      }
    }
    for (const OnSiteTerm& term : spec.on_site_terms) {
      long long prod = 1;
      for (std::size_t s = 0; s < S; ++s) {
        long long n = basis.occupation(i, s, term.site);
        long long p = checked_pow(n, term.exponents[s]);
        if (p != 0 && std::abs(prod) > (1LL << 62) / std::abs(p)) {
          throw ResourceLimitError("density monomial overflows 64-bit arithmetic");
        }
        prod *= p;
      }
      energy += term.coeff * static_cast<double>(prod);
    }
    for (const PairTerm& term : spec.pair_terms) {
      long long nj = basis.occupation(i, term.species_j, term.site_j);
      long long nk = basis.occupation(i, term.species_k, term.site_k);
      energy += term.coeff * static_cast<double>(nj * nk);
    }
    diag[static_cast<Eigen::Index>(i)] = energy;
  }
  return diag;
}

SparseReal build_kinetic(const ModelSpec& spec, const SectorBasis& basis) {
  check_compatible(spec, basis.num_sites(), basis.species());
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t s = 0; s < spec.species.size(); ++s) {
    for (const auto& [j, k] : spec.lattice->edges()) {
      for (std::size_t i = 0; i < basis.dim(); ++i) {
        // emit both directions from the same source state so the matrix is
        // symmetric entry by entry
        HopAmplitude fwd = apply_hop(basis, s, j, k, i);
        if (fwd.valid) {
          triplets.emplace_back(static_cast<int>(fwd.index), static_cast<int>(i), fwd.amplitude);
        }
        HopAmplitude bwd = apply_hop(basis, s, k, j, i);
        if (bwd.valid) {
          triplets.emplace_back(static_cast<int>(bwd.index), static_cast<int>(i), bwd.amplitude);
        }
      }
    }
  }
  SparseReal m(static_cast<Eigen::Index>(basis.dim()), static_cast<Eigen::Index>(basis.dim()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

namespace {

SparseOperator assemble(const SparseReal& kinetic, const Eigen::VectorXd& diagonal, double tau) {
  SparseReal h = SparseReal((-tau) * kinetic);
  SparseReal d(diagonal.size(), diagonal.size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(diagonal.size()));
  for (Eigen::Index i = 0; i < diagonal.size(); ++i) {
    if (diagonal[i] != 0.0) triplets.emplace_back(static_cast<int>(i), static_cast<int>(i),
                                                  diagonal[i]);
  }
  d.setFromTriplets(triplets.begin(), triplets.end());
  h += d;
  h.makeCompressed();
  return SparseOperator(std::move(h), true);
}

}  // namespace

SparseOperator build_hamiltonian(const ModelSpec& spec, const SectorBasis& basis, double t) {
  SparseReal kinetic = build_kinetic(spec, basis);
  Eigen::VectorXd diag = diagonal_interaction(spec, basis);
  return assemble(kinetic, diag, spec.tau.at(t));
}

SectorHamiltonian::SectorHamiltonian(const ModelSpec& spec, const SectorBasis& basis)
    : kinetic_(build_kinetic(spec, basis)),
      diagonal_(diagonal_interaction(spec, basis)),
      tau_(spec.tau) {}

SparseOperator SectorHamiltonian::at_time(double t) const {
  return assemble(kinetic_, diagonal_, tau_.at(t));
}

SpaceHamiltonian::SpaceHamiltonian(const ModelSpec& spec, const FockSpace& space)
    : tau_(spec.tau) {
  diagonal_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.dim()));
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t sec = 0; sec < space.sector_count(); ++sec) {
    const SectorBasis& basis = space.sector(sec);
    std::size_t off = space.offset(sec);
    SparseReal k = build_kinetic(spec, basis);
    for (int row = 0; row < k.outerSize(); ++row) {
      for (SparseReal::InnerIterator it(k, row); it; ++it) {
        triplets.emplace_back(static_cast<int>(off + it.row()), static_cast<int>(off + it.col()),
                              it.value());
      }
    }
    Eigen::VectorXd d = diagonal_interaction(spec, basis);
    diagonal_.segment(static_cast<Eigen::Index>(off), d.size()) = d;
  }
  kinetic_ = SparseReal(static_cast<Eigen::Index>(space.dim()),
                        static_cast<Eigen::Index>(space.dim()));
  kinetic_.setFromTriplets(triplets.begin(), triplets.end());
  kinetic_.makeCompressed();
}

SparseOperator SpaceHamiltonian::at_time(double t) const {
  return assemble(kinetic_, diagonal_, tau_.at(t));
}

}  // namespace lcone
