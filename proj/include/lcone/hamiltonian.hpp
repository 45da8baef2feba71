#ifndef LCONE_HAMILTONIAN_HPP
#define LCONE_HAMILTONIAN_HPP

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "lcone/fock.hpp"
#include "lcone/lattice.hpp"
#include "lcone/operators.hpp"

namespace lcone {

/// Piecewise-constant hopping amplitude. Segment i holds value values[i] on
/// [start_times[i], start_times[i+1]), the last segment extending to +inf.
class TauSchedule {
 public:
  TauSchedule() : start_times_{0.0}, values_{0.0} {}
  static TauSchedule constant(double tau);
  static TauSchedule piecewise(std::vector<double> start_times, std::vector<double> values);

  double at(double t) const;
  double sup_abs() const;
  bool is_constant() const { return values_.size() == 1; }
  const std::vector<double>& start_times() const { return start_times_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> start_times_;  // ascending, first is 0
  std::vector<double> values_;
};

/// coeff * prod_s n_{s,site}^{exponents[s]}
struct OnSiteTerm {
  int site = 0;
  std::vector<int> exponents;
  double coeff = 0.0;
};

/// coeff * n_{species_j, site_j} * n_{species_k, site_k}
struct PairTerm {
  int site_j = 0;
  int site_k = 0;
  std::size_t species_j = 0;
  std::size_t species_k = 0;
  double coeff = 0.0;
};

struct ModelSpec {
  std::shared_ptr<const Lattice> lattice;
  std::vector<SpeciesSpec> species;
  TauSchedule tau;
  std::vector<double> U;   // per species
  std::vector<double> mu;  // per species
  std::vector<OnSiteTerm> on_site_terms;
  std::vector<PairTerm> pair_terms;
  double loss_rate = 0.0;

  void validate() const;
};

/// Requires basis sites/species to match the model exactly.
void check_compatible(const ModelSpec& spec, int num_sites, const std::vector<SpeciesSpec>& species);

/// Diagonal energies: sum over sites and species of U_s/2 n(n-1) - mu_s n plus
/// the extra density terms. Occupation products are evaluated in 64-bit
/// integers before any coefficient is applied.
Eigen::VectorXd diagonal_interaction(const ModelSpec& spec, const SectorBasis& basis);

/// Kinetic operator K = sum_{<j,k>,s} (b†_{s,j} b_{s,k} + b†_{s,k} b_{s,j});
/// the Hamiltonian is H(t) = -tau(t) K + diag.
SparseReal build_kinetic(const ModelSpec& spec, const SectorBasis& basis);

/// H(t) = -tau(t) K + diagonal. Hermitian by construction.
SparseOperator build_hamiltonian(const ModelSpec& spec, const SectorBasis& basis, double t);

/// Caches K and the diagonal so time slices are cheap to materialize.
class SectorHamiltonian {
 public:
  SectorHamiltonian(const ModelSpec& spec, const SectorBasis& basis);

  std::size_t dim() const { return static_cast<std::size_t>(diagonal_.size()); }
  SparseOperator at_time(double t) const;
  const SparseReal& kinetic() const { return kinetic_; }
  const Eigen::VectorXd& diagonal() const { return diagonal_; }
  const TauSchedule& tau() const { return tau_; }

 private:
  SparseReal kinetic_;
  Eigen::VectorXd diagonal_;
  TauSchedule tau_;
};

/// Block-diagonal Hamiltonian over every sector of a Fock space, used by the
/// dissipative evolution. Global indices follow the FockSpace layout.
class SpaceHamiltonian {
 public:
  SpaceHamiltonian(const ModelSpec& spec, const FockSpace& space);

  std::size_t dim() const { return static_cast<std::size_t>(diagonal_.size()); }
  SparseOperator at_time(double t) const;
  const SparseReal& kinetic() const { return kinetic_; }
  const Eigen::VectorXd& diagonal() const { return diagonal_; }
  const TauSchedule& tau() const { return tau_; }

 private:
  SparseReal kinetic_;
  Eigen::VectorXd diagonal_;
  TauSchedule tau_;
};

}  // namespace lcone

#endif
