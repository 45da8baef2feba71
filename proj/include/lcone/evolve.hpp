#ifndef LCONE_EVOLVE_HPP
#define LCONE_EVOLVE_HPP

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lcone/hamiltonian.hpp"

namespace lcone {

/// Pure sector state or density matrix on a sector direct sum.
struct QuantumState {
  std::shared_ptr<const SectorBasis> sector;  // pure representation
  VectorXc psi;
  std::shared_ptr<const FockSpace> space;  // density representation
  MatrixXc rho;

  bool is_pure() const { return sector != nullptr; }
  static QuantumState pure(std::shared_ptr<const SectorBasis> basis, VectorXc amplitudes);
  static QuantumState density(std::shared_ptr<const FockSpace> space, MatrixXc matrix);
};

/// coeff * (b†)^p b^q
struct MonomialTerm {
  int p = 0;
  int q = 0;
  std::complex<double> coeff;
};

struct LocalObservable {
  std::string name;
  std::size_t species = 0;
  int site = 0;
  std::vector<MonomialTerm> terms;

  /// true iff every term has p >= 1 and q >= 1 (no pure ladder or constant
  /// pieces); balanced observables obey the tighter cone exponent
  bool balanced() const;
};

struct TwoSiteObservable {
  std::string name;
  LocalObservable left;   // applied second (outer operator)
  LocalObservable right;  // applied first
};

/// Per-species occupation lists over a region, vacuum elsewhere.
struct InitialStateSpec {
  struct Component {
    std::vector<std::vector<int>> occupations;  // [species][position-in-region]
    std::complex<double> amplitude{1.0, 0.0};
  };
  std::vector<int> region;
  std::vector<Component> components;
};

/// Per-species totals of the (first) component; errors if components disagree,
/// since a pure sector state needs a single particle-number vector.
std::vector<long> initial_particle_numbers(const InitialStateSpec& init, std::size_t species_count);

QuantumState make_pure_state(const ModelSpec& spec, const InitialStateSpec& init);
/// Density matrix |psi0><psi0| on the direct sum of sectors 0..N0 (per species).
QuantumState make_density_state(const ModelSpec& spec, const InitialStateSpec& init);
/// Initial site densities (summed over species) without building a basis;
/// number operators are diagonal, so components contribute incoherently.
Eigen::VectorXd initial_densities(const ModelSpec& spec, const InitialStateSpec& init);

struct TraceRequest {
  std::vector<int> moments;  // p >= 2 (p = 1 is always recorded as alpha)
  std::vector<LocalObservable> observables;
  std::vector<TwoSiteObservable> correlators;
  bool track_flow = true;
  bool track_energy = true;
  bool track_min_eigenvalue = false;
  double integrator_tolerance = 1e-13;
};

struct ObservableTrace {
  LocalObservable observable;
  VectorXc values;  // per time
};

struct CorrelatorTrace {
  TwoSiteObservable observable;
  VectorXc values;             // tr(A_j A_k rho)
  Eigen::VectorXd cs_bound;    // sqrt(tr(A_j† A_j rho) tr(A_k A_k† rho))
};

struct SimulationTrace {
  std::vector<double> times;
  Eigen::MatrixXd alpha;                       // times x sites, summed over species
  std::vector<Eigen::MatrixXd> alpha_species;  // per species
  std::map<int, Eigen::MatrixXd> moments;      // p -> times x sites (total site number)
  Eigen::MatrixXd flow;         // times x sites: 2 tau(t) sum_k Im<b†_k b_j>
  Eigen::VectorXd norm_or_trace;
  Eigen::VectorXd energy;
  Eigen::VectorXd total_number;
  Eigen::VectorXd min_eigenvalue;  // density runs on request, else empty
  std::vector<ObservableTrace> observables;
  std::vector<CorrelatorTrace> correlators;
  bool lindblad = false;
  double loss_rate = 0.0;
  double integrator_tolerance = 1e-13;
};

/// times must be strictly increasing and start at 0.
SimulationTrace evolve_unitary(const ModelSpec& spec, const QuantumState& initial,
                               const std::vector<double>& times, const TraceRequest& request = {});

/// Integrates drho/dt = -i[H,rho] - lambda sum_{s,j} ({n_sj, rho} - 2 b_sj rho b†_sj)
/// with lambda = spec.loss_rate, exactly as displayed (the implied single-mode
/// decay is e^{-2 lambda t}).
SimulationTrace evolve_lindblad(const ModelSpec& spec, const QuantumState& initial,
                                const std::vector<double>& times, const TraceRequest& request = {});

double density(const QuantumState& state, std::size_t species, int site);
double density(const QuantumState& state, int site);  // summed over species
/// tr((sum_s n_{s,site})^p rho)
double moment(const QuantumState& state, int site, int p);
std::complex<double> local_observable(const QuantumState& state, const LocalObservable& obs);
std::complex<double> two_site_correlator(const QuantumState& state, const LocalObservable& left,
                                         const LocalObservable& right);
/// sqrt(tr(A_l† A_l rho) * tr(A_r A_r† rho)), the Cauchy-Schwarz majorant of
/// |tr(A_l A_r rho)| for operators on distinct sites.
double correlator_cs_bound(const QuantumState& state, const LocalObservable& left,
                           const LocalObservable& right);

/// <N̂^p> for the total particle number (sum over species and sites).
double total_number_moment(const QuantumState& state, int p);

}  // namespace lcone

#endif
