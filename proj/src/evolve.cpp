#include "lcone/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "lcone/errors.hpp"
#include "lcone/krylov.hpp"

namespace lcone {

namespace {

using SparseComplex = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor>;
constexpr std::complex<double> kMinusI{0.0, -1.0};

int physical_cap(const SpeciesSpec& spec) {
  if (spec.statistics == Statistics::boson) {
    return spec.n_max > 0 ? spec.n_max : std::numeric_limits<int>::max();
  }
  return 1;
}

// Occupation tuples concatenated across species, used to apply ladder
// polynomials without committing to a particular sector basis.
using OccKey = std::vector<int>;
struct KeyHash {
  std::size_t operator()(const OccKey& key) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : key) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};
using StateMap = std::unordered_map<OccKey, std::complex<double>, KeyHash>;

OccKey key_of(const SectorBasis& basis, std::size_t index) {
  OccKey key;
  key.reserve(basis.species_count() * static_cast<std::size_t>(basis.num_sites()));
  for (std::size_t s = 0; s < basis.species_count(); ++s) {
    const std::vector<int>& occ = basis.species_sector(s).state(basis.species_index(index, s));
    key.insert(key.end(), occ.begin(), occ.end());
  }
  return key;
}

std::ptrdiff_t try_rank(const SectorBasis& basis, const OccKey& key) {
  const int L = basis.num_sites();
  std::vector<std::vector<int>> occ(basis.species_count());
  for (std::size_t s = 0; s < basis.species_count(); ++s) {
    occ[s].assign(key.begin() + static_cast<std::ptrdiff_t>(s) * L,
                  key.begin() + static_cast<std::ptrdiff_t>(s + 1) * L);
    long total = 0;
    const SpeciesSector& sector = basis.species_sector(s);
    for (int n : occ[s]) {
      if (n < 0 || n > sector.cap()) return -1;
      total += n;
    }
    if (total != sector.particles()) return -1;
  }
  return static_cast<std::ptrdiff_t>(basis.rank(occ));
}

bool apply_site_monomial(const SpeciesSpec& spec, int num_sites, OccKey& key, std::size_t species,
                         int site, int p, int q, double& amp) {
  const int base = static_cast<int>(species) * num_sites;
  int n = key[base + site];
  bool string_odd = false;
  if (spec.statistics == Statistics::fermion) {
    for (int j = 0; j < site; ++j) string_odd ^= (key[base + j] & 1) != 0;
  }
  const int cap = physical_cap(spec);
  for (int step = 0; step < q; ++step) {
    if (n == 0) return false;
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
  for (int step = 0; step < p; ++step) {
    if (n >= cap) return false;
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
  key[base + site] = n;
  return true;
}

StateMap apply_observable(const std::vector<SpeciesSpec>& species, int num_sites,
                          const LocalObservable& obs, const StateMap& in) {
  if (obs.species >= species.size()) throw std::out_of_range("observable species out of range");
  if (obs.site < 0 || obs.site >= num_sites) throw std::out_of_range("observable site out of range");
  StateMap out;
  const SpeciesSpec& sp = species[obs.species];
  for (const auto& [key, amp] : in) {
    for (const MonomialTerm& term : obs.terms) {
      if (term.p < 0 || term.q < 0) throw std::invalid_argument("ladder exponents must be >= 0");
      OccKey k = key;
      double factor = 1.0;
      if (!apply_site_monomial(sp, num_sites, k, obs.species, obs.site, term.p, term.q, factor)) {
        continue;
      }
      std::complex<double> add = amp * term.coeff * factor;
      if (add != std::complex<double>(0.0, 0.0)) out[k] += add;
    }
  }
  return out;
}

StateMap to_map(const SectorBasis& basis, const VectorXc& psi) {
  StateMap m;
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    std::complex<double> a = psi[static_cast<Eigen::Index>(i)];
    if (a != std::complex<double>(0.0, 0.0)) m.emplace(key_of(basis, i), a);
  }
  return m;
}

double map_norm_sq(const StateMap& m) {
  double total = 0.0;
  for (const auto& [key, amp] : m) total += std::norm(amp);
  return total;
}

LocalObservable adjoint_observable(const LocalObservable& obs) {
  LocalObservable adj = obs;
  for (MonomialTerm& term : adj.terms) {
    std::swap(term.p, term.q);
    term.coeff = std::conj(term.coeff);
  }
  return adj;
}

double falling_factorial(long n, int p) {
  double result = 1.0;
  for (int i = 0; i < p; ++i) result *= static_cast<double>(n - i);
  return result;
}

int fock_occupation(const FockSpace& space, std::size_t global, std::size_t species, int site) {
  std::size_t sec = space.sector_of(global);
  return space.sector(sec).occupation(global - space.offset(sec), species, site);
}

SparseComplex observable_matrix(const FockSpace& space, const LocalObservable& obs) {
  SparseComplex acc(static_cast<Eigen::Index>(space.dim()), static_cast<Eigen::Index>(space.dim()));
  for (const MonomialTerm& term : obs.terms) {
    SparseReal m = ladder_monomial_matrix(space, obs.species, obs.site, term.p, term.q);
    acc += SparseComplex(term.coeff * m.cast<std::complex<double>>());
  }
  acc.makeCompressed();
  return acc;
}

std::complex<double> trace_product(const SparseComplex& a, const MatrixXc& rho) {
  std::complex<double> total = 0.0;
  for (int row = 0; row < a.outerSize(); ++row) {
    for (SparseComplex::InnerIterator it(a, row); it; ++it) {
      total += it.value() * rho(it.col(), it.row());
    }
  }
  return total;
}

// Block-diagonal matrix of b†_to b_from on the Fock space.
SparseReal space_hop(const FockSpace& space, std::size_t species, int from, int to) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t sec = 0; sec < space.sector_count(); ++sec) {
    const SectorBasis& basis = space.sector(sec);
    std::size_t off = space.offset(sec);
    for (std::size_t i = 0; i < basis.dim(); ++i) {
      HopAmplitude hop = apply_hop(basis, species, from, to, i);
      if (hop.valid) {
        triplets.emplace_back(static_cast<int>(off + hop.index), static_cast<int>(off + i),
                              hop.amplitude);
      }
    }
  }
  SparseReal m(static_cast<Eigen::Index>(space.dim()), static_cast<Eigen::Index>(space.dim()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

VectorXc apply_real(const SparseReal& m, const VectorXc& v) {
  Eigen::VectorXd re = m * v.real();
  Eigen::VectorXd im = m * v.imag();
  VectorXc out(v.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

void validate_times(const std::vector<double>& times) {
  if (times.size() < 2) throw std::invalid_argument("time grid needs at least two points");
  if (times.front() != 0.0) throw std::invalid_argument("time grid must start at t = 0");
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (!(times[i] < times[i + 1])) {
      throw std::invalid_argument("time grid must be strictly increasing");
    }
  }
}

// (duration, tau value) pieces covering [t0, t1] with the schedule constant on each.
std::vector<std::pair<double, double>> constant_pieces(const TauSchedule& tau, double t0,
                                                       double t1) {
  std::vector<std::pair<double, double>> pieces;
  double t = t0;
  while (t < t1) {
    double t_next = t1;
    for (double b : tau.start_times()) {
      if (b > t && b < t_next) t_next = b;
    }
    pieces.emplace_back(t_next - t, tau.at(t));
    t = t_next;
  }
  return pieces;
}

void validate_request(const TraceRequest& request) {
  for (int p : request.moments) {
    if (p < 1) throw std::invalid_argument("moment order must be >= 1");
  }
  for (const TwoSiteObservable& c : request.correlators) {
    if (c.left.site == c.right.site && c.left.species == c.right.species) {
      throw std::invalid_argument("two-site correlator requires distinct sites");
    }
  }
  if (request.integrator_tolerance <= 0.0) {
    throw std::invalid_argument("integrator tolerance must be positive");
  }
}

SimulationTrace init_trace(const ModelSpec& spec, const std::vector<double>& times,
                           const TraceRequest& request, bool lindblad) {
  const Eigen::Index T = static_cast<Eigen::Index>(times.size());
  SimulationTrace tr;
  tr.times = times;
  tr.alpha.setZero(T, spec.lattice->num_sites());
  tr.alpha_species.assign(spec.species.size(), tr.alpha);
  for (int p : request.moments) {
    if (p > 1) tr.moments.emplace(p, tr.alpha);
  }
  if (request.track_flow) tr.flow = tr.alpha;
  tr.norm_or_trace.setZero(T);
  if (request.track_energy) tr.energy.setZero(T);
  tr.total_number.setZero(T);
  for (const LocalObservable& obs : request.observables) {
    ObservableTrace ot;
    ot.observable = obs;
    ot.values.setZero(T);
    tr.observables.push_back(std::move(ot));
  }
  for (const TwoSiteObservable& cor : request.correlators) {
    CorrelatorTrace ct;
    ct.observable = cor;
    ct.values.setZero(T);
    ct.cs_bound.setZero(T);
    tr.correlators.push_back(std::move(ct));
  }
  tr.lindblad = lindblad;
  tr.loss_rate = lindblad ? spec.loss_rate : 0.0;
  tr.integrator_tolerance = request.integrator_tolerance;
  return tr;
}

}  // namespace

QuantumState QuantumState::pure(std::shared_ptr<const SectorBasis> basis, VectorXc amplitudes) {
  if (!basis) throw std::invalid_argument("pure state needs a basis");
  if (static_cast<std::size_t>(amplitudes.size()) != basis->dim()) {
    throw std::invalid_argument("amplitude vector does not match the basis dimension");
  }
  QuantumState s;
  s.sector = std::move(basis);
  s.psi = std::move(amplitudes);
  return s;
}

QuantumState QuantumState::density(std::shared_ptr<const FockSpace> space, MatrixXc matrix) {
  if (!space) throw std::invalid_argument("density state needs a Fock space");
  if (static_cast<std::size_t>(matrix.rows()) != space->dim() || matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("density matrix does not match the space dimension");
  }
  QuantumState s;
  s.space = std::move(space);
  s.rho = std::move(matrix);
  return s;
}

bool LocalObservable::balanced() const {
  for (const MonomialTerm& term : terms) {
    if (term.p < 1 || term.q < 1) return false;
  }
  return !terms.empty();
}

std::vector<long> initial_particle_numbers(const InitialStateSpec& init,
                                           std::size_t species_count) {
  if (init.region.empty()) throw std::invalid_argument("initial region must be nonempty");
  if (init.components.empty()) throw std::invalid_argument("initial state needs a component");
  std::vector<long> counts(species_count, 0);
  for (std::size_t c = 0; c < init.components.size(); ++c) {
    const auto& comp = init.components[c];
    if (comp.occupations.size() != species_count) {
      throw std::invalid_argument("initial component " + std::to_string(c) +
                                  " needs one occupation list per species");
    }
    std::vector<long> totals(species_count, 0);
    for (std::size_t s = 0; s < species_count; ++s) {
      if (comp.occupations[s].size() != init.region.size()) {
        throw std::invalid_argument("initial component " + std::to_string(c) +
                                    " occupation list length differs from the region size");
      }
      for (int n : comp.occupations[s]) {
        if (n < 0) throw std::invalid_argument("initial occupations must be nonnegative");
        totals[s] += n;
      }
    }
    if (c == 0) {
      counts = totals;
    } else if (totals != counts) {
      throw std::invalid_argument(
          "initial components have different particle numbers; this needs a density run per "
          "sector");
    }
  }
  return counts;
}

namespace {

VectorXc build_sector_vector(const ModelSpec& spec, const InitialStateSpec& init,
                             const SectorBasis& basis) {
  const int L = spec.lattice->num_sites();
  std::vector<char> seen(static_cast<std::size_t>(L), 0);
  for (int site : init.region) {
    if (site < 0 || site >= L) {
      throw std::invalid_argument("initial region site " + std::to_string(site) +
                                  " outside the lattice");
    }
    if (seen[static_cast<std::size_t>(site)]) {
      throw std::invalid_argument("initial region repeats site " + std::to_string(site));
    }
    seen[static_cast<std::size_t>(site)] = 1;
  }
  VectorXc psi = VectorXc::Zero(static_cast<Eigen::Index>(basis.dim()));
  for (const auto& comp : init.components) {
    std::vector<std::vector<int>> occ(spec.species.size(),
                                      std::vector<int>(static_cast<std::size_t>(L), 0));
    for (std::size_t s = 0; s < spec.species.size(); ++s) {
      int cap = physical_cap(spec.species[s]);
      for (std::size_t r = 0; r < init.region.size(); ++r) {
        int n = comp.occupations[s][r];
        if (n > cap) {
          throw std::invalid_argument("initial occupation exceeds the per-site cap");
        }
        occ[s][static_cast<std::size_t>(init.region[r])] = n;
      }
    }
    psi[static_cast<Eigen::Index>(basis.rank(occ))] += comp.amplitude;
  }
  double norm = psi.norm();
  if (norm == 0.0) throw std::invalid_argument("initial amplitudes cancel to the zero state");
  psi /= norm;
  return psi;
}

}  // namespace

QuantumState make_pure_state(const ModelSpec& spec, const InitialStateSpec& init) {
  spec.validate();
  std::vector<long> counts = initial_particle_numbers(init, spec.species.size());
  auto basis = std::make_shared<SectorBasis>(spec.lattice->num_sites(), spec.species, counts);
  VectorXc psi = build_sector_vector(spec, init, *basis);
  return QuantumState::pure(std::move(basis), std::move(psi));
}

QuantumState make_density_state(const ModelSpec& spec, const InitialStateSpec& init) {
  spec.validate();
  std::vector<long> counts = initial_particle_numbers(init, spec.species.size());
  auto space = std::make_shared<FockSpace>(spec.lattice->num_sites(), spec.species, counts);
  std::ptrdiff_t sec = space->sector_index(counts);
  if (sec < 0) throw std::logic_error("top sector missing from the Fock space");
  const SectorBasis& basis = space->sector(static_cast<std::size_t>(sec));
  VectorXc sector_psi = build_sector_vector(spec, init, basis);
  VectorXc full = VectorXc::Zero(static_cast<Eigen::Index>(space->dim()));
  full.segment(static_cast<Eigen::Index>(space->offset(static_cast<std::size_t>(sec))),
               sector_psi.size()) = sector_psi;
  MatrixXc rho = full * full.adjoint();
  return QuantumState::density(std::move(space), std::move(rho));
}

Eigen::VectorXd initial_densities(const ModelSpec& spec, const InitialStateSpec& init) {
  spec.validate();
  initial_particle_numbers(init, spec.species.size());  // shape validation
  const int L = spec.lattice->num_sites();
  for (int site : init.region) {
    if (site < 0 || site >= L) {
      throw std::invalid_argument("initial region site " + std::to_string(site) +
                                  " outside the lattice");
    }
  }
  // amplitudes on identical occupation tuples add coherently
  StateMap amps;
  for (const auto& comp : init.components) {
    OccKey key(spec.species.size() * static_cast<std::size_t>(L), 0);
    for (std::size_t s = 0; s < spec.species.size(); ++s) {
      int cap = physical_cap(spec.species[s]);
      for (std::size_t r = 0; r < init.region.size(); ++r) {
        int n = comp.occupations[s][r];
        if (n > cap) throw std::invalid_argument("initial occupation exceeds the per-site cap");
        key[s * static_cast<std::size_t>(L) + static_cast<std::size_t>(init.region[r])] = n;
      }
    }
    amps[key] += comp.amplitude;
  }
  double total = map_norm_sq(amps);
  if (total == 0.0) throw std::invalid_argument("initial amplitudes cancel to the zero state");
  Eigen::VectorXd alpha0 = Eigen::VectorXd::Zero(L);
  for (const auto& [key, amp] : amps) {
    double w = std::norm(amp) / total;
    for (std::size_t s = 0; s < spec.species.size(); ++s) {
      for (int j = 0; j < L; ++j) {
        alpha0[j] += w * key[s * static_cast<std::size_t>(L) + static_cast<std::size_t>(j)];
      }
    }
  }
  return alpha0;
}

double density(const QuantumState& state, std::size_t species, int site) {
  double total = 0.0;
  if (state.is_pure()) {
    const SectorBasis& basis = *state.sector;
    if (species >= basis.species_count()) throw std::out_of_range("species out of range");
    if (site < 0 || site >= basis.num_sites()) throw std::out_of_range("site out of range");
    for (std::size_t i = 0; i < basis.dim(); ++i) {
      double w = std::norm(state.psi[static_cast<Eigen::Index>(i)]);
      if (w != 0.0) total += w * basis.occupation(i, species, site);
    }
  } else {
    const FockSpace& space = *state.space;
    if (species >= space.species().size()) throw std::out_of_range("species out of range");
    if (site < 0 || site >= space.num_sites()) throw std::out_of_range("site out of range");
    for (std::size_t i = 0; i < space.dim(); ++i) {
      double w = state.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
      if (w != 0.0) total += w * fock_occupation(space, i, species, site);
    }
  }
  return total;
}

double density(const QuantumState& state, int site) {
  std::size_t count = state.is_pure() ? state.sector->species_count()
                                      : state.space->species().size();
  double total = 0.0;
  for (std::size_t s = 0; s < count; ++s) total += density(state, s, site);
  return total;
}

double moment(const QuantumState& state, int site, int p) {
  if (p < 1) throw std::invalid_argument("moment order must be >= 1");
  double total = 0.0;
  if (state.is_pure()) {
    const SectorBasis& basis = *state.sector;
    if (site < 0 || site >= basis.num_sites()) throw std::out_of_range("site out of range");
    for (std::size_t i = 0; i < basis.dim(); ++i) {
      double w = std::norm(state.psi[static_cast<Eigen::Index>(i)]);
      if (w == 0.0) continue;
      long n = 0;
      for (std::size_t s = 0; s < basis.species_count(); ++s) n += basis.occupation(i, s, site);
      total += w * std::pow(static_cast<double>(n), p);
    }
  } else {
    const FockSpace& space = *state.space;
    if (site < 0 || site >= space.num_sites()) throw std::out_of_range("site out of range");
    for (std::size_t i = 0; i < space.dim(); ++i) {
      double w = state.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
      if (w == 0.0) continue;
      long n = 0;
      for (std::size_t s = 0; s < space.species().size(); ++s) {
        n += fock_occupation(space, i, s, site);
      }
      total += w * std::pow(static_cast<double>(n), p);
    }
  }
  return total;
}

std::complex<double> local_observable(const QuantumState& state, const LocalObservable& obs) {
  if (state.is_pure()) {
    const SectorBasis& basis = *state.sector;
    if (obs.species >= basis.species_count()) throw std::out_of_range("species out of range");
    if (obs.site < 0 || obs.site >= basis.num_sites()) throw std::out_of_range("site out of range");
    std::complex<double> total = 0.0;
    for (const MonomialTerm& term : obs.terms) {
      // number-changing monomials have zero expectation in a fixed sector
      if (term.p != term.q) continue;
      double diag = 0.0;
      for (std::size_t i = 0; i < basis.dim(); ++i) {
        double w = std::norm(state.psi[static_cast<Eigen::Index>(i)]);
        if (w == 0.0) continue;
        diag += w * falling_factorial(basis.occupation(i, obs.species, obs.site), term.p);
      }
      total += term.coeff * diag;
    }
    return total;
  }
  SparseComplex a = observable_matrix(*state.space, obs);
  return trace_product(a, state.rho);
}

std::complex<double> two_site_correlator(const QuantumState& state, const LocalObservable& left,
                                         const LocalObservable& right) {
  if (left.site == right.site && left.species == right.species) {
    throw std::invalid_argument("two-site correlator requires distinct sites");
  }
  if (state.is_pure()) {
    const SectorBasis& basis = *state.sector;
    StateMap m = to_map(basis, state.psi);
    StateMap m1 = apply_observable(basis.species(), basis.num_sites(), right, m);
    StateMap m2 = apply_observable(basis.species(), basis.num_sites(), left, m1);
    std::complex<double> total = 0.0;
    for (const auto& [key, amp] : m2) {
      std::ptrdiff_t r = try_rank(basis, key);
      if (r < 0) continue;
      total += std::conj(state.psi[static_cast<Eigen::Index>(r)]) * amp;
    }
    return total;
  }
  SparseComplex a = observable_matrix(*state.space, left);
  SparseComplex b = observable_matrix(*state.space, right);
  SparseComplex ab = SparseComplex(a * b);
  return trace_product(ab, state.rho);
}

double correlator_cs_bound(const QuantumState& state, const LocalObservable& left,
                           const LocalObservable& right) {
  double tl = 0.0;
  double tr = 0.0;
  if (state.is_pure()) {
    const SectorBasis& basis = *state.sector;
    StateMap m = to_map(basis, state.psi);
    tl = map_norm_sq(apply_observable(basis.species(), basis.num_sites(), left, m));
    tr = map_norm_sq(
        apply_observable(basis.species(), basis.num_sites(), adjoint_observable(right), m));
  } else {
    SparseComplex a = observable_matrix(*state.space, left);
    SparseComplex b = observable_matrix(*state.space, right);
    tl = trace_product(SparseComplex(SparseComplex(a.adjoint()) * a), state.rho).real();
    tr = trace_product(SparseComplex(b * SparseComplex(b.adjoint())), state.rho).real();
  }
  return std::sqrt(std::max(0.0, tl) * std::max(0.0, tr));
}

double total_number_moment(const QuantumState& state, int p) {
  if (p < 0) throw std::invalid_argument("moment order must be >= 0");
  if (state.is_pure()) {
    long total = 0;
    for (long n : state.sector->particle_numbers()) total += n;
    return std::pow(static_cast<double>(total), p);
  }
  const FockSpace& space = *state.space;
  double result = 0.0;
  for (std::size_t sec = 0; sec < space.sector_count(); ++sec) {
    long total = 0;
    for (long n : space.sector(sec).particle_numbers()) total += n;
    double weight = 0.0;
    for (std::size_t i = 0; i < space.sector(sec).dim(); ++i) {
      Eigen::Index g = static_cast<Eigen::Index>(space.offset(sec) + i);
      weight += state.rho(g, g).real();
    }
    result += weight * std::pow(static_cast<double>(total), p);
  }
  return result;
}

namespace {

void record_common(const ModelSpec& spec, const QuantumState& state, std::size_t row,
                   SimulationTrace& trace) {
  const int L = spec.lattice->num_sites();
  const std::size_t S = spec.species.size();
  Eigen::Index r = static_cast<Eigen::Index>(row);
  for (std::size_t s = 0; s < S; ++s) {
    for (int j = 0; j < L; ++j) {
      trace.alpha_species[s](r, j) = density(state, s, j);
    }
  }
  for (int j = 0; j < L; ++j) {
    double total = 0.0;
    for (std::size_t s = 0; s < S; ++s) total += trace.alpha_species[s](r, j);
    trace.alpha(r, j) = total;
  }
  trace.total_number[r] = trace.alpha.row(r).sum();
  for (auto& [p, values] : trace.moments) {
    for (int j = 0; j < L; ++j) values(r, j) = moment(state, j, p);
  }
  for (ObservableTrace& ot : trace.observables) {
    ot.values[r] = local_observable(state, ot.observable);
  }
  for (CorrelatorTrace& ct : trace.correlators) {
    ct.values[r] = two_site_correlator(state, ct.observable.left, ct.observable.right);
    ct.cs_bound[r] = correlator_cs_bound(state, ct.observable.left, ct.observable.right);
  }
}

}  // namespace

SimulationTrace evolve_unitary(const ModelSpec& spec, const QuantumState& initial,
                               const std::vector<double>& times, const TraceRequest& request) {
  spec.validate();
  validate_times(times);
  validate_request(request);
  if (!initial.is_pure()) {
    throw std::invalid_argument("evolve_unitary needs a pure state; use evolve_lindblad for "
                                "density matrices");
  }
  const SectorBasis& basis = *initial.sector;
  check_compatible(spec, basis.num_sites(), basis.species());
  if (std::abs(initial.psi.norm() - 1.0) > 1e-8) {
    throw std::invalid_argument("initial state is not normalized");
  }

  SectorHamiltonian ham(spec, basis);
  SimulationTrace trace = init_trace(spec, times, request, false);

  // per-edge per-species hop matrices, for the density-flow identity
  std::vector<SparseReal> hops;
  if (request.track_flow) {
    for (std::size_t s = 0; s < spec.species.size(); ++s) {
      for (const auto& [j, k] : spec.lattice->edges()) {
        hops.push_back(hop_matrix(basis, s, j, k));  // b†_k b_j
      }
    }
  }

  KrylovOptions kopt;
  kopt.tolerance = request.integrator_tolerance;

  QuantumState state = initial;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0) {
      for (const auto& [duration, tau] : constant_pieces(spec.tau, times[i - 1], times[i])) {
        SparseReal hm = SparseReal((-tau) * ham.kinetic());
        const Eigen::VectorXd& diag = ham.diagonal();
        ApplyFn apply = [&hm, &diag](const VectorXc& v, VectorXc& out) {
          Eigen::VectorXd re = hm * v.real() + diag.cwiseProduct(v.real());
          Eigen::VectorXd im = hm * v.imag() + diag.cwiseProduct(v.imag());
          out.resize(v.size());
          // multiply by -i: (re + i im) -> (im - i re)
          out.real() = im;
          out.imag() = -re;
        };
        state.psi = expm_action(apply, state.psi, duration, kopt);
      }
    }
    Eigen::Index r = static_cast<Eigen::Index>(i);
    trace.norm_or_trace[r] = state.psi.norm();
    record_common(spec, state, i, trace);
    double tau_now = spec.tau.at(times[i]);
    if (request.track_energy) {
      VectorXc hv = apply_real(ham.kinetic(), state.psi);
      double kin = state.psi.dot(hv).real();
      double pot = ham.diagonal().dot(state.psi.cwiseAbs2());
      trace.energy[r] = -tau_now * kin + pot;
    }
    if (request.track_flow) {
      std::size_t h_idx = 0;
      for (std::size_t s = 0; s < spec.species.size(); ++s) {
        for (const auto& [j, k] : spec.lattice->edges()) {
          VectorXc w = apply_real(hops[h_idx++], state.psi);
          double im = state.psi.dot(w).imag();  // Im <b†_k b_j>
          trace.flow(r, j) += 2.0 * tau_now * im;
          trace.flow(r, k) -= 2.0 * tau_now * im;
        }
      }
    }
  }
  return trace;
}

SimulationTrace evolve_lindblad(const ModelSpec& spec, const QuantumState& initial,
                                const std::vector<double>& times, const TraceRequest& request) {
  spec.validate();
  validate_times(times);
  validate_request(request);
  if (initial.is_pure()) {
    throw std::invalid_argument("evolve_lindblad needs a density state on a Fock space");
  }
  const FockSpace& space = *initial.space;
  check_compatible(spec, space.num_sites(), space.species());
  const double lambda = spec.loss_rate;
  const Eigen::Index d = static_cast<Eigen::Index>(space.dim());
  if (std::abs(initial.rho.trace().real() - 1.0) > 1e-8 ||
      std::abs(initial.rho.trace().imag()) > 1e-10) {
    throw std::invalid_argument("initial density matrix must have unit trace");
  }
  if ((initial.rho - initial.rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8) {
    throw std::invalid_argument("initial density matrix must be Hermitian");
  }

  SpaceHamiltonian ham(spec, space);
  SimulationTrace trace = init_trace(spec, times, request, true);
  if (request.track_min_eigenvalue) {
    trace.min_eigenvalue.setZero(static_cast<Eigen::Index>(times.size()));
  }

  // total particle number per Fock basis state (diagonal of sum_{s,j} n_sj)
  Eigen::VectorXd number_diag(d);
  for (std::size_t sec = 0; sec < space.sector_count(); ++sec) {
    long total = 0;
    for (long n : space.sector(sec).particle_numbers()) total += n;
    for (std::size_t i = 0; i < space.sector(sec).dim(); ++i) {
      number_diag[static_cast<Eigen::Index>(space.offset(sec) + i)] = static_cast<double>(total);
    }
  }

  std::vector<SparseComplex> jump_ops;
  std::vector<SparseComplex> jump_ops_adj;
  if (lambda > 0.0) {
    for (std::size_t s = 0; s < spec.species.size(); ++s) {
      for (int j = 0; j < space.num_sites(); ++j) {
        SparseReal b = ladder_monomial_matrix(space, s, j, 0, 1);
        SparseComplex bc = SparseComplex(b.cast<std::complex<double>>());
        jump_ops_adj.push_back(SparseComplex(bc.adjoint()));
        jump_ops.push_back(std::move(bc));
      }
    }
  }

  std::vector<SparseReal> hops;
  if (request.track_flow) {
    for (std::size_t s = 0; s < spec.species.size(); ++s) {
      for (const auto& [j, k] : spec.lattice->edges()) {
        hops.push_back(space_hop(space, s, j, k));
      }
    }
  }

  KrylovOptions kopt;
  kopt.tolerance = request.integrator_tolerance;
  kopt.max_subspace = 40;

  MatrixXc rho = initial.rho;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i > 0) {
      for (const auto& [duration, tau] : constant_pieces(spec.tau, times[i - 1], times[i])) {
        SparseReal hm = SparseReal((-tau) * ham.kinetic());
        SparseComplex hc = SparseComplex(hm.cast<std::complex<double>>());
        const Eigen::VectorXd& diag = ham.diagonal();
        ApplyFn apply = [&](const VectorXc& x, VectorXc& out) {
          Eigen::Map<const MatrixXc> R(x.data(), d, d);
          out.resize(d * d);
          Eigen::Map<MatrixXc> O(out.data(), d, d);
          MatrixXc HR = hc * R;
          HR.noalias() += diag.asDiagonal() * R;
          MatrixXc RH = R * hc;
          RH.noalias() += R * diag.asDiagonal();
          O = kMinusI * (HR - RH);
          if (lambda > 0.0) {
            O.noalias() -= lambda * (number_diag.asDiagonal() * R);
            O.noalias() -= lambda * (R * number_diag.asDiagonal());
            for (std::size_t b = 0; b < jump_ops.size(); ++b) {
              MatrixXc tmp = jump_ops[b] * R;
              O.noalias() += 2.0 * lambda * (tmp * jump_ops_adj[b]);
            }
          }
        };
        VectorXc vec = Eigen::Map<const VectorXc>(rho.data(), d * d);
        VectorXc evolved = expm_action(apply, vec, duration, kopt);
        rho = Eigen::Map<const MatrixXc>(evolved.data(), d, d);
      }
    }
    Eigen::Index r = static_cast<Eigen::Index>(i);
    QuantumState state = QuantumState::density(initial.space, rho);
    trace.norm_or_trace[r] = rho.trace().real();
    record_common(spec, state, i, trace);
    double tau_now = spec.tau.at(times[i]);
    if (request.track_energy) {
      SparseComplex hfull =
          SparseComplex(ham.at_time(times[i]).matrix().cast<std::complex<double>>());
      trace.energy[r] = trace_product(hfull, rho).real();
    }
    if (request.track_flow) {
      std::size_t h_idx = 0;
      for (std::size_t s = 0; s < spec.species.size(); ++s) {
        for (const auto& [j, k] : spec.lattice->edges()) {
          SparseComplex hc = SparseComplex(hops[h_idx++].cast<std::complex<double>>());
          double im = trace_product(hc, rho).imag();
          trace.flow(r, j) += 2.0 * tau_now * im;
          trace.flow(r, k) -= 2.0 * tau_now * im;
        }
      }
    }
    if (request.track_min_eigenvalue) {
      MatrixXc herm = 0.5 * (rho + rho.adjoint());
      Eigen::SelfAdjointEigenSolver<MatrixXc> es(herm, Eigen::EigenvaluesOnly);
      trace.min_eigenvalue[r] = es.eigenvalues().minCoeff();
    }
  }
  return trace;
}

}  // namespace lcone
