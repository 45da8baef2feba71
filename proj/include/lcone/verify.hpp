#ifndef LCONE_VERIFY_HPP
#define LCONE_VERIFY_HPP

#include <string>
#include <utility>
#include <vector>

#include "lcone/envelope.hpp"
#include "lcone/evolve.hpp"

namespace lcone {

struct CheckThresholds {
  double dominance = 1e-8;
  double identity = 1e-6;        // floor for finite-difference identity checks
  double arrival_epsilon = -1.0; // < 0 means the default 1e-4 * N0
};

struct ExperimentConfig {
  ModelSpec model;
  InitialStateSpec initial;
  std::vector<double> times;
  TraceRequest request;
  CheckThresholds thresholds;
  bool dissipative = false;

  void validate() const;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  bool applicable = true;  // false: not enough data, reported but never gated
  double margin = 0.0;     // worst violation; <= tolerance means pass
  double tolerance = 0.0;
  double worst_time = 0.0;
  int worst_site = -1;
  std::string note;
};

struct VelocityEstimate {
  bool conclusive = false;
  double v_emp = 0.0;
  double fit_residual = 0.0;
  int points = 0;
  std::string note;
};

struct VerificationReport {
  EnvelopeParams params;
  double n0 = 0.0;
  std::vector<CheckResult> checks;
  VelocityEstimate velocity;
  // looseness diagnostics, reported but never gated
  double alpha_over_gamma = 0.0;  // max over (t, j) of alpha/gamma
  double alpha_over_cone = 0.0;   // max over (t, j) of alpha/cone
  double v_emp_over_v = 0.0;      // 0 when the velocity fit is inconclusive

  bool all_passed() const;
};

/// gamma rows per grid time from the worst-case linear system, seeded with the
/// simulated alpha(0).
Eigen::MatrixXd envelope_curves(const Lattice& lat, double tau_max, const SimulationTrace& trace);

std::vector<CheckResult> check_dominance(const SimulationTrace& trace,
                                         const Eigen::MatrixXd& gamma,
                                         const EnvelopeParams& params,
                                         const std::vector<double>& distances, double n0,
                                         double tolerance);

/// Eq.-style coupled differential inequality on the simulated trajectory,
/// drift-compensated for loss runs: |da_j/dt + 2 lambda a_j| <= 2 tau(t)
/// sum_{<j,k>} sqrt(a_j a_k) up to finite-difference truncation.
CheckResult check_diff_inequality(const SimulationTrace& trace, const Lattice& lat,
                                  const TauSchedule& tau, double base_tolerance);

/// Central-difference da_j/dt (+ 2 lambda a_j for loss runs) against the
/// recorded hop-current sum.
CheckResult check_flow_identity(const SimulationTrace& trace, const TauSchedule& tau,
                                double base_tolerance);

VelocityEstimate estimate_velocity(const SimulationTrace& trace, const Lattice& lat,
                                   const std::vector<int>& region, double epsilon);

std::vector<CheckResult> check_moments_and_observables(const SimulationTrace& trace,
                                                       const ExperimentConfig& cfg,
                                                       const EnvelopeParams& params,
                                                       const std::vector<double>& distances,
                                                       double n0, bool all_species_capped,
                                                       const std::vector<double>& number_moments);

/// Validates the config, applies the desk-scale dimension guards, and builds
/// the initial state (pure for unitary runs, density matrix for loss runs).
QuantumState prepare_initial_state(const ExperimentConfig& cfg);

/// Simulation half of run_experiment: prepare, evolve, trace. No checks.
SimulationTrace run_simulation(const ExperimentConfig& cfg);

std::pair<SimulationTrace, VerificationReport> run_experiment(const ExperimentConfig& cfg);

}  // namespace lcone

#endif
