#ifndef LCONE_ENVELOPE_HPP
#define LCONE_ENVELOPE_HPP

#include <Eigen/Dense>

#include "lcone/lattice.hpp"

namespace lcone {

struct EnvelopeParams {
  double chi = 0.0;      // root of chi ln chi = chi + 1
  double C = 0.0;        // 2 chi^2 / (chi - 1)
  double D = 0.0;        // max degree of the lattice
  double Delta = 0.0;    // ||M||_inf / 2
  double tau_max = 0.0;
  double v0 = 0.0;       // chi * Delta * tau_max
  double v = 0.0;        // v0 + D * tau_max
};

/// Newton iteration on g(x) = x ln x - x - 1 from 3.5; the root is ~3.5911.
double solve_chi();

EnvelopeParams make_params(const Lattice& lat, double tau_max);

/// gamma(t) = e^{D tau t} * e^{tau M t} alpha0, with M the adjacency matrix.
/// The exponential action is a scaled Taylor sum; every term is nonnegative,
/// so there is no cancellation and the truncation error is controlled by the
/// first omitted term.
Eigen::VectorXd envelope_ode(const Lattice& lat, double tau_max, const Eigen::VectorXd& alpha0,
                             double t);

/// C * N0 * e^{v t - l}
double analytic_density_bound(const EnvelopeParams& params, double n0, double l, double t);

/// C * <N^p> * e^{v t - l}; callers substitute N0 for the moment when the
/// species has capped occupations (fermions, hardcore bosons).
double moment_bound(const EnvelopeParams& params, double number_moment, double l, double t);

enum class ObservableClass { balanced, general };

/// magnitude * e^{v t - l} for balanced coefficient tables (every term has a
/// creation and an annihilation part), magnitude * e^{(v t - l)/2} otherwise.
double observable_bound(const EnvelopeParams& params, ObservableClass cls, double magnitude,
                        double l, double t);

/// max over (i,j) of [e^{tau M t}]_{ij} / (C e^{v0 t - d(i,j)}); a result <= 1
/// certifies the elementwise decay bound on this instance. Dense
/// diagonalization, so the lattice is capped at 2000 sites.
double elementwise_expm_certificate(const Lattice& lat, double tau, double t);

}  // namespace lcone

#endif
