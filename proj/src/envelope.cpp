#include "lcone/envelope.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lcone/errors.hpp"

namespace lcone {

double solve_chi() {
  double x = 3.5;
  for (int i = 0; i < 60; ++i) {
    double g = x * std::log(x) - x - 1.0;
    if (std::abs(g) < 1e-14) break;
    x -= g / std::log(x);
  }
  return x;
}

EnvelopeParams make_params(const Lattice& lat, double tau_max) {
  if (!(tau_max > 0.0)) throw std::invalid_argument("tau_max must be positive");
  EnvelopeParams p;
  p.chi = solve_chi();
  p.C = 2.0 * p.chi * p.chi / (p.chi - 1.0);
  p.D = static_cast<double>(lat.max_degree());
  p.Delta = lat.delta();
  p.tau_max = tau_max;
  p.v0 = p.chi * p.Delta * tau_max;
  p.v = p.v0 + p.D * tau_max;
  return p;
}

Eigen::VectorXd envelope_ode(const Lattice& lat, double tau_max, const Eigen::VectorXd& alpha0,
                             double t) {
  if (alpha0.size() != lat.num_sites()) {
    throw std::invalid_argument("alpha0 length does not match the lattice");
  }
  if ((alpha0.array() < 0.0).any()) {
    throw std::invalid_argument("envelope initial data must be nonnegative");
  }
  if (t < 0.0) throw std::invalid_argument("envelope time must be nonnegative");
  if (tau_max < 0.0) throw std::invalid_argument("tau_max must be nonnegative");

  // substep so that ||tau M dt||_inf <= 1; the Taylor series of e^{tau M dt}
  // then converges fast and all terms are nonnegative
  const double strength = std::abs(tau_max) * t * lat.max_degree();
  const int substeps = std::max(1, static_cast<int>(std::ceil(strength)));
  const double dt = t / substeps;

  Eigen::VectorXd y = alpha0;
  Eigen::VectorXd term(y.size());
  Eigen::VectorXd next(y.size());
  for (int step = 0; step < substeps; ++step) {
    term = y;
    Eigen::VectorXd acc = y;
    for (int k = 1; k <= 400; ++k) {
      // next = (tau dt / k) * M * term
      for (int j = 0; j < lat.num_sites(); ++j) {
        double sum = 0.0;
        for (int nb : lat.neighbors()[static_cast<std::size_t>(j)]) sum += term[nb];
        next[j] = sum * (tau_max * dt / k);
      }
      acc += next;
      term.swap(next);
      double tail = term.lpNorm<1>();
      if (tail <= 1e-18 * std::max(1.0, acc.lpNorm<1>())) break;
      if (k == 400) throw ConvergenceError("envelope Taylor series did not converge", tail);
    }
    y = acc;
  }
  return std::exp(lat.max_degree() * tau_max * t) * y;
}

double analytic_density_bound(const EnvelopeParams& params, double n0, double l, double t) {
  if (n0 < 0.0) throw std::invalid_argument("particle number must be nonnegative");
  if (l < 0.0) throw std::invalid_argument("distance must be nonnegative");
  return params.C * n0 * std::exp(params.v * t - l);
}

double moment_bound(const EnvelopeParams& params, double number_moment, double l, double t) {
  if (number_moment < 0.0) throw std::invalid_argument("number moment must be nonnegative");
  if (l < 0.0) throw std::invalid_argument("distance must be nonnegative");
  return params.C * number_moment * std::exp(params.v * t - l);
}

double observable_bound(const EnvelopeParams& params, ObservableClass cls, double magnitude,
                        double l, double t) {
  if (magnitude < 0.0) throw std::invalid_argument("magnitude must be nonnegative");
  double exponent = params.v * t - l;
  switch (cls) {
    case ObservableClass::balanced:
      return magnitude * std::exp(exponent);
    case ObservableClass::general:
      return magnitude * std::exp(0.5 * exponent);
  }
  throw std::invalid_argument("unknown observable class");
}

double elementwise_expm_certificate(const Lattice& lat, double tau, double t) {
  if (lat.num_sites() > 2000) {
    throw ResourceLimitError("certificate limited to 2000 sites, got " +
                             std::to_string(lat.num_sites()));
  }
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (t < 0.0) throw std::invalid_argument("time must be nonnegative");

  EnvelopeParams params = make_params(lat, tau);
  Eigen::MatrixXd m = lat.adjacency_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("adjacency diagonalization failed", 0.0);
  }
  Eigen::VectorXd scaled = (tau * t * es.eigenvalues().array()).exp();
  Eigen::MatrixXd expm =
      es.eigenvectors() * scaled.asDiagonal() * es.eigenvectors().transpose();

  double worst = 0.0;
  for (int i = 0; i < lat.num_sites(); ++i) {
    for (int j = 0; j < lat.num_sites(); ++j) {
      double bound = params.C * std::exp(params.v0 * t - lat.dist(i, j));
      worst = std::max(worst, expm(i, j) / bound);
    }
  }
  return worst;
}

}  // namespace lcone
