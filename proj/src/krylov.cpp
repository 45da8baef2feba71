#include "lcone/krylov.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "lcone/errors.hpp"

namespace lcone {

namespace {

struct ArnoldiResult {
  int m = 0;              // subspace dimension actually built
  double beta = 0.0;      // norm of the start vector
  double h_next = 0.0;    // h_{m+1,m}; 0 on happy breakdown
  MatrixXc hess;          // m x m upper Hessenberg projection
  MatrixXc basis;         // dim x m orthonormal columns
};

ArnoldiResult arnoldi(const ApplyFn& apply, const VectorXc& v, int max_m) {
  ArnoldiResult r;
  const Eigen::Index dim = v.size();
  const int m_cap = static_cast<int>(std::min<Eigen::Index>(max_m, dim));
  r.beta = v.norm();
  r.hess = MatrixXc::Zero(m_cap, m_cap);
  r.basis = MatrixXc::Zero(dim, m_cap);
  if (r.beta == 0.0) return r;

  r.basis.col(0) = v / r.beta;
  VectorXc w(dim);
  for (int j = 0; j < m_cap; ++j) {
    apply(r.basis.col(j), w);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        std::complex<double> overlap = r.basis.col(i).dot(w);
        w -= overlap * r.basis.col(i);
        r.hess(i, j) += overlap;
      }
    }
    double h = w.norm();
    r.m = j + 1;
    if (j + 1 == m_cap) {
      r.h_next = h;
      break;
    }
    if (h < 1e-14 * std::max(1.0, r.hess.cwiseAbs().maxCoeff())) {
      r.h_next = 0.0;  // happy breakdown: Krylov space is invariant
      break;
    }
    r.hess(j + 1, j) = h;
    r.basis.col(j + 1) = w / h;
  }
  return r;
}

}  // namespace

VectorXc expm_action(const ApplyFn& apply, const VectorXc& v, double t,
                     const KrylovOptions& options) {
  if (t < 0.0) throw std::invalid_argument("expm_action needs t >= 0");
  if (options.max_subspace < 1) throw std::invalid_argument("subspace size must be positive");
  if (v.size() == 0) return v;
  if (t == 0.0 || v.norm() == 0.0) return v;

  const double tol = options.tolerance * std::max(1.0, v.norm());
  VectorXc w = v;
  double remaining = t;
  double dt = t;
  int substeps = 0;
  double worst_estimate = 0.0;

  while (remaining > 0.0) {
    if (++substeps > options.max_substeps) {
      throw ConvergenceError("matrix exponential action did not converge in " +
                                 std::to_string(options.max_substeps) + " substeps",
                             worst_estimate);
    }
    dt = std::min(dt, remaining);
    ArnoldiResult ar = arnoldi(apply, w, options.max_subspace);
    if (ar.beta == 0.0) break;  // the zero vector stays zero

    const MatrixXc hess = ar.hess.topLeftCorner(ar.m, ar.m);
    const auto basis = ar.basis.leftCols(ar.m);

    MatrixXc exp_full = (dt * hess).exp();
    double estimate = 0.0;
    if (ar.h_next > 0.0) {
      // Simpson on s -> |h_{m+1,m} [e^{sH}]_{m,1}| over [0, dt]; the s=0 term
      // vanishes for m > 1 and equals 1 only in the m=1 corner
      MatrixXc exp_half = (0.5 * dt * hess).exp();
      double f0 = (ar.m == 1) ? 1.0 : 0.0;
      double fh = std::abs(exp_half(ar.m - 1, 0));
      double f1 = std::abs(exp_full(ar.m - 1, 0));
      estimate = ar.beta * ar.h_next * (dt / 6.0) * (f0 + 4.0 * fh + f1);
    }
    worst_estimate = std::max(worst_estimate, estimate);

    if (estimate <= tol || dt <= remaining * 1e-12) {
      if (estimate > tol) {
        throw ConvergenceError("matrix exponential substep cannot reach tolerance", estimate);
      }
      w = basis * (ar.beta * exp_full.col(0));
      remaining -= dt;
      if (estimate < 0.1 * tol) dt *= 2.0;  // cheap growth after easy steps
    } else {
      dt *= 0.5;
    }
  }
  return w;
}

}  // namespace lcone
