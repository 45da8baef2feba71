#ifndef LCONE_KRYLOV_HPP
#define LCONE_KRYLOV_HPP

#include <functional>

#include "lcone/operators.hpp"

namespace lcone {

struct KrylovOptions {
  int max_subspace = 30;
  double tolerance = 1e-13;  // per-substep residual target, relative to the input norm
  int max_substeps = 1 << 16;
};

using ApplyFn = std::function<void(const VectorXc&, VectorXc&)>;

/// w = e^{tA} v with A supplied as a matvec callback (A need not be Hermitian;
/// the Schrödinger case passes A = -iH, the Lindblad case the vectorized
/// generator). Arnoldi projection with modified Gram-Schmidt plus one
/// reorthogonalization pass; per-substep residual estimated by Simpson
/// quadrature of |h_{m+1,m} [e^{sH_m}]_{m,1}| and the substep halved until the
/// estimate clears the tolerance. Throws ConvergenceError if halving stalls.
VectorXc expm_action(const ApplyFn& apply, const VectorXc& v, double t,
                     const KrylovOptions& options = {});

}  // namespace lcone

#endif
