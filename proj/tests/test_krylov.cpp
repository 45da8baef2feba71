#include <doctest.h>

#include <complex>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "lcone/krylov.hpp"

using namespace lcone;

namespace {

MatrixXc random_matrix(int n, unsigned seed, bool hermitian) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  MatrixXc m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = std::complex<double>(dist(rng), dist(rng));
  }
  if (hermitian) m = 0.5 * (m + m.adjoint().eval());
  return m;
}

VectorXc random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  VectorXc v(n);
  for (int i = 0; i < n; ++i) v[i] = std::complex<double>(dist(rng), dist(rng));
  return v.normalized();
}

ApplyFn matvec(const MatrixXc& m) {
  return [&m](const VectorXc& in, VectorXc& out) { out = m * in; };
}

}  // namespace

TEST_CASE("Krylov action matches dense exponentiation, Hermitian generator") {
  for (int n : {8, 40}) {
    MatrixXc h = random_matrix(n, 11u + static_cast<unsigned>(n), true);
    MatrixXc a = std::complex<double>(0.0, -1.0) * h;  // Schrödinger form
    VectorXc v = random_vector(n, 7u);
    for (double t : {0.1, 1.0, 4.0}) {
      VectorXc exact = (t * a).exp() * v;
      VectorXc approx = expm_action(matvec(a), v, t);
      CHECK((approx - exact).norm() < 1e-11);
      // unitary evolution preserves the norm
      CHECK(approx.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("Krylov action matches dense exponentiation, non-normal generator") {
  MatrixXc a = random_matrix(24, 3u, false);
  a -= MatrixXc::Identity(24, 24) * 0.5;  // push the spectrum left, Lindblad-like
  VectorXc v = random_vector(24, 5u);
  for (double t : {0.3, 2.0}) {
    VectorXc exact = (t * a).exp() * v;
    VectorXc approx = expm_action(matvec(a), v, t);
    CHECK((approx - exact).norm() < 1e-11);
  }
}

TEST_CASE("dimension exceeding the subspace cap still converges via substeps") {
  MatrixXc h = random_matrix(120, 19u, true);
  MatrixXc a = std::complex<double>(0.0, -1.0) * h;
  VectorXc v = random_vector(120, 23u);
  KrylovOptions opts;
  opts.max_subspace = 12;
  VectorXc exact = (2.0 * a).exp() * v;
  VectorXc approx = expm_action(matvec(a), v, 2.0, opts);
  CHECK((approx - exact).norm() < 1e-10);
}

TEST_CASE("happy breakdown on an invariant subspace is exact") {
  // block diagonal: v lives entirely in the first block
  MatrixXc a = MatrixXc::Zero(6, 6);
  MatrixXc block = random_matrix(2, 31u, true);
  a.topLeftCorner(2, 2) = std::complex<double>(0.0, -1.0) * block;
  a.bottomRightCorner(4, 4) =
      std::complex<double>(0.0, -1.0) * random_matrix(4, 37u, true);
  VectorXc v = VectorXc::Zero(6);
  v[0] = 1.0;
  VectorXc exact = (1.5 * a).exp() * v;
  VectorXc approx = expm_action(matvec(a), v, 1.5);
  CHECK((approx - exact).norm() < 1e-12);
}

TEST_CASE("zero time and zero vector are identities") {
  MatrixXc a = random_matrix(5, 41u, false);
  VectorXc v = random_vector(5, 43u);
  CHECK((expm_action(matvec(a), v, 0.0) - v).norm() == 0.0);
  VectorXc zero = VectorXc::Zero(5);
  CHECK(expm_action(matvec(a), zero, 1.0).norm() == 0.0);
}
