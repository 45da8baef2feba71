#ifndef LCONE_OPERATORS_HPP
#define LCONE_OPERATORS_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <cstddef>
#include <vector>

#include "lcone/fock.hpp"

namespace lcone {

using SparseReal = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;

/// Real sparse operator on a fixed basis. All Hamiltonians here are real in
/// the occupation basis; complex structure lives in the state vectors.
class SparseOperator {
 public:
  SparseOperator() = default;
  explicit SparseOperator(SparseReal matrix, bool hermitian = false);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  bool hermitian() const { return hermitian_; }
  const SparseReal& matrix() const { return matrix_; }

  VectorXc apply(const VectorXc& v) const;
  void apply_into(const VectorXc& v, VectorXc& out) const;

  /// max_ij |A_ij - A_ji| over stored entries; 0 for an exactly symmetric matrix.
  double hermiticity_defect() const;

  SparseOperator& operator+=(const SparseOperator& other);
  friend SparseOperator operator*(double scale, const SparseOperator& op);

 private:
  SparseReal matrix_;
  bool hermitian_ = false;
};

/// Triplet accumulator for building sparse matrices entry by entry.
class TripletBuilder {
 public:
  explicit TripletBuilder(std::size_t dim) : dim_(dim) {}
  void add(std::size_t row, std::size_t col, double value);
  SparseReal build() const;

 private:
  std::size_t dim_;
  std::vector<Eigen::Triplet<double>> triplets_;
};

/// Matrix of b†_to b_from for one species on a SectorBasis.
SparseReal hop_matrix(const SectorBasis& basis, std::size_t species, int from_site, int to_site);

/// Matrix of b_site for one species between two sectors of a FockSpace,
/// i.e. a dst.dim() x src.dim() block.
SparseReal annihilation_block(const SectorBasis& src, const SectorBasis& dst, std::size_t species,
                              int site);

/// Diagonal of n_{s,site} on a SectorBasis.
Eigen::VectorXd number_diagonal(const SectorBasis& basis, std::size_t species, int site);

/// Diagonal of the total particle number (all species, all sites).
Eigen::VectorXd total_number_diagonal(const SectorBasis& basis);

/// Matrix of the normally ordered monomial (b†)^p b^q at one site for one
/// species, within the direct-sum FockSpace (it shifts the particle number
/// by p - q). Row/column indices are global FockSpace indices.
SparseReal ladder_monomial_matrix(const FockSpace& space, std::size_t species, int site, int p,
                                  int q);

}  // namespace lcone

#endif
