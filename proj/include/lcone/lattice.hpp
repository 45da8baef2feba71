#ifndef LCONE_LATTICE_HPP
#define LCONE_LATTICE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lcone {

/// Undirected, unweighted, connected hopping graph.
///
/// Stores the adjacency structure together with the quantities every
/// propagation bound consumes: hop distances d(j,k), the maximal vertex
/// degree D, and Delta = ||M||_inf / 2 (half the maximal row sum of the
/// adjacency matrix M). Immutable after construction.
class Lattice {
 public:
  /// 1d chain of `length` sites, optionally closed into a ring. length >= 2.
  static Lattice chain(int length, bool periodic);

  /// width x height rectangular grid, site id = y*width + x. Both >= 2.
  /// Periodic wrap edges are added per dimension only when that dimension
  /// has more than 2 sites (a 0/1 adjacency matrix cannot hold the double
  /// edge of a length-2 ring).
  static Lattice grid(int width, int height, bool periodic);

  /// Arbitrary graph from an edge list. Edges are deduplicated; self-loops,
  /// out-of-range endpoints and disconnected graphs are rejected.
  /// num_sites = 1 with no edges is the valid single-mode graph.
  static Lattice from_edges(int num_sites, const std::vector<std::pair<int, int>>& edges);

  int num_sites() const { return num_sites_; }
  int max_degree() const { return max_degree_; }           // D
  double delta() const { return 0.5 * max_degree_; }       // ||M||_inf / 2
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }

  /// Hop distance. Precomputed by all-pairs BFS at construction.
  int dist(int a, int b) const { return dist_[static_cast<std::size_t>(a) * num_sites_ + b]; }

  /// min over (s, r) in S x R of dist(s, r). S and R must be nonempty,
  /// in-range and disjoint.
  int region_distance(const std::vector<int>& S, const std::vector<int>& R) const;

  /// d(j, R) = min over r in R of dist(j, r). R must be nonempty.
  int site_region_distance(int j, const std::vector<int>& R) const;

  /// Dense 0/1 adjacency matrix M (symmetric, zero diagonal).
  Eigen::MatrixXd adjacency_dense() const;

 private:
  Lattice(int num_sites, std::vector<std::pair<int, int>> edges);

  int num_sites_ = 0;
  int max_degree_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::uint16_t> dist_;  // row-major num_sites x num_sites
};

}  // namespace lcone

#endif
