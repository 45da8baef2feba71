#include "lcone/lattice.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace lcone {

Lattice Lattice::chain(int length, bool periodic) {
  if (length < 2) throw std::invalid_argument("chain lattice needs at least 2 sites");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(length));
  for (int j = 0; j + 1 < length; ++j) edges.emplace_back(j, j + 1);
  if (periodic && length > 2) edges.emplace_back(0, length - 1);
  return Lattice(length, std::move(edges));
}

Lattice Lattice::grid(int width, int height, bool periodic) {
  if (width < 2 || height < 2)
    throw std::invalid_argument("grid lattice needs width >= 2 and height >= 2");
  auto id = [width](int x, int y) { return y * width + x; };
  std::vector<std::pair<int, int>> edges;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (x + 1 < width)
        edges.emplace_back(id(x, y), id(x + 1, y));
      else if (periodic && width > 2)
        edges.emplace_back(id(0, y), id(x, y));
      if (y + 1 < height)
        edges.emplace_back(id(x, y), id(x, y + 1));
      else if (periodic && height > 2)
        edges.emplace_back(id(x, 0), id(x, y));
    }
  }
  return Lattice(width * height, std::move(edges));
}

Lattice Lattice::from_edges(int num_sites, const std::vector<std::pair<int, int>>& edges) {
  if (num_sites < 1) throw std::invalid_argument("lattice needs at least 1 site");
  return Lattice(num_sites, edges);
}

Lattice::Lattice(int num_sites, std::vector<std::pair<int, int>> edges) : num_sites_(num_sites) {
  std::set<std::pair<int, int>> dedup;
  for (auto [a, b] : edges) {
    if (a == b)
      throw std::invalid_argument("self-loop at site " + std::to_string(a));
    if (a < 0 || b < 0 || a >= num_sites_ || b >= num_sites_)
      throw std::invalid_argument("edge endpoint out of range: (" + std::to_string(a) + "," +
                                  std::to_string(b) + ")");
    dedup.emplace(std::min(a, b), std::max(a, b));
  }
  edges_.assign(dedup.begin(), dedup.end());

  neighbors_.assign(static_cast<std::size_t>(num_sites_), {});
  for (auto [a, b] : edges_) {
    neighbors_[static_cast<std::size_t>(a)].push_back(b);
    neighbors_[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());

  max_degree_ = 0;
  for (const auto& nb : neighbors_)
    max_degree_ = std::max(max_degree_, static_cast<int>(nb.size()));

  // all-pairs BFS
  const std::uint16_t unreached = std::numeric_limits<std::uint16_t>::max();
  dist_.assign(static_cast<std::size_t>(num_sites_) * num_sites_, unreached);
  std::deque<int> queue;
  for (int src = 0; src < num_sites_; ++src) {
    std::uint16_t* row = dist_.data() + static_cast<std::size_t>(src) * num_sites_;
    row[src] = 0;
    queue.clear();
    queue.push_back(src);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int w : neighbors_[static_cast<std::size_t>(u)]) {
        if (row[w] == unreached) {
          row[w] = static_cast<std::uint16_t>(row[u] + 1);
          queue.push_back(w);
        }
      }
    }
    for (int j = 0; j < num_sites_; ++j)
      if (row[j] == unreached)
        throw std::invalid_argument("graph is disconnected: no path from site " +
                                    std::to_string(src) + " to site " + std::to_string(j));
  }
}

int Lattice::region_distance(const std::vector<int>& S, const std::vector<int>& R) const {
  if (S.empty() || R.empty()) throw std::invalid_argument("region_distance: empty region");
  for (int s : S)
    if (s < 0 || s >= num_sites_) throw std::invalid_argument("region_distance: site out of range");
  for (int r : R)
    if (r < 0 || r >= num_sites_) throw std::invalid_argument("region_distance: site out of range");
  for (int s : S)
    for (int r : R)
      if (s == r) throw std::invalid_argument("region_distance: regions overlap at site " + std::to_string(s));
  int best = std::numeric_limits<int>::max();
  for (int s : S)
    for (int r : R) best = std::min(best, dist(s, r));
  return best;
}

int Lattice::site_region_distance(int j, const std::vector<int>& R) const {
  if (R.empty()) throw std::invalid_argument("site_region_distance: empty region");
  if (j < 0 || j >= num_sites_) throw std::invalid_argument("site_region_distance: site out of range");
  int best = std::numeric_limits<int>::max();
  for (int r : R) {
    if (r < 0 || r >= num_sites_)
      throw std::invalid_argument("site_region_distance: region site out of range");
    best = std::min(best, dist(j, r));
  }
  return best;
}

Eigen::MatrixXd Lattice::adjacency_dense() const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(num_sites_, num_sites_);
  for (auto [a, b] : edges_) {
    M(a, b) = 1.0;
    M(b, a) = 1.0;
  }
  return M;
}

}  // namespace lcone
