#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace duopoly::abs {

/// Undirected graph in compressed sparse row form. Neighbor lists are sorted.
class SocialNetwork {
 public:
  SocialNetwork() = default;
  SocialNetwork(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

  std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }
  std::size_t degree(std::size_t node) const { return offsets_[node + 1] - offsets_[node]; }
  std::span<const std::uint32_t> neighbors(std::size_t node) const {
    return {adjacency_.data() + offsets_[node], degree(node)};
  }
  bool connected() const;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> adjacency_;
};

/// Barabasi-Albert growth from a complete seed graph on m0 nodes; each later node attaches to m
/// distinct existing nodes chosen with probability proportional to degree.
/// Throws ParameterError unless 1 <= m <= m0 <= nodes.
SocialNetwork generate_ba_network(std::size_t nodes, std::size_t m0, std::size_t m, std::uint64_t seed);

/// Least-squares slope of log P(D >= d) against log d over the distinct degrees d >= min_degree.
double degree_ccdf_slope(const SocialNetwork& net, std::size_t min_degree);

}  // namespace duopoly::abs
