#include "duopoly/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "duopoly/error.hpp"
#include "duopoly/rng.hpp"

namespace duopoly::abs {

SocialNetwork::SocialNetwork(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  if (nodes > std::numeric_limits<std::uint32_t>::max()) throw ParameterError("network too large");
  std::vector<std::size_t> deg(nodes, 0);
  for (auto [a, b] : edges) {
    if (a >= nodes || b >= nodes || a == b) throw ParameterError("invalid edge");
    ++deg[a];
    ++deg[b];
  }
  offsets_.assign(nodes + 1, 0);
  for (std::size_t i = 0; i < nodes; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  adjacency_.resize(offsets_[nodes]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (auto [a, b] : edges) {
    adjacency_[fill[a]++] = static_cast<std::uint32_t>(b);
    adjacency_[fill[b]++] = static_cast<std::uint32_t>(a);
  }
  for (std::size_t i = 0; i < nodes; ++i)
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
}

bool SocialNetwork::connected() const {
  const std::size_t n = size();
  if (n == 0) return true;
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::uint32_t w : neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

SocialNetwork generate_ba_network(std::size_t nodes, std::size_t m0, std::size_t m, std::uint64_t seed) {
  if (m == 0) throw ParameterError("m must be >= 1");
  if (m > m0) throw ParameterError("m must not exceed m0");
  if (nodes < m0) throw ParameterError("network size must be >= m0");

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(m0 * (m0 - 1) / 2 + m * (nodes - m0));
  // every edge contributes both endpoints, so a uniform pick from this list is degree-proportional
  std::vector<std::size_t> endpoints;
  endpoints.reserve(2 * edges.capacity());
  for (std::size_t a = 0; a < m0; ++a) {
    for (std::size_t b = a + 1; b < m0; ++b) {
      edges.emplace_back(a, b);
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> targets;
  for (std::size_t v = m0; v < nodes; ++v) {
    targets.clear();
    while (targets.size() < m) {
      std::size_t t;
      if (endpoints.empty()) {
        t = std::uniform_int_distribution<std::size_t>(0, v - 1)(rng);
      } else {
        t = endpoints[std::uniform_int_distribution<std::size_t>(0, endpoints.size() - 1)(rng)];
      }
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (std::size_t t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return SocialNetwork(nodes, edges);
}

double degree_ccdf_slope(const SocialNetwork& net, std::size_t min_degree) {
  const std::size_t n = net.size();
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t i = 0; i < n; ++i) ++counts[net.degree(i)];
  std::vector<double> xs, ys;
  std::size_t at_least = n;
  for (auto [d, c] : counts) {
    if (d >= min_degree && d > 0) {
      xs.push_back(std::log(static_cast<double>(d)));
      ys.push_back(std::log(static_cast<double>(at_least) / static_cast<double>(n)));
    }
    at_least -= c;
  }
  if (xs.size() < 2) throw InsufficientDataError("fewer than two distinct degrees above the cutoff");
  const double k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace duopoly::abs
