#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "repnet/network.hpp"

namespace repnet {

struct Neighbor {
  std::size_t index;
  double weight;
};

/// Index-based adjacency view of a DeveloperNetwork. Vertex i is the i-th
/// login in lexicographic order; edge weights are collaboration totals.
struct WeightedGraph {
  std::vector<std::string> names;
  std::vector<std::vector<Neighbor>> adjacency;  // neighbours sorted by index

  static WeightedGraph from_network(const DeveloperNetwork& net);

  std::size_t size() const { return names.size(); }
  std::size_t edge_count() const;
  std::size_t degree(std::size_t v) const { return adjacency[v].size(); }
  double strength(std::size_t v) const;
  double max_weight() const;
};

}  // namespace repnet
