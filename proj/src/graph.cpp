#include "repnet/graph.hpp"

#include <algorithm>
#include <unordered_map>

namespace repnet {

WeightedGraph WeightedGraph::from_network(const DeveloperNetwork& net) {
  WeightedGraph g;
  g.names.assign(net.vertices().begin(), net.vertices().end());
  g.adjacency.resize(g.names.size());
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < g.names.size(); ++i) index.emplace(g.names[i], i);
  for (const auto& [pair, w] : net.edges()) {
    const auto a = index.at(pair.first);
    const auto b = index.at(pair.second);
    const auto weight = static_cast<double>(w.total());
    g.adjacency[a].push_back({b, weight});
    g.adjacency[b].push_back({a, weight});
  }
  for (auto& nbrs : g.adjacency) {
    std::sort(nbrs.begin(), nbrs.end(), [](const Neighbor& x, const Neighbor& y) { return x.index < y.index; });
  }
  return g;
}

std::size_t WeightedGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nbrs : adjacency) twice += nbrs.size();
  return twice / 2;
}

double WeightedGraph::strength(std::size_t v) const {
  double s = 0;
  for (const auto& n : adjacency[v]) s += n.weight;
  return s;
}

double WeightedGraph::max_weight() const {
  double m = 0;
  for (const auto& nbrs : adjacency) {
    for (const auto& n : nbrs) m = std::max(m, n.weight);
  }
  return m;
}

}  // namespace repnet
