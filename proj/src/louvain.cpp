#include <algorithm>
#include <random>
#include <unordered_map>

#include "repnet/error.hpp"
#include "repnet/graph.hpp"
#include "repnet/graphstats.hpp"

namespace repnet {
namespace {

// Graph at one aggregation level. Loops hold the internal weight of a merged
// community, each internal edge counted once; strength counts loops twice.
struct LevelGraph {
  std::vector<std::vector<Neighbor>> adjacency;
  std::vector<double> loop;
  std::vector<double> strength;
  double total_weight = 0.0;  // m

  std::size_t size() const { return adjacency.size(); }
};

LevelGraph level_from(const WeightedGraph& g) {
  LevelGraph lg;
  lg.adjacency = g.adjacency;
  lg.loop.assign(g.size(), 0.0);
  lg.strength.resize(g.size());
  double twice = 0.0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    lg.strength[v] = g.strength(v);
    twice += lg.strength[v];
  }
  lg.total_weight = twice / 2.0;
  return lg;
}

double level_modularity(const LevelGraph& g, const std::vector<std::size_t>& community, double resolution) {
  const double m2 = 2.0 * g.total_weight;
  std::vector<double> internal(g.size(), 0.0), total(g.size(), 0.0);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto c = community[v];
    total[c] += g.strength[v];
    internal[c] += 2.0 * g.loop[v];
    for (const auto& n : g.adjacency[v]) {
      if (community[n.index] == c) internal[c] += n.weight;  // seen from both ends
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (total[c] > 0.0) q += internal[c] / m2 - resolution * (total[c] / m2) * (total[c] / m2);
  }
  return q;
}

// Local moving phase. Returns true when any node changed community.
bool move_nodes(const LevelGraph& g, std::vector<std::size_t>& community, double resolution,
                std::mt19937_64& rng) {
  const std::size_t n = g.size();
  const double m2 = 2.0 * g.total_weight;
  std::vector<double> tot(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) tot[community[v]] += g.strength[v];

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link_to(n, 0.0);
  std::vector<std::size_t> touched;
  bool any_move = false;
  double current = level_modularity(g, community, resolution);
  while (true) {
    std::size_t moves = 0;
    for (auto v : order) {
      const auto own = community[v];
      const double k = g.strength[v];
      touched.clear();
      touched.push_back(own);
      link_to[own] = 0.0;
      for (const auto& nb : g.adjacency[v]) {
        const auto c = community[nb.index];
        if (link_to[c] == 0.0 && std::find(touched.begin(), touched.end(), c) == touched.end()) {
          touched.push_back(c);
        }
        link_to[c] += nb.weight;
      }
      tot[own] -= k;
      auto gain = [&](std::size_t c) { return link_to[c] - resolution * tot[c] * k / m2; };
      std::size_t best = own;
      double best_gain = gain(own);
      for (auto c : touched) {
        const double gc = gain(c);
        if (gc > best_gain) {
          best_gain = gc;
          best = c;
        }
      }
      tot[best] += k;
      if (best != own) {
        community[v] = best;
        ++moves;
      }
      for (auto c : touched) link_to[c] = 0.0;
    }
    if (moves == 0) break;
    any_move = true;
    const double next = level_modularity(g, community, resolution);
    const bool small = next - current < kLouvainMinGain;
    current = next;
    if (small) break;
  }
  return any_move;
}

// Renumbers communities 0..k-1 in order of first appearance.
std::size_t compact(std::vector<std::size_t>& community) {
  std::unordered_map<std::size_t, std::size_t> remap;
  for (auto& c : community) {
    auto [it, inserted] = remap.emplace(c, remap.size());
    c = it->second;
  }
  return remap.size();
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::size_t>& community, std::size_t k) {
  LevelGraph out;
  out.adjacency.resize(k);
  out.loop.assign(k, 0.0);
  out.strength.assign(k, 0.0);
  out.total_weight = g.total_weight;
  std::vector<std::unordered_map<std::size_t, double>> links(k);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto c = community[v];
    out.strength[c] += g.strength[v];
    out.loop[c] += g.loop[v];
    for (const auto& n : g.adjacency[v]) {
      const auto d = community[n.index];
      if (d == c) {
        if (n.index > v) out.loop[c] += n.weight;
      } else {
        links[c][d] += n.weight;
      }
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (const auto& [d, w] : links[c]) out.adjacency[c].push_back({d, w});
    std::sort(out.adjacency[c].begin(), out.adjacency[c].end(),
              [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
  }
  return out;
}

}  // namespace

double modularity(const DeveloperNetwork& net, const std::map<std::string, int>& assignment, double resolution) {
  const auto g = WeightedGraph::from_network(net);
  std::vector<std::size_t> community(g.size());
  std::unordered_map<int, std::size_t> ids;
  for (std::size_t v = 0; v < g.size(); ++v) {
    auto it = assignment.find(g.names[v]);
    if (it == assignment.end()) throw ValidationError("vertex '" + g.names[v] + "' has no community");
    community[v] = ids.emplace(it->second, ids.size()).first->second;
  }
  const auto lg = level_from(g);
  if (lg.total_weight <= 0.0) return 0.0;
  return level_modularity(lg, community, resolution);
}

CommunityPartition louvain(const DeveloperNetwork& net, std::uint64_t seed, double resolution) {
  if (net.vertex_count() == 0) throw ValidationError("louvain requires a non-empty network");
  if (!(resolution > 0.0)) throw ValidationError("louvain resolution must be positive");

  const auto g = WeightedGraph::from_network(net);
  std::vector<std::size_t> membership(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) membership[v] = v;

  CommunityPartition result;
  auto level = level_from(g);
  if (level.total_weight > 0.0) {
    std::mt19937_64 rng(seed);
    double best = level_modularity(level, membership, resolution);
    while (true) {
      std::vector<std::size_t> community(level.size());
      for (std::size_t c = 0; c < level.size(); ++c) community[c] = c;
      if (!move_nodes(level, community, resolution, rng)) break;
      const double q = level_modularity(level, community, resolution);
      if (q <= best) break;
      const auto k = compact(community);
      for (auto& c : membership) c = community[c];
      result.level_modularity.push_back(q);
      const bool small = q - best < kLouvainMinGain;
      best = q;
      if (small || k == level.size()) break;
      level = aggregate(level, community, k);
    }
  }

  // Community ids follow the smallest (lexicographic) member.
  std::unordered_map<std::size_t, int> canonical;
  result.community_sizes.clear();
  for (std::size_t v = 0; v < g.size(); ++v) {
    auto [it, inserted] = canonical.emplace(membership[v], static_cast<int>(canonical.size()));
    if (inserted) result.community_sizes.push_back(0);
    ++result.community_sizes[static_cast<std::size_t>(it->second)];
    result.assignment.emplace(g.names[v], it->second);
  }
  result.modularity = modularity(net, result.assignment, resolution);
  if (result.level_modularity.empty()) result.level_modularity.push_back(result.modularity);
  return result;
}

}  // namespace repnet
