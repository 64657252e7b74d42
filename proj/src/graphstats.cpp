#include "repnet/graphstats.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <numeric>

#include "parallel.hpp"
#include "repnet/graph.hpp"

namespace repnet {
namespace {

std::vector<int> component_labels(const WeightedGraph& g, std::size_t& count) {
  std::vector<int> label(g.size(), -1);
  count = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (label[s] >= 0) continue;
    const int id = static_cast<int>(count++);
    label[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (const auto& n : g.adjacency[v]) {
        if (label[n.index] < 0) {
          label[n.index] = id;
          stack.push_back(n.index);
        }
      }
    }
  }
  return label;
}

std::vector<double> clustering_of(const WeightedGraph& g) {
  std::vector<double> out(g.size(), 0.0);
  std::vector<char> mark(g.size(), 0);
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto d = g.degree(v);
    if (d < 2) continue;
    for (const auto& n : g.adjacency[v]) mark[n.index] = 1;
    std::size_t links = 0;
    for (const auto& n : g.adjacency[v]) {
      for (const auto& m : g.adjacency[n.index]) links += mark[m.index];
    }
    for (const auto& n : g.adjacency[v]) mark[n.index] = 0;
    // Each neighbour-neighbour link was seen from both ends.
    out[v] = static_cast<double>(links) / static_cast<double>(d * (d - 1));
  }
  return out;
}

}  // namespace

std::vector<double> local_clustering(const DeveloperNetwork& net) {
  return clustering_of(WeightedGraph::from_network(net));
}

StructuralSummary structural_summary(const DeveloperNetwork& net, unsigned threads) {
  const auto g = WeightedGraph::from_network(net);
  StructuralSummary s;
  s.vertex_count = g.size();
  s.edge_count = g.edge_count();
  if (s.vertex_count >= 2) {
    const double n = static_cast<double>(s.vertex_count);
    s.density = 2.0 * static_cast<double>(s.edge_count) / (n * (n - 1.0));
  }

  std::size_t count = 0;
  const auto label = component_labels(g, count);
  s.component_count = count;
  std::vector<std::size_t> sizes(count, 0);
  for (int l : label) ++sizes[static_cast<std::size_t>(l)];
  int largest = -1;
  for (std::size_t c = 0; c < count; ++c) {
    if (largest < 0 || sizes[c] > sizes[static_cast<std::size_t>(largest)]) largest = static_cast<int>(c);
  }
  s.component_sizes = sizes;
  std::sort(s.component_sizes.begin(), s.component_sizes.end(), std::greater<>());
  s.largest_component_size = largest < 0 ? 0 : sizes[static_cast<std::size_t>(largest)];

  const auto cc = clustering_of(g);
  if (!cc.empty()) s.avg_clustering = std::accumulate(cc.begin(), cc.end(), 0.0) / static_cast<double>(cc.size());

  if (s.largest_component_size >= 2) {
    std::vector<std::size_t> members;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (label[v] == largest) members.push_back(v);
    }
    std::uint64_t total_hops = 0;
    std::mutex total_mutex;
    detail::parallel_chunks(members.size(), threads, [&](std::size_t begin, std::size_t end) {
      std::vector<int> dist(g.size(), -1);
      std::deque<std::size_t> queue;
      std::uint64_t local = 0;
      for (std::size_t i = begin; i < end; ++i) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[members[i]] = 0;
        queue.push_back(members[i]);
        while (!queue.empty()) {
          auto v = queue.front();
          queue.pop_front();
          local += static_cast<std::uint64_t>(dist[v]);
          for (const auto& n : g.adjacency[v]) {
            if (dist[n.index] < 0) {
              dist[n.index] = dist[v] + 1;
              queue.push_back(n.index);
            }
          }
        }
      }
      std::lock_guard lock(total_mutex);
      total_hops += local;
    });
    const double k = static_cast<double>(s.largest_component_size);
    s.avg_shortest_path_lcc = static_cast<double>(total_hops) / (k * (k - 1.0));
  }
  return s;
}

std::map<std::size_t, std::size_t> community_size_histogram(const CommunityPartition& partition) {
  std::map<std::size_t, std::size_t> hist;
  for (auto size : partition.community_sizes) ++hist[size];
  return hist;
}

}  // namespace repnet
