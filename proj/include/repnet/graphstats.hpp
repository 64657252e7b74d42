#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "repnet/network.hpp"

namespace repnet {

struct StructuralSummary {
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t component_count = 0;
  std::size_t largest_component_size = 0;
  std::vector<std::size_t> component_sizes;  // descending
  double density = 0.0;
  /// Mean unweighted local clustering; vertices of degree < 2 contribute 0.
  double avg_clustering = 0.0;
  /// Mean hop distance over ordered pairs of the largest component; absent
  /// when that component has fewer than two vertices.
  std::optional<double> avg_shortest_path_lcc;
};

/// Unweighted structural diagnostics. Per-source BFS runs on `threads`
/// workers; results do not depend on the thread count.
StructuralSummary structural_summary(const DeveloperNetwork& net, unsigned threads = 1);

/// Unweighted local clustering coefficient per vertex (lexicographic order).
std::vector<double> local_clustering(const DeveloperNetwork& net);

struct CommunityPartition {
  std::map<std::string, int> assignment;
  double modularity = 0.0;
  std::vector<std::size_t> community_sizes;  // indexed by community id
  /// Modularity after each aggregation level, in order.
  std::vector<double> level_modularity;

  std::size_t community_count() const { return community_sizes.size(); }
};

/// Weighted modularity of an assignment, using edge totals as weights.
/// Returns 0 for a network without edges.
double modularity(const DeveloperNetwork& net, const std::map<std::string, int>& assignment,
                  double resolution = 1.0);

inline constexpr double kLouvainMinGain = 1e-7;

/// Multi-level Louvain on edge totals. Vertex visit order is shuffled by
/// `seed`; community ids are numbered by their lexicographically smallest
/// member. Throws ValidationError on an empty network.
CommunityPartition louvain(const DeveloperNetwork& net, std::uint64_t seed = 0, double resolution = 1.0);

/// Histogram of community sizes: size -> number of communities of that size.
std::map<std::size_t, std::size_t> community_size_histogram(const CommunityPartition& partition);

}  // namespace repnet
