#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "repnet/graph.hpp"
#include "repnet/network.hpp"

namespace repnet {

/// How collaboration totals become path lengths. `inverse` treats weight as
/// strength (d = 1/w); `raw` uses the weight itself as a distance.
enum class DistanceTransform { Inverse, Raw };

/// `unweighted` is degree/(n-1); `strength` is strength/((n-1)*max weight).
enum class DegreeMode { Unweighted, Strength };

DistanceTransform parse_distance_transform(std::string_view name);
std::string_view to_string(DistanceTransform t);

struct CentralityConfig {
  DistanceTransform distance_transform = DistanceTransform::Inverse;
  DegreeMode degree_mode = DegreeMode::Unweighted;
  double pagerank_damping = 0.85;
  double pagerank_tol = 1e-9;
  int pagerank_max_iter = 100000;
  double eigen_tol = 1e-6;
  int eigen_max_iter = 1000;
  /// Relative tolerance under which two path lengths count as tied.
  double tie_epsilon = 1e-12;
  /// Worker threads for per-source passes. Results are bit-identical for
  /// every thread count.
  unsigned threads = 1;

  void validate() const;
};

// Each measure returns one value per vertex of WeightedGraph::from_network
// order (lexicographic by login).

std::vector<double> degree_centrality(const WeightedGraph& g, const CentralityConfig& cfg = {});

/// Component-size-corrected closeness: (r/(n-1)) * (r / sum of distances to
/// the r reachable vertices); 0 for isolated vertices.
std::vector<double> closeness_centrality(const WeightedGraph& g, const CentralityConfig& cfg = {});

/// Brandes accumulation on weighted shortest paths, normalized by
/// 2/((n-1)(n-2)). All zeros when n < 3.
std::vector<double> betweenness_centrality(const WeightedGraph& g, const CentralityConfig& cfg = {});

/// Power iteration on (A / max weight + I), Euclidean-normalized each step.
/// Throws ValidationError without edges, ConvergenceError past eigen_max_iter.
std::vector<double> eigenvector_centrality(const WeightedGraph& g, const CentralityConfig& cfg = {});

/// Weighted PageRank; isolated vertices spread their mass uniformly.
std::vector<double> pagerank(const WeightedGraph& g, const CentralityConfig& cfg = {});

inline constexpr std::array<std::string_view, 5> kMeasureNames = {"degree", "closeness", "betweenness",
                                                                   "eigenvector", "pagerank"};

struct CentralityTable {
  std::vector<std::string> contributors;  // sorted
  std::vector<double> degree;
  std::vector<double> closeness;
  std::vector<double> betweenness;
  std::vector<double> eigenvector;
  std::vector<double> pagerank;
  CentralityConfig config;

  std::size_t size() const { return contributors.size(); }
  /// Column by index into kMeasureNames.
  const std::vector<double>& column(std::size_t measure) const;
  std::vector<double>& column(std::size_t measure);
};

CentralityTable centrality_table(const DeveloperNetwork& net, const CentralityConfig& cfg = {});

/// `contributor,degree,closeness,betweenness,eigenvector,pagerank`.
std::string write_centrality_csv(const CentralityTable& table);
CentralityTable read_centrality_csv(std::string_view text);

}  // namespace repnet
