#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "repnet/ingest.hpp"

namespace repnet {

/// Unordered contributor pair stored with first < second.
using ContributorPair = std::pair<std::string, std::string>;

/// Throws ValidationError when a == b.
ContributorPair make_contributor_pair(std::string_view a, std::string_view b);

using PairCounts = std::map<ContributorPair, std::int64_t>;

struct EdgeWeights {
  std::int64_t coedit = 0;
  std::int64_t review = 0;

  std::int64_t total() const { return coedit + review; }
  bool operator==(const EdgeWeights&) const = default;
};

/// Undirected weighted collaboration graph keyed by login. Vertices and
/// edges iterate in lexicographic order.
class DeveloperNetwork {
 public:
  void add_vertex(const std::string& login);
  /// Adds counts to the (a, b) edge, creating vertices as needed.
  void add_collaboration(std::string_view a, std::string_view b, std::int64_t coedit, std::int64_t review);

  const std::set<std::string>& vertices() const { return vertices_; }
  const std::map<ContributorPair, EdgeWeights>& edges() const { return edges_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool contains(const std::string& login) const { return vertices_.count(login) > 0; }

  bool operator==(const DeveloperNetwork&) const = default;

 private:
  std::set<std::string> vertices_;
  std::map<ContributorPair, EdgeWeights> edges_;
};

inline constexpr int kDefaultCoeditWindowDays = 30;

/// Counts, per author pair, the commit pairs by distinct authors that touched
/// a common file no more than window_days apart (inclusive).
PairCounts coedition_events(const EventLog& log, int window_days = kDefaultCoeditWindowDays);

/// One event per (author, distinct approver) per commit, per (author, merger)
/// when the merger is not the author and not already an approver, and per
/// rejected pull request.
PairCounts review_events(const EventLog& log);

DeveloperNetwork build_network(const EventLog& log, int window_days = kDefaultCoeditWindowDays);

enum class GraphFormat { GraphML, Dot, EdgeCsv };

GraphFormat parse_graph_format(std::string_view name);

/// Byte-stable serialization; edges carry weight (total), coedit and review.
std::string export_graph(const DeveloperNetwork& net, GraphFormat format);

/// Reads the edge-csv format written by export_graph. Isolated vertices are
/// not representable in this format.
DeveloperNetwork import_edge_csv(std::string_view text);

/// Reads GraphML documents in the layout written by export_graph.
DeveloperNetwork import_graphml(std::string_view text);

}  // namespace repnet
