#include "repnet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "parallel.hpp"
#include "repnet/csv.hpp"
#include "repnet/error.hpp"

namespace repnet {

DistanceTransform parse_distance_transform(std::string_view name) {
  if (name == "inverse") return DistanceTransform::Inverse;
  if (name == "raw") return DistanceTransform::Raw;
  throw ValidationError("unknown distance transform '" + std::string(name) + "' (expected inverse or raw)");
}

std::string_view to_string(DistanceTransform t) { return t == DistanceTransform::Inverse ? "inverse" : "raw"; }

void CentralityConfig::validate() const {
  if (!(pagerank_damping > 0.0 && pagerank_damping < 1.0)) {
    throw ValidationError("pagerank damping must lie in (0, 1)");
  }
  if (!(pagerank_tol > 0.0) || !(eigen_tol > 0.0) || !(tie_epsilon > 0.0)) {
    throw ValidationError("centrality tolerances must be positive");
  }
  if (eigen_max_iter < 1 || pagerank_max_iter < 1) throw ValidationError("iteration limits must be positive");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double to_distance(double weight, DistanceTransform t) {
  if (!(weight > 0.0)) throw ValidationError("edge weights must be positive for path-based centrality");
  return t == DistanceTransform::Inverse ? 1.0 / weight : weight;
}

void check_weights(const WeightedGraph& g) {
  for (const auto& nbrs : g.adjacency) {
    for (const auto& n : nbrs) {
      if (!(n.weight > 0.0)) throw ValidationError("edge weights must be positive for path-based centrality");
    }
  }
}

// Single-source shortest paths with path counting, shared by closeness and
// betweenness. `order` lists vertices in the order they were settled.
struct ShortestPaths {
  std::vector<double> dist;
  std::vector<double> sigma;
  std::vector<std::vector<std::size_t>> pred;
  std::vector<std::size_t> order;

  explicit ShortestPaths(std::size_t n) : dist(n), sigma(n), pred(n) { order.reserve(n); }

  void run(const WeightedGraph& g, std::size_t source, const CentralityConfig& cfg) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    for (auto& p : pred) p.clear();
    order.clear();

    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<char> settled(g.size(), 0);
    dist[source] = 0.0;
    sigma[source] = 1.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (settled[v] || d > dist[v]) continue;
      settled[v] = 1;
      order.push_back(v);
      for (const auto& n : g.adjacency[v]) {
        const auto w = n.index;
        if (settled[w]) continue;
        const double alt = dist[v] + to_distance(n.weight, cfg.distance_transform);
        const double scale = std::max(alt, dist[w]);
        if (dist[w] != kInf && std::abs(alt - dist[w]) <= cfg.tie_epsilon * scale) {
          sigma[w] += sigma[v];
          pred[w].push_back(v);
        } else if (alt < dist[w]) {
          dist[w] = alt;
          sigma[w] = sigma[v];
          pred[w].assign(1, v);
          heap.push({alt, w});
        }
      }
    }
  }
};

}  // namespace

std::vector<double> degree_centrality(const WeightedGraph& g, const CentralityConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.size();
  if (n < 2) throw ValidationError("degree centrality needs at least two vertices");
  const double denom = static_cast<double>(n - 1);
  std::vector<double> out(n, 0.0);
  if (cfg.degree_mode == DegreeMode::Unweighted) {
    for (std::size_t v = 0; v < n; ++v) out[v] = static_cast<double>(g.degree(v)) / denom;
  } else {
    const double wmax = g.max_weight();
    if (wmax > 0.0) {
      for (std::size_t v = 0; v < n; ++v) out[v] = g.strength(v) / (denom * wmax);
    }
  }
  return out;
}

std::vector<double> closeness_centrality(const WeightedGraph& g, const CentralityConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.size();
  if (n < 2) throw ValidationError("closeness centrality needs at least two vertices");
  check_weights(g);
  std::vector<double> out(n, 0.0);
  detail::parallel_chunks(n, cfg.threads, [&](std::size_t begin, std::size_t end) {
    ShortestPaths sp(n);
    for (std::size_t s = begin; s < end; ++s) {
      sp.run(g, s, cfg);
      double total = 0.0;
      std::size_t reached = 0;
      for (auto v : sp.order) {
        if (v == s) continue;
        total += sp.dist[v];
        ++reached;
      }
      if (reached > 0 && total > 0.0) {
        const double r = static_cast<double>(reached);
        out[s] = (r / static_cast<double>(n - 1)) * (r / total);
      }
    }
  });
  return out;
}

std::vector<double> betweenness_centrality(const WeightedGraph& g, const CentralityConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.size();
  std::vector<double> out(n, 0.0);
  if (n < 3) return out;
  check_weights(g);

  // Sources are processed in fixed-size batches and each batch is reduced in
  // source order, so the floating-point sum is independent of thread count.
  constexpr std::size_t kBatch = 64;
  std::vector<std::vector<double>> partial(kBatch, std::vector<double>(n, 0.0));
  for (std::size_t first = 0; first < n; first += kBatch) {
    const std::size_t count = std::min(kBatch, n - first);
    detail::parallel_chunks(count, cfg.threads, [&](std::size_t begin, std::size_t end) {
      ShortestPaths sp(n);
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t s = first + i;
        auto& delta = partial[i];
        std::fill(delta.begin(), delta.end(), 0.0);
        sp.run(g, s, cfg);
        for (auto it = sp.order.rbegin(); it != sp.order.rend(); ++it) {
          const auto w = *it;
          for (auto v : sp.pred[w]) delta[v] += sp.sigma[v] / sp.sigma[w] * (1.0 + delta[w]);
        }
        delta[s] = 0.0;
      }
    });
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t v = 0; v < n; ++v) out[v] += partial[i][v];
    }
  }
  // Every unordered pair was accumulated from both endpoints.
  const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
  for (auto& b : out) b *= scale;
  return out;
}

std::vector<double> eigenvector_centrality(const WeightedGraph& g, const CentralityConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.size();
  if (g.edge_count() == 0) throw ValidationError("eigenvector centrality needs at least one edge");
  // Dividing by the largest weight makes the iteration identical under
  // uniform rescaling of the weights; the +I shift keeps bipartite graphs
  // from oscillating.
  const double wmax = g.max_weight();
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> next(n);
  for (int iter = 0; iter < cfg.eigen_max_iter; ++iter) {
    for (std::size_t v = 0; v < n; ++v) {
      double acc = x[v];
      for (const auto& nb : g.adjacency[v]) acc += (nb.weight / wmax) * x[nb.index];
      next[v] = acc;
    }
    double norm = 0.0;
    for (double a : next) norm += a * a;
    norm = std::sqrt(norm);
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] /= norm;
      change = std::max(change, std::abs(next[v] - x[v]));
    }
    x.swap(next);
    if (change < cfg.eigen_tol) return x;
  }
  throw ConvergenceError("eigenvector centrality did not converge within " + std::to_string(cfg.eigen_max_iter) +
                         " iterations");
}

std::vector<double> pagerank(const WeightedGraph& g, const CentralityConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.size();
  if (n == 0) return {};
  const double d = cfg.pagerank_damping;
  const double nn = static_cast<double>(n);
  std::vector<double> strength(n);
  for (std::size_t v = 0; v < n; ++v) strength[v] = g.strength(v);

  std::vector<double> x(n, 1.0 / nn), next(n);
  for (int iter = 0; iter < cfg.pagerank_max_iter; ++iter) {
    double dangling = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (strength[v] <= 0.0) dangling += x[v];
    }
    const double base = (1.0 - d) / nn + d * dangling / nn;
    for (std::size_t v = 0; v < n; ++v) {
      double acc = 0.0;
      for (const auto& nb : g.adjacency[v]) acc += x[nb.index] * nb.weight / strength[nb.index];
      next[v] = base + d * acc;
    }
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) change += std::abs(next[v] - x[v]);
    x.swap(next);
    if (change < cfg.pagerank_tol) {
      double sum = 0.0;
      for (double a : x) sum += a;
      for (auto& a : x) a /= sum;
      return x;
    }
  }
  throw ConvergenceError("pagerank did not converge");
}

const std::vector<double>& CentralityTable::column(std::size_t measure) const {
  switch (measure) {
    case 0: return degree;
    case 1: return closeness;
    case 2: return betweenness;
    case 3: return eigenvector;
    case 4: return pagerank;
  }
  throw ValidationError("centrality measure index out of range");
}

std::vector<double>& CentralityTable::column(std::size_t measure) {
  return const_cast<std::vector<double>&>(std::as_const(*this).column(measure));
}

CentralityTable centrality_table(const DeveloperNetwork& net, const CentralityConfig& cfg) {
  cfg.validate();
  const auto g = WeightedGraph::from_network(net);
  CentralityTable t;
  t.contributors = g.names;
  t.config = cfg;
  t.degree = degree_centrality(g, cfg);
  t.closeness = closeness_centrality(g, cfg);
  t.betweenness = betweenness_centrality(g, cfg);
  t.eigenvector = eigenvector_centrality(g, cfg);
  t.pagerank = pagerank(g, cfg);
  return t;
}

std::string write_centrality_csv(const CentralityTable& table) {
  std::string out = "contributor,degree,closeness,betweenness,eigenvector,pagerank\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    csv::Row row{table.contributors[i]};
    for (std::size_t m = 0; m < kMeasureNames.size(); ++m) row.push_back(csv::format_double(table.column(m)[i]));
    out += csv::join(row);
    out.push_back('\n');
  }
  return out;
}

CentralityTable read_centrality_csv(std::string_view text) {
  auto rows = csv::parse(text);
  const csv::Row header{"contributor", "degree", "closeness", "betweenness", "eigenvector", "pagerank"};
  if (rows.empty() || rows.front() != header) {
    throw ValidationError("centrality csv must start with header '" + csv::join(header) + "'");
  }
  CentralityTable t;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != header.size()) {
      throw ValidationError("centrality csv row " + std::to_string(i + 1) + " has " + std::to_string(r.size()) +
                            " fields");
    }
    t.contributors.push_back(r[0]);
    for (std::size_t m = 0; m < kMeasureNames.size(); ++m) t.column(m).push_back(csv::parse_double(r[m + 1]));
  }
  if (!std::is_sorted(t.contributors.begin(), t.contributors.end())) {
    throw ValidationError("centrality csv rows must be sorted by contributor");
  }
  return t;
}

}  // namespace repnet
