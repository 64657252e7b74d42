// Independent reference implementations used to cross-check the library.
// They favour directness over speed and share no code with src/.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "repnet/network.hpp"

namespace oracle {

// Dense symmetric weight matrix; 0 means no edge.
using Weights = Eigen::MatrixXd;

struct RandomGraph {
  repnet::DeveloperNetwork net;
  Weights w;  // indexed in lexicographic name order, which matches WeightedGraph
};

// Random connected graph: random spanning tree plus extra edges, weights 1..wmax.
inline RandomGraph random_connected_graph(std::mt19937_64& rng, std::size_t n, int wmax = 5, double extra = 0.35) {
  RandomGraph g;
  g.w = Weights::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::uniform_int_distribution<int> weight(1, wmax);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto name = [](std::size_t i) { return "v" + std::to_string(i); };
  auto link = [&](std::size_t a, std::size_t b) {
    const int x = weight(rng);
    g.w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = x;
    g.w(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = x;
    g.net.add_collaboration(name(a), name(b), x, 0);
  };
  for (std::size_t i = 0; i < n; ++i) g.net.add_vertex(name(i));
  for (std::size_t i = 1; i < n; ++i) link(i, std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (g.w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) == 0 && coin(rng) < extra) link(a, b);
    }
  }
  return g;
}

// Every simple path from s to t with its length under `dist`.
struct PathSet {
  double shortest = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, std::vector<std::size_t>>> paths;
};

inline PathSet all_simple_paths(const Weights& w, std::size_t s, std::size_t t,
                                const std::function<double(double)>& dist) {
  const auto n = static_cast<std::size_t>(w.rows());
  PathSet out;
  std::vector<std::size_t> path{s};
  std::vector<bool> on(n, false);
  on[s] = true;
  std::function<void(std::size_t, double)> dfs = [&](std::size_t v, double len) {
    if (v == t) {
      out.paths.emplace_back(len, path);
      out.shortest = std::min(out.shortest, len);
      return;
    }
    for (std::size_t u = 0; u < n; ++u) {
      const double x = w(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(u));
      if (x == 0 || on[u]) continue;
      on[u] = true;
      path.push_back(u);
      dfs(u, len + dist(x));
      path.pop_back();
      on[u] = false;
    }
  };
  dfs(s, 0.0);
  return out;
}

inline std::function<double(double)> inverse_distance() {
  return [](double x) { return 1.0 / x; };
}
inline std::function<double(double)> raw_distance() {
  return [](double x) { return x; };
}

inline bool same_length(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(a, b); }

inline std::vector<double> degree(const Weights& w) {
  const auto n = w.rows();
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = double((w.row(i).array() > 0).count()) / double(n - 1);
  return out;
}

inline std::vector<double> closeness(const Weights& w, const std::function<double(double)>& dist) {
  const auto n = static_cast<std::size_t>(w.rows());
  std::vector<double> out(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    double total = 0;
    double reach = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (u == v) continue;
      const auto ps = all_simple_paths(w, v, u, dist);
      if (ps.paths.empty()) continue;
      total += ps.shortest;
      reach += 1;
    }
    if (reach > 0) out[v] = (reach / double(n - 1)) * (reach / total);
  }
  return out;
}

// Pair-dependency sum over unordered pairs, doubled and divided by (n-1)(n-2).
inline std::vector<double> betweenness(const Weights& w, const std::function<double(double)>& dist) {
  const auto n = static_cast<std::size_t>(w.rows());
  std::vector<double> out(n, 0.0);
  if (n < 3) return out;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      const auto ps = all_simple_paths(w, s, t, dist);
      std::vector<double> through(n, 0.0);
      double count = 0;
      for (const auto& [len, path] : ps.paths) {
        if (!same_length(len, ps.shortest)) continue;
        count += 1;
        for (std::size_t i = 1; i + 1 < path.size(); ++i) through[path[i]] += 1;
      }
      if (count == 0) continue;
      for (std::size_t v = 0; v < n; ++v) out[v] += through[v] / count;
    }
  }
  for (auto& x : out) x = 2.0 * x / (double(n - 1) * double(n - 2));
  return out;
}

// Perron vector of the weighted adjacency, unit Euclidean norm, non-negative.
inline std::vector<double> eigenvector(const Weights& w) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
  Eigen::VectorXd v = es.eigenvectors().col(w.rows() - 1);
  if (v.sum() < 0) v = -v;
  v /= v.norm();
  return {v.data(), v.data() + v.size()};
}

// Stationary vector of the damped walk; every vertex has an edge.
inline std::vector<double> pagerank(const Weights& w, double d) {
  const auto n = w.rows();
  Eigen::MatrixXd p = w;
  for (Eigen::Index i = 0; i < n; ++i) p.row(i) /= w.row(i).sum();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - d * p.transpose();
  Eigen::VectorXd b = Eigen::VectorXd::Constant(n, (1.0 - d) / double(n));
  Eigen::VectorXd x = a.fullPivLu().solve(b);
  return {x.data(), x.data() + x.size()};
}

// Normal-equations OLS.
inline Eigen::VectorXd ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return (x.transpose() * x).ldlt().solve(x.transpose() * y);
}

inline double rss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  return (y - x * ols(x, y)).squaredNorm();
}

// VIF of column j regressed on the rest plus an intercept.
inline double vif(const Eigen::MatrixXd& cols, Eigen::Index j) {
  const auto n = cols.rows();
  Eigen::MatrixXd design(n, cols.cols());
  design.col(0).setOnes();
  Eigen::Index k = 1;
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    if (c != j) design.col(k++) = cols.col(c);
  }
  const Eigen::VectorXd y = cols.col(j);
  const double tss = (y.array() - y.mean()).square().sum();
  const double r2 = 1.0 - rss(design, y) / tss;
  return 1.0 / (1.0 - r2);
}

// Dense-V restricted likelihood, offset by log det(X'X), at ratio theta.
inline double reml_criterion(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::vector<std::string>& g,
                             double theta) {
  const auto n = x.rows();
  const auto p = x.cols();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (g[static_cast<std::size_t>(i)] == g[static_cast<std::size_t>(j)]) v(i, j) += theta;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(v);
  const Eigen::MatrixXd vinv_x = llt.solve(x);
  const Eigen::MatrixXd xtvx = x.transpose() * vinv_x;
  const Eigen::VectorXd beta = xtvx.ldlt().solve(vinv_x.transpose() * y);
  const Eigen::VectorXd r = y - x * beta;
  const double s2 = r.dot(llt.solve(r)) / double(n - p);
  const double logdet_v = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double logdet_xtvx = std::log(xtvx.determinant());
  const double logdet_xtx = std::log((x.transpose() * x).determinant());
  return double(n - p) * (1.0 + std::log(2.0 * M_PI * s2)) + logdet_v + logdet_xtvx - logdet_xtx;
}

// Balanced one-way ANOVA estimates (method of moments).
struct Moments {
  double sigma_eps2;
  double sigma_alpha2;
  double grand_mean;
};

inline Moments one_way_moments(const std::vector<std::vector<double>>& groups) {
  const double a = double(groups.size());
  const double m = double(groups.front().size());
  double grand = 0;
  for (const auto& gr : groups) for (double v : gr) grand += v;
  grand /= a * m;
  double ssw = 0, ssb = 0;
  for (const auto& gr : groups) {
    double mean = 0;
    for (double v : gr) mean += v;
    mean /= m;
    for (double v : gr) ssw += (v - mean) * (v - mean);
    ssb += m * (mean - grand) * (mean - grand);
  }
  const double msw = ssw / (a * (m - 1));
  const double msb = ssb / (a - 1);
  return {msw, (msb - msw) / m, grand};
}

// Krippendorff's nominal alpha by direct pair enumeration within units.
inline double alpha_pairs(const std::vector<std::vector<std::string>>& units) {
  double n = 0, disagree = 0;
  std::map<std::string, double> totals;
  for (const auto& u : units) {
    if (u.size() < 2) continue;
    const double m = double(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      totals[u[i]] += 1;
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (i != j && u[i] != u[j]) disagree += 1.0 / (m - 1);
      }
    }
    n += m;
  }
  double expected = 0;
  for (const auto& [a, na] : totals) {
    for (const auto& [b, nb] : totals) {
      if (a != b) expected += na * nb;
    }
  }
  const double d_o = disagree / n;
  const double d_e = expected / (n * (n - 1));
  return 1.0 - d_o / d_e;
}

}  // namespace oracle
