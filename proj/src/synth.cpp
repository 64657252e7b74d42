#include "repnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "repnet/error.hpp"
#include "repnet/reputation.hpp"

namespace repnet {

void SynthNetworkSpec::validate() const {
  if (k == 0 || k % 2 != 0) throw ValidationError("lattice degree k must be even and positive");
  if (k >= n) throw ValidationError("lattice degree k must be smaller than n");
  if (!(p_rewire >= 0.0 && p_rewire <= 1.0)) throw ValidationError("rewiring probability must lie in [0, 1]");
  if (weight_max < 1) throw ValidationError("weight_max must be at least 1");
}

DeveloperNetwork generate_network(const SynthNetworkSpec& spec) {
  spec.validate();
  const int width = std::max(3, static_cast<int>(std::to_string(spec.n - 1).size()));
  std::vector<std::string> names(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    auto digits = std::to_string(i);
    names[i] = "dev" + std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(width, digits.size()), '0') + digits;
  }

  std::vector<std::set<std::size_t>> adj(spec.n);
  auto link = [&](std::size_t a, std::size_t b) {
    adj[a].insert(b);
    adj[b].insert(a);
  };
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 1; j <= spec.k / 2; ++j) link(i, (i + j) % spec.n);
  }

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> any_vertex(0, spec.n - 1);
  for (std::size_t j = 1; j <= spec.k / 2; ++j) {
    for (std::size_t i = 0; i < spec.n; ++i) {
      const std::size_t t = (i + j) % spec.n;
      if (coin(rng) >= spec.p_rewire || !adj[i].count(t)) continue;
      if (adj[i].size() + 1 >= spec.n) continue;  // nowhere to go
      std::size_t target;
      do {
        target = any_vertex(rng);
      } while (target == i || adj[i].count(target));
      adj[i].erase(t);
      adj[t].erase(i);
      link(i, target);
    }
  }

  DeveloperNetwork net;
  for (const auto& name : names) net.add_vertex(name);
  std::uniform_int_distribution<std::int64_t> weight(1, spec.weight_max);
  for (std::size_t a = 0; a < spec.n; ++a) {
    for (auto b : adj[a]) {
      if (b < a) continue;
      const auto total = weight(rng);
      std::uniform_int_distribution<std::int64_t> split(0, total);
      const auto coedit = split(rng);
      net.add_collaboration(names[a], names[b], coedit, total - coedit);
    }
  }
  return net;
}

void SynthResponseSpec::validate() const {
  if (true_beta.size() != measures.size() + 1) {
    throw ValidationError("true_beta needs an intercept plus one coefficient per measure");
  }
  if (!(sigma_alpha >= 0.0) || !(sigma_eps >= 0.0)) throw ValidationError("standard deviations must be >= 0");
  if (responses_per_contributor < 1) throw ValidationError("need at least one response per contributor");
}

ModelFrame synth_responses(const DeveloperNetwork& net, const CentralityTable& table, const SynthResponseSpec& spec) {
  spec.validate();
  for (const auto& c : table.contributors) {
    if (!net.contains(c)) throw ValidationError("contributor '" + c + "' is not in the network");
  }
  const auto scores = aggregate_score(table);

  std::vector<std::size_t> measure_index;
  for (const auto& m : spec.measures) {
    auto it = std::find(kMeasureNames.begin(), kMeasureNames.end(), m);
    if (it == kMeasureNames.end()) throw ValidationError("unknown centrality measure '" + m + "'");
    measure_index.push_back(static_cast<std::size_t>(it - kMeasureNames.begin()));
  }

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  const std::size_t per = spec.responses_per_contributor;
  const auto rows = static_cast<Eigen::Index>(scores.size() * per);
  const auto p = static_cast<Eigen::Index>(spec.true_beta.size());

  ModelFrame f;
  f.y.resize(rows);
  f.x.resize(rows, p);
  f.columns.emplace_back(kInterceptName);
  f.columns.insert(f.columns.end(), spec.measures.begin(), spec.measures.end());
  Eigen::Index row = 0;
  for (const auto& s : scores) {
    const double u = spec.sigma_alpha * unit(rng);
    for (std::size_t r = 0; r < per; ++r, ++row) {
      f.x(row, 0) = 1.0;
      double mean = spec.true_beta[0];
      for (std::size_t m = 0; m < measure_index.size(); ++m) {
        const double v = s.normalized[measure_index[m]];
        f.x(row, static_cast<Eigen::Index>(m + 1)) = v;
        mean += spec.true_beta[m + 1] * v;
      }
      double y = mean + u + spec.sigma_eps * unit(rng);
      if (spec.rounding == ResponseRounding::Clamped1To4) y = std::clamp(std::round(y), 1.0, 4.0);
      f.y(row) = y;
      f.groups.push_back(s.contributor);
    }
  }
  return f;
}

std::vector<ResponseRecord> frame_to_responses(const ModelFrame& frame) {
  std::vector<ResponseRecord> out;
  out.reserve(frame.rows());
  for (std::size_t i = 0; i < frame.rows(); ++i) {
    const double y = frame.y(static_cast<Eigen::Index>(i));
    if (y != std::round(y) || y < 1.0 || y > 4.0) {
      throw ValidationError("response levels must be integers in 1..4; use clamped rounding");
    }
    char id[32];
    std::snprintf(id, sizeof id, "sim%05zu", i + 1);
    out.push_back({id, frame.groups[i], static_cast<int>(y)});
  }
  return out;
}

}  // namespace repnet
