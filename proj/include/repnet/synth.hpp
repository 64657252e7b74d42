#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repnet/centrality.hpp"
#include "repnet/lmm.hpp"
#include "repnet/network.hpp"

namespace repnet {

struct SynthNetworkSpec {
  std::size_t n = 200;
  std::size_t k = 6;  // even ring-lattice degree, k < n
  double p_rewire = 0.1;
  std::int64_t weight_max = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Watts-Strogatz small world: ring lattice, each lattice edge rewired with
/// probability p_rewire to a uniformly chosen non-neighbour, integer edge
/// totals uniform in 1..weight_max. Vertices are "dev000", "dev001", ...
/// so lexicographic order matches lattice order.
DeveloperNetwork generate_network(const SynthNetworkSpec& spec);

enum class ResponseRounding { Continuous, Clamped1To4 };

struct SynthResponseSpec {
  /// Intercept first, then one coefficient per entry of `measures`.
  std::vector<double> true_beta{1.0, -0.5};
  std::vector<std::string> measures{"closeness"};
  double sigma_alpha = 0.5;
  double sigma_eps = 1.0;
  std::size_t responses_per_contributor = 5;
  ResponseRounding rounding = ResponseRounding::Continuous;
  std::uint64_t seed = 0;

  void validate() const;
};

/// y = X beta_true + u_contributor + e with X the min-max normalized
/// measures of each contributor in `table`. `net` must hold every
/// contributor of the table.
ModelFrame synth_responses(const DeveloperNetwork& net, const CentralityTable& table, const SynthResponseSpec& spec);

/// Response records for a clamped frame; respondent ids are "sim00001", ...
std::vector<ResponseRecord> frame_to_responses(const ModelFrame& frame);

}  // namespace repnet
