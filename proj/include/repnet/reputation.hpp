#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "repnet/centrality.hpp"
#include "repnet/network.hpp"

namespace repnet {

/// (x - min) / (max - min); a constant input maps to all zeros.
std::vector<double> minmax_normalize(std::span<const double> values);
std::map<std::string, double> minmax_normalize(const std::map<std::string, double>& values);

enum class AggregateMode {
  MinMaxOfSum,  ///< min-max normalize the sum of normalized measures
  Mean,         ///< sum of normalized measures divided by five
};

struct ReputationScore {
  std::string contributor;
  std::array<double, 5> normalized{};  // kMeasureNames order
  double aggregate = 0.0;
  bool badge = false;
};

std::vector<ReputationScore> aggregate_score(const CentralityTable& table,
                                             AggregateMode mode = AggregateMode::MinMaxOfSum);

struct BadgePolicy {
  enum class Mode { Quantile, Absolute };

  Mode mode = Mode::Quantile;
  double quantile = 0.9;
  double absolute_threshold = 1.0;

  static BadgePolicy at_quantile(double q) { return {Mode::Quantile, q, 1.0}; }
  static BadgePolicy at_threshold(double t) { return {Mode::Absolute, 0.9, t}; }

  void validate() const;
};

/// Linear-interpolation empirical quantile (type 7) of a non-empty sample.
double empirical_quantile(std::span<const double> values, double q);

std::vector<ReputationScore> assign_badges(std::vector<ReputationScore> scores, const BadgePolicy& policy);

inline constexpr std::size_t kMinCollaborators = 5;

/// Contributors with at least `min_collaborators` distinct neighbours, sorted.
std::vector<std::string> eligible_respondents(const DeveloperNetwork& net,
                                              std::size_t min_collaborators = kMinCollaborators);

enum class Stratum { Top, Rest };
std::string_view to_string(Stratum s);

struct SamplePick {
  std::string contributor;
  Stratum stratum = Stratum::Top;

  bool operator==(const SamplePick&) const = default;
};

struct SamplePlan {
  std::string respondent;
  std::vector<SamplePick> direct;  // neighbours of the respondent
  std::vector<SamplePick> others;  // non-neighbours

  bool operator==(const SamplePlan&) const = default;
};

inline constexpr std::size_t kTopStratumSize = 50;

/// Draws 3 contributors from the top-ranked stratum and 2 from the rest, for
/// both the respondent's direct collaborators and everyone else. Strata are
/// ranked by aggregate descending with ties broken by login. A short rest
/// stratum is backfilled from the top stratum (labelled Top).
SamplePlan stratified_sample(const DeveloperNetwork& net, const std::vector<ReputationScore>& scores,
                             const std::string& respondent, std::uint64_t seed,
                             std::size_t top_size = kTopStratumSize);

std::string sample_plan_json(const SamplePlan& plan);

/// `contributor,deg_n,clo_n,bet_n,eig_n,pr_n,aggregate,badge`.
std::string write_scores_csv(const std::vector<ReputationScore>& scores);
std::vector<ReputationScore> read_scores_csv(std::string_view text);

}  // namespace repnet
