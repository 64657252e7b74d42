#include "repnet/reputation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "repnet/csv.hpp"
#include "repnet/error.hpp"

namespace repnet {

std::vector<double> minmax_normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo, range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - min) / range;
  return out;
}

std::map<std::string, double> minmax_normalize(const std::map<std::string, double>& values) {
  std::vector<double> raw;
  raw.reserve(values.size());
  for (const auto& [_, v] : values) raw.push_back(v);
  const auto norm = minmax_normalize(raw);
  std::map<std::string, double> out;
  std::size_t i = 0;
  for (const auto& [k, _] : values) out.emplace(k, norm[i++]);
  return out;
}

std::vector<ReputationScore> aggregate_score(const CentralityTable& table, AggregateMode mode) {
  if (table.size() == 0) throw ValidationError("cannot score an empty centrality table");
  std::vector<ReputationScore> scores(table.size());
  std::vector<double> sums(table.size(), 0.0);
  for (std::size_t m = 0; m < kMeasureNames.size(); ++m) {
    if (table.column(m).size() != table.size()) throw ValidationError("centrality table columns are ragged");
    const auto norm = minmax_normalize(table.column(m));
    for (std::size_t i = 0; i < table.size(); ++i) {
      scores[i].normalized[m] = norm[i];
      sums[i] += norm[i];
    }
  }
  const auto agg = mode == AggregateMode::MinMaxOfSum ? minmax_normalize(sums) : std::vector<double>{};
  for (std::size_t i = 0; i < table.size(); ++i) {
    scores[i].contributor = table.contributors[i];
    scores[i].aggregate = mode == AggregateMode::MinMaxOfSum ? agg[i] : sums[i] / 5.0;
  }
  return scores;
}

void BadgePolicy::validate() const {
  if (mode == Mode::Quantile && !(quantile > 0.0 && quantile < 1.0)) {
    throw ValidationError("badge quantile must lie in (0, 1)");
  }
  if (mode == Mode::Absolute && !std::isfinite(absolute_threshold)) {
    throw ValidationError("badge threshold must be finite");
  }
}

double empirical_quantile(std::span<const double> values, double q) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<ReputationScore> assign_badges(std::vector<ReputationScore> scores, const BadgePolicy& policy) {
  policy.validate();
  if (scores.empty()) throw ValidationError("cannot assign badges to an empty score set");
  double threshold = policy.absolute_threshold;
  if (policy.mode == BadgePolicy::Mode::Quantile) {
    std::vector<double> agg;
    agg.reserve(scores.size());
    for (const auto& s : scores) agg.push_back(s.aggregate);
    threshold = empirical_quantile(agg, policy.quantile);
  }
  for (auto& s : scores) s.badge = s.aggregate >= threshold;
  return scores;
}

std::vector<std::string> eligible_respondents(const DeveloperNetwork& net, std::size_t min_collaborators) {
  std::map<std::string, std::size_t> degree;
  for (const auto& [pair, _] : net.edges()) {
    ++degree[pair.first];
    ++degree[pair.second];
  }
  std::vector<std::string> out;
  for (const auto& [login, d] : degree) {
    if (d >= min_collaborators) out.push_back(login);
  }
  return out;
}

std::string_view to_string(Stratum s) { return s == Stratum::Top ? "top" : "rest"; }

namespace {

// Removes and returns `count` uniformly chosen entries of `pool`.
std::vector<std::string> draw(std::vector<std::string>& pool, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::string> picked;
  for (std::size_t i = 0; i < count && !pool.empty(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const auto j = pick(rng);
    picked.push_back(std::move(pool[j]));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
  }
  return picked;
}

std::vector<SamplePick> sample_group(std::vector<std::string> group,
                                     const std::unordered_map<std::string, double>& aggregate,
                                     std::size_t top_size, std::mt19937_64& rng) {
  std::sort(group.begin(), group.end(), [&](const std::string& a, const std::string& b) {
    const double sa = aggregate.at(a), sb = aggregate.at(b);
    return sa != sb ? sa > sb : a < b;
  });
  const auto split = std::min(top_size, group.size());
  std::vector<std::string> top(group.begin(), group.begin() + static_cast<std::ptrdiff_t>(split));
  std::vector<std::string> rest(group.begin() + static_cast<std::ptrdiff_t>(split), group.end());

  std::vector<SamplePick> picks;
  for (auto& c : draw(top, 3, rng)) picks.push_back({std::move(c), Stratum::Top});
  for (auto& c : draw(rest, 2, rng)) picks.push_back({std::move(c), Stratum::Rest});
  for (auto& c : draw(top, 5 - picks.size(), rng)) picks.push_back({std::move(c), Stratum::Top});
  return picks;
}

}  // namespace

SamplePlan stratified_sample(const DeveloperNetwork& net, const std::vector<ReputationScore>& scores,
                             const std::string& respondent, std::uint64_t seed, std::size_t top_size) {
  if (!net.contains(respondent)) throw SamplingError("respondent '" + respondent + "' is not in the network");
  if (top_size < 3) throw ValidationError("top stratum must hold at least three contributors");
  std::unordered_map<std::string, double> aggregate;
  for (const auto& s : scores) aggregate[s.contributor] = s.aggregate;
  for (const auto& v : net.vertices()) {
    if (!aggregate.count(v)) throw SamplingError("contributor '" + v + "' has no reputation score");
  }

  std::set<std::string> neighbours;
  for (const auto& [pair, _] : net.edges()) {
    if (pair.first == respondent) neighbours.insert(pair.second);
    if (pair.second == respondent) neighbours.insert(pair.first);
  }
  std::vector<std::string> direct(neighbours.begin(), neighbours.end());
  std::vector<std::string> others;
  for (const auto& v : net.vertices()) {
    if (v != respondent && !neighbours.count(v)) others.push_back(v);
  }
  if (direct.size() < 5) {
    throw SamplingError("direct-collaborator group of '" + respondent + "' has " + std::to_string(direct.size()) +
                        " members; 5 are required");
  }
  if (others.size() < 5) {
    throw SamplingError("non-collaborator group of '" + respondent + "' has " + std::to_string(others.size()) +
                        " members; 5 are required");
  }

  std::mt19937_64 rng(seed);
  SamplePlan plan;
  plan.respondent = respondent;
  plan.direct = sample_group(std::move(direct), aggregate, top_size, rng);
  plan.others = sample_group(std::move(others), aggregate, top_size, rng);
  return plan;
}

std::string sample_plan_json(const SamplePlan& plan) {
  auto picks = [](const std::vector<SamplePick>& group) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : group) {
      arr.push_back({{"contributor", p.contributor}, {"stratum", std::string(to_string(p.stratum))}});
    }
    return arr;
  };
  nlohmann::ordered_json j;
  j["respondent"] = plan.respondent;
  j["direct"] = picks(plan.direct);
  j["others"] = picks(plan.others);
  return j.dump(2) + "\n";
}

std::string write_scores_csv(const std::vector<ReputationScore>& scores) {
  std::string out = "contributor,deg_n,clo_n,bet_n,eig_n,pr_n,aggregate,badge\n";
  for (const auto& s : scores) {
    csv::Row row{s.contributor};
    for (double v : s.normalized) row.push_back(csv::format_double(v));
    row.push_back(csv::format_double(s.aggregate));
    row.push_back(s.badge ? "1" : "0");
    out += csv::join(row);
    out.push_back('\n');
  }
  return out;
}

std::vector<ReputationScore> read_scores_csv(std::string_view text) {
  const csv::Row header{"contributor", "deg_n", "clo_n", "bet_n", "eig_n", "pr_n", "aggregate", "badge"};
  auto rows = csv::parse(text);
  if (rows.empty() || rows.front() != header) {
    throw ValidationError("scores csv must start with header '" + csv::join(header) + "'");
  }
  std::vector<ReputationScore> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != header.size()) {
      throw ValidationError("scores csv row " + std::to_string(i + 1) + " has " + std::to_string(r.size()) +
                            " fields");
    }
    ReputationScore s;
    s.contributor = r[0];
    for (std::size_t m = 0; m < 5; ++m) s.normalized[m] = csv::parse_double(r[m + 1]);
    s.aggregate = csv::parse_double(r[6]);
    if (r[7] != "0" && r[7] != "1") throw ValidationError("scores csv badge must be 0 or 1");
    s.badge = r[7] == "1";
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace repnet
