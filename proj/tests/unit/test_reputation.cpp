#include <doctest.h>

#include <set>

#include "repnet/error.hpp"
#include "repnet/graph.hpp"
#include "repnet/reputation.hpp"
#include "repnet/synth.hpp"

using namespace repnet;

namespace {

CentralityTable table_of(std::vector<std::string> names, std::vector<std::array<double, 5>> rows) {
  CentralityTable t;
  t.contributors = std::move(names);
  for (const auto& r : rows) {
    for (std::size_t m = 0; m < 5; ++m) t.column(m).push_back(r[m]);
  }
  return t;
}

std::vector<ReputationScore> scores_with(const std::vector<double>& aggregates) {
  std::vector<ReputationScore> out;
  for (std::size_t i = 0; i < aggregates.size(); ++i) {
    ReputationScore s;
    s.contributor = "c" + std::to_string(10 + i);
    s.aggregate = aggregates[i];
    out.push_back(s);
  }
  return out;
}

void check_plan(const DeveloperNetwork& net, const SamplePlan& plan) {
  const auto g = WeightedGraph::from_network(net);
  std::set<std::string> neighbours;
  for (const auto& [pair, _] : net.edges()) {
    if (pair.first == plan.respondent) neighbours.insert(pair.second);
    if (pair.second == plan.respondent) neighbours.insert(pair.first);
  }
  std::set<std::string> ids;
  REQUIRE(plan.direct.size() == 5);
  REQUIRE(plan.others.size() == 5);
  for (const auto& p : plan.direct) {
    CHECK(neighbours.count(p.contributor) == 1);
    ids.insert(p.contributor);
  }
  for (const auto& p : plan.others) {
    CHECK(neighbours.count(p.contributor) == 0);
    ids.insert(p.contributor);
  }
  CHECK(ids.size() == 10);
  CHECK(ids.count(plan.respondent) == 0);
}

}  // namespace

TEST_SUITE("reputation") {
  TEST_CASE("min-max normalization") {
    CHECK(minmax_normalize(std::map<std::string, double>{{"a", 2}, {"b", 4}, {"c", 6}}) ==
          std::map<std::string, double>{{"a", 0}, {"b", 0.5}, {"c", 1}});
    CHECK(minmax_normalize(std::map<std::string, double>{{"a", 7}, {"b", 7}}) ==
          std::map<std::string, double>{{"a", 0}, {"b", 0}});
    const std::vector<double> x{0.3, 1.7, -2.0, 5.5};
    std::vector<double> y;
    for (double v : x) y.push_back(3 * v + 1);
    const auto a = minmax_normalize(x);
    const auto b = minmax_normalize(y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-15));
  }

  TEST_CASE("aggregate scores") {
    auto t = table_of({"a", "b", "c", "d"}, {{1, 9, 0.5, 0.9, 0.4}, {0, 1, 0.1, 0.2, 0.1}, {0.5, 5, 0.3, 0.5, 0.25},
                                             {0.5, 5, 0.3, 0.5, 0.25}});
    auto s = aggregate_score(t);
    CHECK(s[0].aggregate == 1.0);
    CHECK(s[1].aggregate == 0.0);
    CHECK(s[2].aggregate == s[3].aggregate);
    // hand computation: normalized c = (0.5, 0.5, 0.5, 0.4286, 0.5) summed / 5 since a sums to 5
    CHECK(s[2].aggregate == doctest::Approx((0.5 + 0.5 + 0.5 + 3.0 / 7 + 0.5) / 5).epsilon(1e-12));
    auto mean = aggregate_score(t, AggregateMode::Mean);
    CHECK(mean[0].aggregate == 1.0);
    CHECK(mean[2].aggregate == doctest::Approx(s[2].aggregate).epsilon(1e-12));
    CHECK_THROWS_AS(aggregate_score(CentralityTable{}), ValidationError);
  }

  TEST_CASE("path of four by hand") {
    // a-b-c-d unit weights
    DeveloperNetwork net;
    net.add_collaboration("a", "b", 1, 0);
    net.add_collaboration("b", "c", 1, 0);
    net.add_collaboration("c", "d", 1, 0);
    auto s = aggregate_score(centrality_table(net));
    // ends: degree 1/3, closeness 3/6, betweenness 0 -> all minimal except eigen and pagerank which are also minimal
    CHECK(s[0].aggregate == 0.0);
    CHECK(s[3].aggregate == 0.0);
    CHECK(s[1].aggregate == 1.0);
    CHECK(s[2].aggregate == 1.0);
  }

  TEST_CASE("quantile badges") {
    auto s = assign_badges(scores_with({0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 1.0}), BadgePolicy{});
    int n = 0;
    for (const auto& r : s) n += r.badge;
    CHECK(n == 1);
    CHECK(s.back().badge);
    CHECK(empirical_quantile(std::vector<double>{1, 2, 3, 4}, 0.5) == 2.5);
    CHECK_THROWS_AS(BadgePolicy::at_quantile(1.0).validate(), ValidationError);
  }

  TEST_CASE("absolute badges") {
    auto s = scores_with({0, 0.25, 0.5, 1.0});
    for (const auto& r : assign_badges(s, BadgePolicy::at_threshold(0.0))) CHECK(r.badge);
    for (const auto& r : assign_badges(s, BadgePolicy::at_threshold(1.000001))) CHECK(!r.badge);
    // lowering the threshold never removes a badge
    auto high = assign_badges(s, BadgePolicy::at_threshold(0.6));
    auto low = assign_badges(s, BadgePolicy::at_threshold(0.3));
    for (std::size_t i = 0; i < s.size(); ++i) CHECK((!high[i].badge || low[i].badge));
  }

  TEST_CASE("eligibility") {
    DeveloperNetwork net;
    for (int i = 0; i < 5; ++i) net.add_collaboration("hub", "n" + std::to_string(i), 1, 0);
    for (int i = 0; i < 4; ++i) net.add_collaboration("mid", "n" + std::to_string(i), 1, 0);
    auto e = eligible_respondents(net);
    CHECK(e == std::vector<std::string>{"hub"});
  }

  TEST_CASE("exactly five neighbours are all selected") {
    auto net = generate_network({60, 4, 0.0, 3, 1});
    net.add_collaboration("dev000", "dev030", 1, 0);  // dev000 now has five neighbours
    const auto scores = aggregate_score(centrality_table(net));
    auto plan = stratified_sample(net, scores, "dev000", 3);
    check_plan(net, plan);
    std::set<std::string> picked;
    for (const auto& p : plan.direct) picked.insert(p.contributor);
    CHECK(picked == std::set<std::string>{"dev001", "dev002", "dev030", "dev058", "dev059"});
    int top = 0;
    for (const auto& p : plan.direct) top += p.stratum == Stratum::Top;
    CHECK(top == 5);  // the top stratum holds the whole group, so backfill comes from it
  }

  TEST_CASE("sampling rules") {
    auto net = generate_network({200, 6, 0.1, 5, 7});
    const auto scores = aggregate_score(centrality_table(net));
    const auto respondent = eligible_respondents(net).front();
    auto plan = stratified_sample(net, scores, respondent, 7);
    check_plan(net, plan);
    CHECK(stratified_sample(net, scores, respondent, 7) == plan);
    int top = 0, rest = 0;
    for (const auto& p : plan.others) (p.stratum == Stratum::Top ? top : rest)++;
    CHECK(top == 3);
    CHECK(rest == 2);
    CHECK_THROWS_AS(stratified_sample(net, scores, "nobody", 1), SamplingError);

    DeveloperNetwork small;
    for (int i = 0; i < 3; ++i) small.add_collaboration("r", "n" + std::to_string(i), 1, 0);
    const auto small_scores = aggregate_score(centrality_table(small));
    CHECK_THROWS_AS(stratified_sample(small, small_scores, "r", 1), SamplingError);
  }

  TEST_CASE("plan json") {
    auto net = generate_network({120, 6, 0.1, 5, 2});
    const auto scores = aggregate_score(centrality_table(net));
    auto json = sample_plan_json(stratified_sample(net, scores, "dev010", 1));
    CHECK(json.find("\"respondent\": \"dev010\"") != std::string::npos);
  }

  TEST_CASE("scores csv round trip") {
    auto net = generate_network({40, 4, 0.2, 5, 8});
    auto scores = assign_badges(aggregate_score(centrality_table(net)), BadgePolicy{});
    const auto text = write_scores_csv(scores);
    CHECK(text.rfind("contributor,deg_n,clo_n,bet_n,eig_n,pr_n,aggregate,badge\n", 0) == 0);
    const auto back = read_scores_csv(text);
    REQUIRE(back.size() == scores.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].aggregate == scores[i].aggregate);
      CHECK(back[i].badge == scores[i].badge);
      CHECK(back[i].normalized == scores[i].normalized);
    }
    CHECK_THROWS_AS(read_scores_csv("who,what\n"), ValidationError);
  }

  TEST_CASE("affine transforms of one measure leave scores unchanged") {
    auto t = centrality_table(generate_network({100, 6, 0.2, 5, 5}));
    const auto base = aggregate_score(t);
    for (std::size_t m = 0; m < 5; ++m) {
      auto u = t;
      for (auto& x : u.column(m)) x = 4.5 * x + 2.0;
      const auto s = aggregate_score(u);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s[i].aggregate - base[i].aggregate) <= 1e-12);
    }
  }
}
