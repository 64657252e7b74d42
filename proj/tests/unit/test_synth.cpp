#include <doctest.h>

#include "repnet/error.hpp"
#include "repnet/graphstats.hpp"
#include "repnet/synth.hpp"

using namespace repnet;

TEST_SUITE("synth") {
  TEST_CASE("ring lattice") {
    const auto net = generate_network({20, 4, 0.0, 5, 1});
    CHECK(net.vertex_count() == 20);
    CHECK(net.edge_count() == 40);
    CHECK(structural_summary(net).avg_clustering == 0.5);
    CHECK(*net.vertices().begin() == "dev000");
    for (const auto& [_, w] : net.edges()) {
      CHECK(w.total() >= 1);
      CHECK(w.total() <= 5);
    }
  }

  TEST_CASE("generation is deterministic") {
    CHECK(generate_network({100, 6, 0.2, 5, 9}) == generate_network({100, 6, 0.2, 5, 9}));
    CHECK(!(generate_network({100, 6, 0.2, 5, 9}) == generate_network({100, 6, 0.2, 5, 10})));
  }

  TEST_CASE("rewiring lowers clustering") {
    const auto small_world = structural_summary(generate_network({200, 6, 0.1, 5, 3}));
    const auto random = structural_summary(generate_network({200, 6, 1.0, 5, 3}));
    CHECK(small_world.avg_clustering > random.avg_clustering);
    CHECK(generate_network({200, 6, 1.0, 5, 3}).edge_count() == 600);
  }

  TEST_CASE("invalid specs") {
    CHECK_THROWS_AS(generate_network({10, 3, 0.1, 5, 1}), ValidationError);
    CHECK_THROWS_AS(generate_network({6, 6, 0.1, 5, 1}), ValidationError);
    CHECK_THROWS_AS(generate_network({10, 4, 1.5, 5, 1}), ValidationError);
    CHECK_THROWS_AS(generate_network({10, 4, 0.5, 0, 1}), ValidationError);
  }

  TEST_CASE("noiseless responses equal the linear predictor") {
    const auto net = generate_network({50, 4, 0.2, 5, 2});
    const auto table = centrality_table(net);
    SynthResponseSpec spec;
    spec.sigma_alpha = 0.0;
    spec.sigma_eps = 0.0;
    spec.true_beta = {1.0, -0.5, 0.25};
    spec.measures = {"closeness", "pagerank"};
    const auto f = synth_responses(net, table, spec);
    CHECK(f.rows() == 250);
    const Eigen::VectorXd fitted = f.x * Eigen::Vector3d(1.0, -0.5, 0.25);
    CHECK((f.y - fitted).cwiseAbs().maxCoeff() < 1e-9);
    CHECK_NOTHROW(f.validate());
  }

  TEST_CASE("responses are deterministic and clamped") {
    const auto net = generate_network({60, 4, 0.2, 5, 2});
    const auto table = centrality_table(net);
    SynthResponseSpec spec;
    spec.rounding = ResponseRounding::Clamped1To4;
    spec.true_beta = {2.5, 1.0};
    spec.sigma_eps = 1.5;
    spec.seed = 4;
    const auto a = synth_responses(net, table, spec);
    const auto b = synth_responses(net, table, spec);
    CHECK(a.y == b.y);
    CHECK(a.x == b.x);
    for (Eigen::Index i = 0; i < a.y.size(); ++i) {
      CHECK(a.y(i) == std::round(a.y(i)));
      CHECK(a.y(i) >= 1);
      CHECK(a.y(i) <= 4);
    }
    const auto records = frame_to_responses(a);
    CHECK(records.front().respondent == "sim00001");
    CHECK(records.size() == a.rows());
  }

  TEST_CASE("coefficients are recovered") {
    const auto net = generate_network({200, 6, 0.1, 5, 42});
    const auto table = centrality_table(net);
    SynthResponseSpec spec;
    spec.seed = 42;
    const auto f = synth_responses(net, table, spec);
    const auto fit = fit_random_intercept(f);
    CHECK(std::abs(fit.beta(0) - 1.0) <= 3 * fit.se(0));
    CHECK(std::abs(fit.beta(1) + 0.5) <= 3 * fit.se(1));
  }

  TEST_CASE("response spec validation") {
    const auto net = generate_network({20, 4, 0.2, 5, 2});
    const auto table = centrality_table(net);
    SynthResponseSpec spec;
    spec.true_beta = {1.0};
    CHECK_THROWS_AS(synth_responses(net, table, spec), ValidationError);
    spec = {};
    spec.measures = {"eccentricity"};
    CHECK_THROWS_AS(synth_responses(net, table, spec), ValidationError);
    spec = {};
    CHECK_THROWS_AS(frame_to_responses(synth_responses(net, table, spec)), ValidationError);
  }
}
