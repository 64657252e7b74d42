#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "repnet/error.hpp"
#include "repnet/lmm.hpp"

using namespace repnet;

namespace {

ModelFrame intercept_only(const std::vector<std::vector<double>>& groups) {
  ModelFrame f;
  std::size_t n = 0;
  for (const auto& g : groups) n += g.size();
  f.y.resize(static_cast<Eigen::Index>(n));
  f.x = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n), 1);
  f.columns = {std::string(kInterceptName)};
  Eigen::Index row = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (double v : groups[g]) {
      f.y(row++) = v;
      f.groups.push_back("g" + std::to_string(g));
    }
  }
  return f;
}

// y = b0 + b1 x1 + b2 x2 + u + e with x uniform on [0, 1].
ModelFrame random_frame(std::uint64_t seed, std::size_t groups, std::size_t per, double sa, double se,
                        Eigen::Vector3d beta = {1.0, -0.5, 2.0}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0, 1);
  std::uniform_real_distribution<double> u(0, 1);
  ModelFrame f;
  const auto n = static_cast<Eigen::Index>(groups * per);
  f.x.resize(n, 3);
  f.y.resize(n);
  f.columns = {std::string(kInterceptName), "x1", "x2"};
  Eigen::Index row = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const double effect = sa * z(rng);
    for (std::size_t r = 0; r < per; ++r, ++row) {
      f.x(row, 0) = 1;
      f.x(row, 1) = u(rng);
      f.x(row, 2) = u(rng);
      f.y(row) = f.x.row(row).dot(beta) + effect + se * z(rng);
      f.groups.push_back("g" + std::to_string(g));
    }
  }
  return f;
}

}  // namespace

TEST_SUITE("lmm") {
  TEST_CASE("balanced one-way data match the method of moments") {
    const std::vector<std::vector<double>> data{{0, 2}, {4, 6}, {8, 10}};
    const auto fit = fit_random_intercept(intercept_only(data));
    const auto mom = oracle::one_way_moments(data);
    CHECK(mom.sigma_eps2 == 2.0);
    CHECK(mom.sigma_alpha2 == 15.0);
    CHECK(std::abs(fit.sigma_eps2 - mom.sigma_eps2) < 1e-6);
    CHECK(std::abs(fit.sigma_alpha2 - mom.sigma_alpha2) < 1e-6);
    CHECK(std::abs(fit.beta(0) - mom.grand_mean) < 1e-6);
    CHECK(!fit.boundary);
  }

  TEST_CASE("larger balanced designs match the method of moments") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z(0, 1);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::vector<double>> data(12, std::vector<double>(4));
      for (auto& g : data) {
        const double u = 2.0 * z(rng);
        for (auto& v : g) v = 3.0 + u + z(rng);
      }
      const auto mom = oracle::one_way_moments(data);
      if (mom.sigma_alpha2 <= 0) continue;
      const auto fit = fit_random_intercept(intercept_only(data));
      CHECK(fit.sigma_eps2 == doctest::Approx(mom.sigma_eps2).epsilon(1e-7));
      CHECK(fit.sigma_alpha2 == doctest::Approx(mom.sigma_alpha2).epsilon(1e-7));
    }
  }

  TEST_CASE("no between-group variation reduces to least squares") {
    // x repeats within every group and each group's residuals sum to zero
    ModelFrame f;
    const std::vector<std::vector<double>> noise{{0.3, -0.5, 0.2}, {-1.0, 0.4, 0.6}, {0.1, 0.1, -0.2}, {0.7, -0.9, 0.2}};
    f.x.resize(12, 2);
    f.y.resize(12);
    f.columns = {std::string(kInterceptName), "x"};
    for (Eigen::Index i = 0; i < 12; ++i) {
      const auto g = static_cast<std::size_t>(i / 3), k = static_cast<std::size_t>(i % 3);
      f.x(i, 0) = 1;
      f.x(i, 1) = double(k);
      f.y(i) = 1.0 + 2.0 * double(k) + noise[g][k];
      f.groups.push_back("g" + std::to_string(g));
    }
    const auto fit = fit_random_intercept(f);
    CHECK(fit.theta == 0.0);
    CHECK(fit.boundary);
    const auto ols = oracle::ols(f.x, f.y);
    CHECK(std::abs(fit.beta(0) - ols(0)) < 1e-8);
    CHECK(std::abs(fit.beta(1) - ols(1)) < 1e-8);
    CHECK(fit.sigma_eps2 == doctest::Approx(oracle::rss(f.x, f.y) / 10).epsilon(1e-12));
  }

  TEST_CASE("criterion agrees with a dense covariance computation") {
    const auto f = random_frame(11, 15, 4, 0.7, 1.0);
    for (double theta : {0.0, 0.01, 0.3, 1.0, 7.5, 400.0}) {
      const double dense = oracle::reml_criterion(f.x, f.y, f.groups, theta);
      CHECK(profile_reml(f, theta).criterion == doctest::Approx(dense).epsilon(1e-10));
    }
  }

  TEST_CASE("fit beats a fine theta grid") {
    const auto f = random_frame(42, 40, 5, 0.5, 1.0);
    const auto fit = fit_random_intercept(f);
    for (int i = 0; i < 200; ++i) {
      const double theta = std::pow(10.0, -6.0 + 10.0 * i / 199.0);
      CHECK(fit.reml_value <= profile_reml(f, theta).criterion + 1e-6);
    }
    CHECK(fit.reml_value <= profile_reml(f, 0.0).criterion + 1e-6);
  }

  TEST_CASE("fit invariants") {
    const auto f = random_frame(3, 30, 5, 0.8, 1.0);
    const auto fit = fit_random_intercept(f);
    CHECK(std::abs(fit.theta - fit.sigma_alpha2 / fit.sigma_eps2) < 1e-10);
    const auto again = profile_reml(f, fit.theta);
    CHECK(std::abs(fit.reml_value - again.criterion) < 1e-8);
    CHECK(((fit.beta - again.beta).array().abs() < 1e-12).all());
    CHECK(fit.n_obs == 150);
    CHECK(fit.n_groups == 30);
  }

  TEST_CASE("translating y moves only the intercept") {
    const auto f = random_frame(5, 25, 4, 0.6, 1.0);
    auto g = f;
    g.y.array() += 12.5;
    const auto a = fit_random_intercept(f);
    const auto b = fit_random_intercept(g);
    CHECK(std::abs(b.beta(0) - a.beta(0) - 12.5) < 1e-8);
    CHECK(std::abs(b.beta(1) - a.beta(1)) < 1e-8);
    CHECK(std::abs(b.beta(2) - a.beta(2)) < 1e-8);
    CHECK(std::abs(b.theta - a.theta) < 1e-8);
    CHECK(std::abs(b.sigma_eps2 - a.sigma_eps2) < 1e-8);
  }

  TEST_CASE("affine reparameterization of a predictor") {
    const auto f = random_frame(6, 25, 4, 0.6, 1.0);
    auto g = f;
    g.x.col(1) = 3.0 * g.x.col(1).array() + 2.0;
    const auto a = fit_random_intercept(f);
    const auto b = fit_random_intercept(g);
    CHECK(std::abs(a.reml_value - b.reml_value) < 1e-8);
    const Eigen::VectorXd fa = f.x * a.beta, fb = g.x * b.beta;
    CHECK((fa - fb).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(b.beta(1) * 3.0 - a.beta(1)) < 1e-8);
    // the criterion itself is invariant at any fixed theta
    CHECK(std::abs(profile_reml(f, 0.4).criterion - profile_reml(g, 0.4).criterion) < 1e-8);
  }

  TEST_CASE("singleton groups and bad designs") {
    auto f = intercept_only({{1}, {2}, {4}, {3}});
    const auto fit = fit_random_intercept(f);
    CHECK(fit.theta == 0.0);
    CHECK(!fit.warnings.empty());

    auto g = random_frame(1, 10, 3, 0.5, 1.0);
    g.x.col(2) = 2.0 * g.x.col(1);
    CHECK_THROWS_AS(fit_random_intercept(g), ValidationError);

    auto h = intercept_only({{1, 2, 3}});
    CHECK_THROWS_AS(fit_random_intercept(h), ValidationError);
  }

  TEST_CASE("variance screen") {
    Eigen::MatrixXd cols(1000, 2);
    for (Eigen::Index i = 0; i < 1000; ++i) {
      cols(i, 0) = (double(i) + 0.5) / 1000.0;
      cols(i, 1) = i == 999 ? 1000.0 : 0.0;
    }
    CHECK(variance_screen(cols) == std::vector<bool>{false, true});
  }

  TEST_CASE("variance inflation") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z(0, 1);
    const Eigen::Index n = 200;
    Eigen::MatrixXd orth(4, 2);
    orth << 1, 1, -1, 1, 1, -1, -1, -1;
    for (double v : variance_inflation(orth)) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    Eigen::MatrixXd cols(n, 4);
    for (Eigen::Index i = 0; i < n; ++i) {
      cols(i, 0) = z(rng);
      cols(i, 2) = z(rng);
      cols(i, 3) = z(rng);
      cols(i, 1) = cols(i, 0) + 0.33 * z(rng);  // R^2 near 0.9
    }
    const auto vif = variance_inflation(cols);
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(std::abs(vif[static_cast<std::size_t>(j)] - oracle::vif(cols, j)) < 1e-6);
    CHECK(vif[1] > 5);

    const auto report = vif_screen(cols, {"a", "b", "c", "d"});
    REQUIRE(report.dropped.size() == 1);
    for (double v : report.retained_vif) CHECK(v <= 5.0);

    Eigen::MatrixXd exact = cols;
    exact.col(3) = exact.col(2);
    const auto ex = vif_screen(exact, {"a", "b", "c", "d"});
    CHECK(std::isinf(ex.initial_vif[2]));
    CHECK(std::isinf(ex.initial_vif[3]));
    REQUIRE(!ex.dropped.empty());
    CHECK(ex.dropped[0].first == "d");
    CHECK(std::isinf(ex.dropped[0].second));
    for (double v : ex.retained_vif) CHECK(v <= 5.0);
    for (std::size_t i = 1; i < ex.dropped.size(); ++i) CHECK(ex.dropped[i].second <= ex.dropped[i - 1].second);
  }

  TEST_CASE("nakagawa r2") {
    auto r = nakagawa_r2(1.0, 1.0, 2.0);
    CHECK(r.r2m == 0.25);
    CHECK(r.r2c == 0.5);
    const auto f = intercept_only({{0, 2}, {4, 6}, {8, 10}});
    const auto fit = fit_random_intercept(f);
    CHECK(nakagawa_r2(fit, f).r2m == 0.0);
    const auto g = random_frame(9, 30, 5, 0.5, 1.0);
    const auto r2 = nakagawa_r2(fit_random_intercept(g), g);
    CHECK(r2.r2m <= r2.r2c);
    CHECK(r2.r2m >= 0);
    CHECK(r2.r2c <= 1);
  }

  TEST_CASE("anova at theta zero matches the least-squares decomposition") {
    // every group's residual mean is zero by construction, so theta = 0
    ModelFrame f;
    const Eigen::Index n = 24;
    f.x.resize(n, 3);
    f.y.resize(n);
    f.columns = {std::string(kInterceptName), "a", "b"};
    const double e[6] = {0.4, -0.1, -0.3, 0.2, 0.1, -0.3};
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = i % 6;
      f.x(i, 0) = 1;
      f.x(i, 1) = double(k);
      f.x(i, 2) = double((k * k) % 5);
      f.y(i) = 0.5 + 0.3 * f.x(i, 1) - 0.2 * f.x(i, 2) + e[k];
      f.groups.push_back("g" + std::to_string(i / 6));
    }
    const auto fit = fit_random_intercept(f);
    REQUIRE(fit.theta == 0.0);
    const auto rows = anova_table(fit, f);
    REQUIRE(rows.size() == 2);
    const double full = oracle::rss(f.x, f.y);
    for (Eigen::Index j = 1; j <= 2; ++j) {
      Eigen::MatrixXd reduced(n, 2);
      reduced.col(0) = f.x.col(0);
      reduced.col(1) = f.x.col(j == 1 ? 2 : 1);
      const double ss = oracle::rss(reduced, f.y) - full;
      const auto& row = rows[static_cast<std::size_t>(j - 1)];
      CHECK(row.sum_of_squares == doctest::Approx(ss).epsilon(1e-8));
      CHECK(row.f == doctest::Approx(row.sum_of_squares / fit.sigma_eps2).epsilon(1e-14));
      CHECK(row.df2 == double(n - 3 - 4 + 1));
      CHECK(row.p >= 0.0);
      CHECK(row.p <= 1.0);
    }
  }

  TEST_CASE("zero coefficient has zero sum of squares") {
    LmmFit fit;
    fit.columns = {std::string(kInterceptName), "a"};
    fit.beta = Eigen::Vector2d(1.0, 0.0);
    fit.sigma_eps2 = 1.0;
    fit.n_obs = 30;
    fit.n_groups = 10;
    auto f = random_frame(2, 10, 3, 0.1, 1.0);
    f.x.conservativeResize(Eigen::NoChange, 2);
    f.columns.pop_back();
    const auto rows = anova_table(fit, f);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].sum_of_squares == 0.0);
    CHECK(rows[0].p == 1.0);
  }

  TEST_CASE("prediction curve") {
    LmmFit fit;
    fit.columns = {std::string(kInterceptName), "closeness", "pagerank"};
    fit.beta = Eigen::Vector3d(1.0, 0.8, 2.0);
    ModelFrame f;
    f.x.resize(2, 3);
    f.x << 1, 0.2, 0.25, 1, 0.6, 0.75;  // pagerank mean 0.5
    const auto c = predict_curve(fit, f, "closeness", {0.0, 1.0});
    CHECK(c[0].second == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c[1].second == doctest::Approx(2.8).epsilon(1e-15));
    fit.beta(1) = 0.0;
    const auto flat = predict_curve(fit, f, "closeness", {0.0, 0.5, 1.0});
    CHECK(flat[0].second == flat[2].second);
    CHECK_THROWS_AS(predict_curve(fit, f, "degree", {0.0}), ValidationError);
  }

  TEST_CASE("responses csv") {
    const std::string text = "respondent_id,contributor_id,level\nr1,alice,1\nr1,bob,4\n";
    const auto rows = read_responses_csv(text);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].level == 4);
    CHECK(write_responses_csv(rows) == text);
    CHECK_THROWS_AS(read_responses_csv("respondent_id,contributor_id,level\nr1,alice,5\n"), ValidationError);
    CHECK_THROWS_AS(read_responses_csv("a,b\n"), ValidationError);
  }

  TEST_CASE("review model screens, fits and reports") {
    auto f = random_frame(21, 60, 5, 0.5, 1.0);
    // add a near copy of x1 so the VIF screen has something to drop
    f.x.conservativeResize(Eigen::NoChange, 4);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z(0, 0.01);
    for (Eigen::Index i = 0; i < f.x.rows(); ++i) f.x(i, 3) = f.x(i, 1) + z(rng);
    f.columns.push_back("x1copy");
    const auto model = fit_review_model(f);
    CHECK(model.vif.dropped.size() == 1);
    CHECK(model.fit.columns.size() == 3);
    CHECK(model.r2.r2m <= model.r2.r2c);
    const auto json = model_json(model);
    for (const char* key : {"\"variables\"", "\"beta\"", "\"se\"", "\"ss\"", "\"F\"", "\"p\"", "\"sigma_alpha2\"",
                            "\"sigma_eps2\"", "\"r2m\"", "\"r2c\"", "\"n_obs\"", "\"n_groups\"", "\"dropped_by_vif\"",
                            "\"warnings\""}) {
      CHECK(json.find(key) != std::string::npos);
    }
  }
}
