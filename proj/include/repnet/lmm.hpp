#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "repnet/reputation.hpp"

namespace repnet {

inline constexpr std::string_view kInterceptName = "(Intercept)";

/// Response vector, fixed-effect design (intercept first) and cluster label
/// per row for a random-intercept model.
struct ModelFrame {
  Eigen::VectorXd y;
  Eigen::MatrixXd x;
  std::vector<std::string> columns;
  std::vector<std::string> groups;

  std::size_t rows() const { return static_cast<std::size_t>(y.size()); }
  /// Throws ValidationError on misaligned sizes, non-finite values or fewer
  /// than two groups.
  void validate() const;
};

/// Per-column flag: sample variance above `threshold` calls for a log1p
/// transform.
std::vector<bool> variance_screen(const Eigen::MatrixXd& columns, double threshold = 0.2);

/// Variance inflation factors of each column against the others plus an
/// intercept. Exactly collinear columns get +infinity.
std::vector<double> variance_inflation(const Eigen::MatrixXd& columns);

struct VifReport {
  std::vector<std::string> candidates;
  std::vector<double> initial_vif;                  // candidates order
  std::vector<std::pair<std::string, double>> dropped;  // in drop order, VIF at drop time
  std::vector<std::string> retained;
  std::vector<double> retained_vif;
};

/// Repeatedly drops the column with the largest VIF while any exceeds
/// `threshold`. Ties drop the later column.
VifReport vif_screen(const Eigen::MatrixXd& columns, const std::vector<std::string>& names, double threshold = 5.0);

/// Profiled restricted likelihood at a variance ratio theta = s2_alpha/s2_eps.
struct RemlProfile {
  double theta = 0.0;
  /// -2 log restricted likelihood at the profiled residual variance, offset
  /// by log det(X'X) so it does not depend on how X is parameterized.
  double criterion = 0.0;
  Eigen::VectorXd beta;
  double sigma_eps2 = 0.0;
  Eigen::MatrixXd xtvinvx;  // X' V^-1 X with V = I + theta ZZ'
};

RemlProfile profile_reml(const ModelFrame& frame, double theta);

inline constexpr double kMaxTheta = 1e6;
inline constexpr double kThetaTolerance = 1e-8;

struct LmmFit {
  std::vector<std::string> columns;
  Eigen::VectorXd beta;
  Eigen::VectorXd se;
  double sigma_alpha2 = 0.0;
  double sigma_eps2 = 0.0;
  double theta = 0.0;
  double reml_value = 0.0;
  std::size_t n_obs = 0;
  std::size_t n_groups = 0;
  bool boundary = false;  // theta estimated at 0
  std::vector<std::string> warnings;
};

/// REML fit of y = X beta + u_group + e. Throws ValidationError for a rank
/// deficient design.
LmmFit fit_random_intercept(const ModelFrame& frame);

struct R2Report {
  double r2m = 0.0;
  double r2c = 0.0;
};

/// Marginal / conditional R^2 from variance components.
R2Report nakagawa_r2(double fixed_variance, double sigma_alpha2, double sigma_eps2);
R2Report nakagawa_r2(const LmmFit& fit, const ModelFrame& frame);

struct AnovaRow {
  std::string term;
  double sum_of_squares = 0.0;
  double f = 0.0;
  double df1 = 1.0;
  double df2 = 0.0;
  double p = 1.0;
};

/// Marginal (type III) tests for every non-intercept coefficient with
/// denominator df = n_obs - p - n_groups + 1.
std::vector<AnovaRow> anova_table(const LmmFit& fit, const ModelFrame& frame);

/// Predictions along `grid` for one column with the other columns at their
/// sample means and the random effect at zero.
std::vector<std::pair<double, double>> predict_curve(const LmmFit& fit, const ModelFrame& frame,
                                                     std::string_view measure, const std::vector<double>& grid);

// Review-level model assembled from survey responses and reputation scores.

struct ResponseRecord {
  std::string respondent;
  std::string contributor;
  int level = 0;  // 1 = most review .. 4 = least
};

std::vector<ResponseRecord> read_responses_csv(std::string_view text);
std::string write_responses_csv(const std::vector<ResponseRecord>& responses);

/// Frame with an intercept plus the requested normalized measures of each
/// response's contributor (kMeasureNames subset).
ModelFrame build_frame(const std::vector<ResponseRecord>& responses, const std::vector<ReputationScore>& scores,
                       const std::vector<std::string>& measures);

struct ReviewModelOptions {
  std::vector<std::string> candidates{"degree", "closeness", "betweenness", "eigenvector", "pagerank"};
  double vif_threshold = 5.0;
  double variance_threshold = 0.2;
};

struct ReviewModel {
  VifReport vif;
  std::vector<std::string> log_transformed;
  ModelFrame frame;
  LmmFit fit;
  R2Report r2;
  std::vector<AnovaRow> anova;
};

/// Variance screen, VIF screen, REML fit, R^2 and ANOVA in sequence.
ReviewModel fit_review_model(const ModelFrame& candidates_frame, const ReviewModelOptions& options = {});

/// `model.json` document.
std::string model_json(const ReviewModel& model);

}  // namespace repnet
