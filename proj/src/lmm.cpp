#include "repnet/lmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include <json.hpp>

#include "repnet/csv.hpp"
#include "repnet/error.hpp"
#include "repnet/special_functions.hpp"

namespace repnet {

void ModelFrame::validate() const {
  const auto n = y.size();
  if (n == 0) throw ValidationError("model frame has no observations");
  if (x.rows() != n || static_cast<Eigen::Index>(groups.size()) != n) {
    throw ValidationError("model frame rows of y, X and group are misaligned");
  }
  if (static_cast<Eigen::Index>(columns.size()) != x.cols()) {
    throw ValidationError("model frame column names do not match X");
  }
  if (!y.allFinite() || !x.allFinite()) throw ValidationError("model frame contains non-finite values");
  std::vector<std::string> distinct(groups.begin(), groups.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) throw ValidationError("model frame needs at least two groups");
}

std::vector<bool> variance_screen(const Eigen::MatrixXd& columns, double threshold) {
  std::vector<bool> flags(static_cast<std::size_t>(columns.cols()), false);
  const auto n = columns.rows();
  if (n < 2) return flags;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    const auto col = columns.col(j);
    const double var = (col.array() - col.mean()).square().sum() / static_cast<double>(n - 1);
    flags[static_cast<std::size_t>(j)] = var > threshold;
  }
  return flags;
}

std::vector<double> variance_inflation(const Eigen::MatrixXd& columns) {
  const auto n = columns.rows();
  const auto k = columns.cols();
  std::vector<double> vif(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::MatrixXd design(n, k);
    design.col(0).setOnes();
    for (Eigen::Index c = 0, out = 1; c < k; ++c) {
      if (c != j) design.col(out++) = columns.col(c);
    }
    const Eigen::VectorXd target = columns.col(j);
    const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
    const double rss = (target - design * coef).squaredNorm();
    const double tss = (target.array() - target.mean()).square().sum();
    // R^2 indistinguishable from 1 counts as exact collinearity.
    vif[static_cast<std::size_t>(j)] =
        (!(tss > 0.0) || rss <= 1e-12 * tss) ? std::numeric_limits<double>::infinity() : tss / rss;
  }
  return vif;
}

VifReport vif_screen(const Eigen::MatrixXd& columns, const std::vector<std::string>& names, double threshold) {
  if (columns.cols() < 2) throw ValidationError("VIF screening needs at least two candidate columns");
  if (static_cast<Eigen::Index>(names.size()) != columns.cols()) {
    throw ValidationError("VIF column names do not match the matrix");
  }
  if (columns.rows() <= columns.cols()) throw ValidationError("VIF screening needs more rows than columns");

  VifReport report;
  report.candidates = names;
  std::vector<Eigen::Index> kept(static_cast<std::size_t>(columns.cols()));
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = static_cast<Eigen::Index>(i);

  auto current = [&] {
    Eigen::MatrixXd sub(columns.rows(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) sub.col(static_cast<Eigen::Index>(i)) = columns.col(kept[i]);
    return variance_inflation(sub);
  };

  auto vif = current();
  report.initial_vif = vif;
  while (kept.size() > 1) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < vif.size(); ++i) {
      if (vif[i] >= vif[worst]) worst = i;
    }
    if (!(vif[worst] > threshold)) break;
    report.dropped.emplace_back(names[static_cast<std::size_t>(kept[worst])], vif[worst]);
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(worst));
    vif = kept.size() > 1 ? current() : std::vector<double>{1.0};
  }
  for (std::size_t i = 0; i < kept.size(); ++i) {
    report.retained.push_back(names[static_cast<std::size_t>(kept[i])]);
    report.retained_vif.push_back(vif[i]);
  }
  return report;
}

namespace {

// Sufficient statistics for profiling the random-intercept likelihood: with
// V_g = I + theta*J, V_g^-1 = I - theta/(1 + n_g*theta) J, so every quantity
// reduces to per-group sums.
class RemlEvaluator {
 public:
  explicit RemlEvaluator(const ModelFrame& frame) : frame_(frame) {
    std::unordered_map<std::string, std::size_t> index;
    group_of_.reserve(frame.rows());
    for (const auto& g : frame.groups) {
      auto [it, inserted] = index.emplace(g, index.size());
      group_of_.push_back(it->second);
    }
    const auto p = frame.x.cols();
    const auto g = static_cast<Eigen::Index>(index.size());
    sizes_.assign(static_cast<std::size_t>(g), 0.0);
    xsum_ = Eigen::MatrixXd::Zero(p, g);
    ysum_ = Eigen::VectorXd::Zero(g);
    for (Eigen::Index i = 0; i < frame.x.rows(); ++i) {
      const auto gi = static_cast<Eigen::Index>(group_of_[static_cast<std::size_t>(i)]);
      sizes_[static_cast<std::size_t>(gi)] += 1.0;
      xsum_.col(gi) += frame.x.row(i).transpose();
      ysum_(gi) += frame.y(i);
    }
    xtx_ = frame.x.transpose() * frame.x;
    xty_ = frame.x.transpose() * frame.y;
    Eigen::LLT<Eigen::MatrixXd> llt(xtx_);
    logdet_xtx_ = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  }

  std::size_t group_count() const { return sizes_.size(); }
  const std::vector<double>& sizes() const { return sizes_; }

  RemlProfile evaluate(double theta) const {
    const auto n = static_cast<double>(frame_.rows());
    const auto p = frame_.x.cols();
    Eigen::MatrixXd a = xtx_;
    Eigen::VectorXd b = xty_;
    double logdet_v = 0.0;
    for (std::size_t g = 0; g < sizes_.size(); ++g) {
      const double c = theta / (1.0 + sizes_[g] * theta);
      const auto gi = static_cast<Eigen::Index>(g);
      a.noalias() -= c * xsum_.col(gi) * xsum_.col(gi).transpose();
      b.noalias() -= c * ysum_(gi) * xsum_.col(gi);
      logdet_v += std::log1p(sizes_[g] * theta);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) throw ValidationError("X'V^-1X is not positive definite");

    RemlProfile out;
    out.theta = theta;
    out.beta = llt.solve(b);
    const Eigen::VectorXd r = frame_.y - frame_.x * out.beta;
    Eigen::VectorXd rsum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sizes_.size()));
    for (Eigen::Index i = 0; i < r.size(); ++i) rsum(static_cast<Eigen::Index>(group_of_[static_cast<std::size_t>(i)])) += r(i);
    double quad = r.squaredNorm();
    for (std::size_t g = 0; g < sizes_.size(); ++g) {
      const double c = theta / (1.0 + sizes_[g] * theta);
      quad -= c * rsum(static_cast<Eigen::Index>(g)) * rsum(static_cast<Eigen::Index>(g));
    }
    const double dof = n - static_cast<double>(p);
    out.sigma_eps2 = quad / dof;
    const double logdet_a = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    out.criterion = dof * (1.0 + std::log(2.0 * std::numbers::pi * out.sigma_eps2)) + logdet_v + logdet_a -
                    logdet_xtx_;
    out.xtvinvx = std::move(a);
    return out;
  }

 private:
  const ModelFrame& frame_;
  std::vector<std::size_t> group_of_;
  std::vector<double> sizes_;
  Eigen::MatrixXd xsum_;
  Eigen::VectorXd ysum_;
  Eigen::MatrixXd xtx_;
  Eigen::VectorXd xty_;
  double logdet_xtx_ = 0.0;
};

void require_estimable(const ModelFrame& frame) {
  frame.validate();
  const auto p = frame.x.cols();
  if (static_cast<Eigen::Index>(frame.rows()) <= p) {
    throw ValidationError("model needs more observations than fixed effects");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(frame.x);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) throw ValidationError("fixed-effect design matrix is rank deficient");
}

}  // namespace

RemlProfile profile_reml(const ModelFrame& frame, double theta) {
  if (!(theta >= 0.0)) throw ValidationError("variance ratio must be non-negative");
  require_estimable(frame);
  return RemlEvaluator(frame).evaluate(theta);
}

LmmFit fit_random_intercept(const ModelFrame& frame) {
  require_estimable(frame);
  const RemlEvaluator reml(frame);

  LmmFit fit;
  fit.columns = frame.columns;
  fit.n_obs = frame.rows();
  fit.n_groups = reml.group_count();

  const bool all_singletons =
      std::all_of(reml.sizes().begin(), reml.sizes().end(), [](double s) { return s < 2.0; });

  RemlProfile best = reml.evaluate(0.0);
  if (all_singletons) {
    fit.warnings.emplace_back("every group has a single observation; between-group variance is unidentifiable");
  } else {
    // Coarse log-spaced scan, then golden-section refinement between the
    // neighbours of the best grid point.
    std::vector<double> grid{0.0};
    for (int k = 0; k <= 56; ++k) grid.push_back(std::pow(10.0, -8.0 + 0.25 * k));
    std::size_t arg = 0;
    double arg_value = best.criterion;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double v = reml.evaluate(grid[i]).criterion;
      if (v < arg_value) {
        arg_value = v;
        arg = i;
      }
    }
    double lo = grid[arg == 0 ? 0 : arg - 1];
    double hi = grid[std::min(arg + 1, grid.size() - 1)];
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    double f1 = reml.evaluate(x1).criterion, f2 = reml.evaluate(x2).criterion;
    while (hi - lo > kThetaTolerance) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - ratio * (hi - lo);
        f1 = reml.evaluate(x1).criterion;
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + ratio * (hi - lo);
        f2 = reml.evaluate(x2).criterion;
      }
    }
    auto refined = reml.evaluate(std::clamp(0.5 * (lo + hi), 0.0, kMaxTheta));
    if (refined.criterion < best.criterion) best = std::move(refined);
    if (arg > 0 && arg_value < best.criterion) best = reml.evaluate(grid[arg]);
  }

  fit.theta = best.theta;
  fit.boundary = best.theta == 0.0;
  if (fit.boundary && !all_singletons) {
    fit.warnings.emplace_back("between-group variance estimated at the boundary (theta = 0)");
  }
  fit.beta = best.beta;
  fit.sigma_eps2 = best.sigma_eps2;
  fit.sigma_alpha2 = best.theta * best.sigma_eps2;
  fit.reml_value = best.criterion;
  const Eigen::MatrixXd cov = best.sigma_eps2 * best.xtvinvx.inverse();
  fit.se = cov.diagonal().array().sqrt();
  return fit;
}

R2Report nakagawa_r2(double fixed_variance, double sigma_alpha2, double sigma_eps2) {
  const double total = fixed_variance + sigma_alpha2 + sigma_eps2;
  if (!(total > 0.0)) throw ValidationError("total variance must be positive");
  return {fixed_variance / total, (fixed_variance + sigma_alpha2) / total};
}

R2Report nakagawa_r2(const LmmFit& fit, const ModelFrame& frame) {
  const Eigen::VectorXd fitted = frame.x * fit.beta;
  const double var_f = (fitted.array() - fitted.mean()).square().mean();
  return nakagawa_r2(var_f, fit.sigma_alpha2, fit.sigma_eps2);
}

std::vector<AnovaRow> anova_table(const LmmFit& fit, const ModelFrame& frame) {
  const auto p = static_cast<double>(frame.x.cols());
  const double df2 = static_cast<double>(fit.n_obs) - p - static_cast<double>(fit.n_groups) + 1.0;
  if (!(df2 > 0.0)) throw ValidationError("ANOVA denominator degrees of freedom must be positive");
  const auto profile = RemlEvaluator(frame).evaluate(fit.theta);
  const Eigen::MatrixXd inv = profile.xtvinvx.inverse();
  std::vector<AnovaRow> rows;
  for (Eigen::Index j = 0; j < frame.x.cols(); ++j) {
    if (frame.columns[static_cast<std::size_t>(j)] == kInterceptName) continue;
    AnovaRow row;
    row.term = frame.columns[static_cast<std::size_t>(j)];
    row.sum_of_squares = fit.beta(j) * fit.beta(j) / inv(j, j);
    row.f = row.sum_of_squares / fit.sigma_eps2;
    row.df2 = df2;
    row.p = f_sf(row.f, row.df1, df2);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::pair<double, double>> predict_curve(const LmmFit& fit, const ModelFrame& frame,
                                                     std::string_view measure, const std::vector<double>& grid) {
  const auto it = std::find(fit.columns.begin(), fit.columns.end(), measure);
  if (it == fit.columns.end() || measure == kInterceptName) {
    throw ValidationError("'" + std::string(measure) + "' is not a fitted measure");
  }
  const auto j = static_cast<Eigen::Index>(it - fit.columns.begin());
  const Eigen::VectorXd means = frame.x.colwise().mean();
  const double base = means.dot(fit.beta) - means(j) * fit.beta(j);
  std::vector<std::pair<double, double>> curve;
  curve.reserve(grid.size());
  for (double x : grid) curve.emplace_back(x, base + fit.beta(j) * x);
  return curve;
}

std::vector<ResponseRecord> read_responses_csv(std::string_view text) {
  const csv::Row header{"respondent_id", "contributor_id", "level"};
  auto rows = csv::parse(text);
  if (rows.empty() || rows.front() != header) {
    throw ValidationError("responses csv must start with header '" + csv::join(header) + "'");
  }
  std::vector<ResponseRecord> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 3) throw ValidationError("responses csv row " + std::to_string(i + 1) + " needs 3 fields");
    const auto level = csv::parse_int(r[2]);
    if (level < 1 || level > 4) {
      throw ValidationError("responses csv row " + std::to_string(i + 1) + ": level must be 1..4");
    }
    out.push_back({r[0], r[1], static_cast<int>(level)});
  }
  return out;
}

std::string write_responses_csv(const std::vector<ResponseRecord>& responses) {
  std::string out = "respondent_id,contributor_id,level\n";
  for (const auto& r : responses) {
    out += csv::join({r.respondent, r.contributor, std::to_string(r.level)});
    out.push_back('\n');
  }
  return out;
}

ModelFrame build_frame(const std::vector<ResponseRecord>& responses, const std::vector<ReputationScore>& scores,
                       const std::vector<std::string>& measures) {
  std::vector<std::size_t> measure_index;
  for (const auto& m : measures) {
    auto it = std::find(kMeasureNames.begin(), kMeasureNames.end(), m);
    if (it == kMeasureNames.end()) throw ValidationError("unknown centrality measure '" + m + "'");
    measure_index.push_back(static_cast<std::size_t>(it - kMeasureNames.begin()));
  }
  std::unordered_map<std::string, const ReputationScore*> by_login;
  for (const auto& s : scores) by_login[s.contributor] = &s;

  ModelFrame f;
  const auto n = static_cast<Eigen::Index>(responses.size());
  f.y.resize(n);
  f.x.resize(n, static_cast<Eigen::Index>(measures.size() + 1));
  f.columns.emplace_back(kInterceptName);
  f.columns.insert(f.columns.end(), measures.begin(), measures.end());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = responses[static_cast<std::size_t>(i)];
    auto it = by_login.find(r.contributor);
    if (it == by_login.end()) throw ValidationError("response names unknown contributor '" + r.contributor + "'");
    f.y(i) = r.level;
    f.x(i, 0) = 1.0;
    for (std::size_t m = 0; m < measure_index.size(); ++m) {
      f.x(i, static_cast<Eigen::Index>(m + 1)) = it->second->normalized[measure_index[m]];
    }
    f.groups.push_back(r.contributor);
  }
  return f;
}

ReviewModel fit_review_model(const ModelFrame& candidates_frame, const ReviewModelOptions& options) {
  candidates_frame.validate();
  const auto& cols = candidates_frame.columns;
  if (cols.empty() || cols.front() != kInterceptName) {
    throw ValidationError("candidate frame must start with the intercept column");
  }
  ReviewModel model;
  const Eigen::Index k = candidates_frame.x.cols() - 1;
  Eigen::MatrixXd candidates = candidates_frame.x.rightCols(k);
  std::vector<std::string> names(cols.begin() + 1, cols.end());

  const auto flags = variance_screen(candidates, options.variance_threshold);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!flags[static_cast<std::size_t>(j)]) continue;
    if ((candidates.col(j).array() <= -1.0).any()) {
      throw ValidationError("column '" + names[static_cast<std::size_t>(j)] + "' cannot be log1p transformed");
    }
    candidates.col(j) = candidates.col(j).array().log1p();
    model.log_transformed.push_back(names[static_cast<std::size_t>(j)]);
  }

  model.vif = vif_screen(candidates, names, options.vif_threshold);
  model.frame.y = candidates_frame.y;
  model.frame.groups = candidates_frame.groups;
  model.frame.columns.emplace_back(kInterceptName);
  model.frame.x.resize(candidates.rows(), static_cast<Eigen::Index>(model.vif.retained.size() + 1));
  model.frame.x.col(0).setOnes();
  for (std::size_t i = 0; i < model.vif.retained.size(); ++i) {
    const auto j = std::find(names.begin(), names.end(), model.vif.retained[i]) - names.begin();
    model.frame.x.col(static_cast<Eigen::Index>(i + 1)) = candidates.col(j);
    model.frame.columns.push_back(model.vif.retained[i]);
  }
  model.fit = fit_random_intercept(model.frame);
  model.r2 = nakagawa_r2(model.fit, model.frame);
  model.anova = anova_table(model.fit, model.frame);
  return model;
}

std::string model_json(const ReviewModel& model) {
  using nlohmann::ordered_json;
  auto number = [](double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); };
  ordered_json j;
  j["variables"] = model.fit.columns;
  ordered_json beta = ordered_json::array(), se = ordered_json::array(), ss = ordered_json::array(),
               f = ordered_json::array(), p = ordered_json::array();
  for (std::size_t i = 0; i < model.fit.columns.size(); ++i) {
    beta.push_back(number(model.fit.beta(static_cast<Eigen::Index>(i))));
    se.push_back(number(model.fit.se(static_cast<Eigen::Index>(i))));
    const auto row = std::find_if(model.anova.begin(), model.anova.end(),
                                  [&](const AnovaRow& r) { return r.term == model.fit.columns[i]; });
    if (row == model.anova.end()) {
      ss.push_back(nullptr);
      f.push_back(nullptr);
      p.push_back(nullptr);
    } else {
      ss.push_back(number(row->sum_of_squares));
      f.push_back(number(row->f));
      p.push_back(number(row->p));
    }
  }
  j["beta"] = beta;
  j["se"] = se;
  j["ss"] = ss;
  j["F"] = f;
  j["p"] = p;
  j["df_denominator"] = model.anova.empty() ? ordered_json(nullptr) : number(model.anova.front().df2);
  j["sigma_alpha2"] = number(model.fit.sigma_alpha2);
  j["sigma_eps2"] = number(model.fit.sigma_eps2);
  j["theta"] = number(model.fit.theta);
  j["reml"] = number(model.fit.reml_value);
  j["r2m"] = number(model.r2.r2m);
  j["r2c"] = number(model.r2.r2c);
  j["n_obs"] = model.fit.n_obs;
  j["n_groups"] = model.fit.n_groups;
  ordered_json dropped = ordered_json::array();
  for (const auto& [name, _] : model.vif.dropped) dropped.push_back(name);
  j["dropped_by_vif"] = dropped;
  ordered_json vif = ordered_json::object();
  for (std::size_t i = 0; i < model.vif.candidates.size(); ++i) {
    vif[model.vif.candidates[i]] = number(model.vif.initial_vif[i]);
  }
  j["initial_vif"] = vif;
  j["log_transformed"] = model.log_transformed;
  j["warnings"] = model.fit.warnings;
  return j.dump(2) + "\n";
}

}  // namespace repnet
