#include "repnet/pipeline.hpp"

#include <algorithm>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "repnet/centrality.hpp"
#include "repnet/error.hpp"
#include "repnet/graphstats.hpp"
#include "repnet/ingest.hpp"
#include "repnet/lmm.hpp"
#include "repnet/network.hpp"
#include "repnet/reputation.hpp"
#include "repnet/statkit.hpp"
#include "repnet/synth.hpp"
#include "repnet/workspace.hpp"

namespace repnet {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kEvents = "events.jsonl";
constexpr const char* kNetwork = "network.graphml";
constexpr const char* kStats = "stats.json";
constexpr const char* kCentrality = "centrality.csv";
constexpr const char* kScores = "scores.csv";
constexpr const char* kSample = "sample.json";
constexpr const char* kModel = "model.json";
constexpr const char* kResponses = "responses.csv";
constexpr const char* kConfig = "config.json";

// Persisted run configuration. Every command starts from the workspace's
// config.json (or defaults) and applies the flags given on its command line.
struct Config {
  std::string from = "2020-10-01T00:00:00Z";
  std::string to = "2022-10-01T00:00:00Z";
  int window_days = kDefaultCoeditWindowDays;
  std::string distance_transform = "inverse";
  double damping = 0.85;
  double vif_threshold = 5.0;
  double variance_threshold = 0.2;
  std::string badge_mode = "quantile";
  double badge_quantile = 0.9;
  double badge_threshold = 1.0;
  int min_collaborators = static_cast<int>(kMinCollaborators);
  std::uint64_t seed = 0;
  // simulate
  std::size_t sim_vertices = 200;
  std::size_t sim_lattice_degree = 6;
  double sim_rewire = 0.1;
  std::int64_t sim_weight_max = 5;
  std::size_t sim_responses_per_contributor = 5;

  json to_json() const {
    return json{{"from", from},
                {"to", to},
                {"window_days", window_days},
                {"distance_transform", distance_transform},
                {"damping", damping},
                {"vif_threshold", vif_threshold},
                {"variance_threshold", variance_threshold},
                {"badge_mode", badge_mode},
                {"badge_quantile", badge_quantile},
                {"badge_threshold", badge_threshold},
                {"min_collaborators", min_collaborators},
                {"seed", seed},
                {"sim_vertices", sim_vertices},
                {"sim_lattice_degree", sim_lattice_degree},
                {"sim_rewire", sim_rewire},
                {"sim_weight_max", sim_weight_max},
                {"sim_responses_per_contributor", sim_responses_per_contributor}};
  }

  static Config from_json(const json& j) {
    Config c;
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("from", c.from);
    get("to", c.to);
    get("window_days", c.window_days);
    get("distance_transform", c.distance_transform);
    get("damping", c.damping);
    get("vif_threshold", c.vif_threshold);
    get("variance_threshold", c.variance_threshold);
    get("badge_mode", c.badge_mode);
    get("badge_quantile", c.badge_quantile);
    get("badge_threshold", c.badge_threshold);
    get("min_collaborators", c.min_collaborators);
    get("seed", c.seed);
    get("sim_vertices", c.sim_vertices);
    get("sim_lattice_degree", c.sim_lattice_degree);
    get("sim_rewire", c.sim_rewire);
    get("sim_weight_max", c.sim_weight_max);
    get("sim_responses_per_contributor", c.sim_responses_per_contributor);
    return c;
  }

  void validate() const {
    if (!(parse_rfc3339(from) < parse_rfc3339(to))) throw ValidationError("--from must precede --to");
    if (window_days < 1) throw ValidationError("--window-days must be at least 1");
    parse_distance_transform(distance_transform);
    if (!(damping > 0.0 && damping < 1.0)) throw ValidationError("--damping must lie in (0, 1)");
    if (!(vif_threshold >= 1.0)) throw ValidationError("--vif-threshold must be at least 1");
    if (!(variance_threshold > 0.0)) throw ValidationError("--variance-threshold must be positive");
    badge_policy().validate();
    if (min_collaborators < 1) throw ValidationError("--min-collaborators must be positive");
  }

  BadgePolicy badge_policy() const {
    if (badge_mode == "quantile") return BadgePolicy::at_quantile(badge_quantile);
    if (badge_mode == "absolute") return BadgePolicy::at_threshold(badge_threshold);
    throw ValidationError("badge mode must be quantile or absolute");
  }

  CentralityConfig centrality(unsigned threads) const {
    CentralityConfig c;
    c.distance_transform = parse_distance_transform(distance_transform);
    c.pagerank_damping = damping;
    c.threads = threads;
    return c;
  }
};

struct Flags {
  std::string out = "workspace";
  std::string events, responses, respondent, format = "graphml", output, contingency, reliability;
  bool force = false;
  unsigned threads = 1;
};

json subset(const json& cfg, std::initializer_list<const char*> keys) {
  json s = json::object();
  for (auto k : keys) s[k] = cfg.at(k);
  return s;
}

class Session {
 public:
  Session(const Flags& flags, Config cfg, std::ostream& out)
      : flags_(flags), ws_(flags.out), cfg_(std::move(cfg)), cfg_json_(cfg_.to_json()), out_(out) {}

  Workspace& ws() { return ws_; }
  const Config& cfg() const { return cfg_; }
  const json& cfg_json() const { return cfg_json_; }
  std::ostream& out() { return out_; }

  std::string read(const std::string& name) { return ws_.read_artifact(name, cfg_json_, flags_.force); }

  // Configuration recorded on upstream artifacts merged with this command's keys.
  json derived_config(std::initializer_list<const char*> upstream, std::initializer_list<const char*> own) const {
    json c = json::object();
    for (auto name : upstream) {
      if (const auto* rec = ws_.record(name)) c.update((*rec)["config"]);
    }
    c.update(subset(cfg_json_, own));
    return c;
  }

  std::map<std::string, std::string> inputs(std::initializer_list<const char*> names) const {
    std::map<std::string, std::string> m;
    for (auto name : names) m[name] = sha256_hex(read_file(ws_.path(name)));
    return m;
  }

  void save_config() { write_file_atomic(ws_.path(kConfig), cfg_json_.dump(2) + "\n"); }

  DeveloperNetwork network() { return import_graphml(read(kNetwork)); }

 private:
  const Flags& flags_;
  Workspace ws_;
  Config cfg_;
  json cfg_json_;
  std::ostream& out_;
};

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void cmd_ingest(Session& s, const Flags& f) {
  if (f.events.empty()) throw ValidationError("ingest requires --events <file>");
  const auto raw = read_file(f.events);
  std::istringstream in(raw);
  auto log = filter_actors_and_window(parse_event_log(in), parse_rfc3339(s.cfg().from), parse_rfc3339(s.cfg().to));
  const auto tally = tally_review_status(log);
  s.ws().write_artifact(kEvents, to_jsonl(log), {{"--events", sha256_hex(raw)}},
                        subset(s.cfg_json(), {"from", "to"}));

  const auto& d = log.diagnostics;
  ordered_json report;
  report["commits"] = log.commits.size();
  report["rejected_prs"] = log.rejected_prs.size();
  report["reviewed"] = tally.reviewed;
  report["unreviewed"] = tally.unreviewed;
  report["dropped"] = {{"malformed", d.malformed},       {"unknown_kind", d.unknown_kind},
                       {"duplicate_sha", d.duplicate_sha}, {"self_closed_pr", d.self_closed_pr},
                       {"bot", d.bot},                     {"out_of_window", d.out_of_window}};
  report["bot_reviewers_removed"] = d.bot_reviewers_removed;
  s.ws().write_artifact("ingest_report.json", report.dump(2) + "\n", s.inputs({kEvents}),
                        subset(s.cfg_json(), {"from", "to"}));

  s.out() << "ingested " << log.commits.size() << " commits and " << log.rejected_prs.size()
          << " rejected pull requests (" << d.dropped() << " records dropped)\n"
          << "review status: " << tally.reviewed << " reviewed, " << tally.unreviewed << " unreviewed\n";
}

void cmd_build(Session& s, const Flags&) {
  std::istringstream in(s.read(kEvents));
  const auto net = build_network(parse_event_log(in), s.cfg().window_days);
  s.ws().write_artifact(kNetwork, export_graph(net, GraphFormat::GraphML), s.inputs({kEvents}),
                        s.derived_config({kEvents}, {"window_days"}));
  s.out() << "network: " << net.vertex_count() << " contributors, " << net.edge_count() << " edges\n";
}

void cmd_stats(Session& s, const Flags& f) {
  const auto net = s.network();
  const auto summary = structural_summary(net, f.threads);
  ordered_json j;
  j["vertex_count"] = summary.vertex_count;
  j["edge_count"] = summary.edge_count;
  j["component_count"] = summary.component_count;
  j["largest_component_size"] = summary.largest_component_size;
  j["component_sizes"] = summary.component_sizes;
  j["density"] = summary.density;
  j["avg_clustering"] = summary.avg_clustering;
  j["avg_shortest_path_lcc"] =
      summary.avg_shortest_path_lcc ? ordered_json(*summary.avg_shortest_path_lcc) : ordered_json(nullptr);
  if (net.vertex_count() > 0) {
    const auto partition = louvain(net, s.cfg().seed);
    ordered_json hist = ordered_json::object();
    for (const auto& [size, count] : community_size_histogram(partition)) hist[std::to_string(size)] = count;
    j["communities"] = {{"count", partition.community_count()},
                        {"modularity", partition.modularity},
                        {"seed", s.cfg().seed},
                        {"resolution", 1.0},
                        {"size_histogram", hist}};
  } else {
    j["communities"] = nullptr;
  }
  s.ws().write_artifact(kStats, j.dump(2) + "\n", s.inputs({kNetwork}), s.derived_config({kNetwork}, {"seed"}));
  s.out() << "vertices " << summary.vertex_count << ", edges " << summary.edge_count << ", components "
          << summary.component_count << " (largest " << summary.largest_component_size << ")\n"
          << "density " << fixed(summary.density) << ", clustering " << fixed(summary.avg_clustering)
          << ", mean path (largest component) "
          << (summary.avg_shortest_path_lcc ? fixed(*summary.avg_shortest_path_lcc) : std::string("n/a")) << "\n";
  if (j["communities"].is_object()) {
    s.out() << "communities " << j["communities"]["count"].get<std::size_t>() << ", modularity "
            << fixed(j["communities"]["modularity"].get<double>()) << "\n";
  }
}

void cmd_centrality(Session& s, const Flags& f) {
  const auto net = s.network();
  const auto table = centrality_table(net, s.cfg().centrality(f.threads));
  s.ws().write_artifact(kCentrality, write_centrality_csv(table), s.inputs({kNetwork}),
                        s.derived_config({kNetwork}, {"distance_transform", "damping"}));
  s.out() << "centrality computed for " << table.size() << " contributors\n";
}

json policy_json(const Config& c) {
  return c.badge_mode == "quantile" ? json{{"mode", "quantile"}, {"quantile", c.badge_quantile}}
                                    : json{{"mode", "absolute"}, {"threshold", c.badge_threshold}};
}

void report_scores(Session& s, const std::vector<ReputationScore>& scores) {
  auto ranked = scores;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const ReputationScore& a, const ReputationScore& b) { return a.aggregate > b.aggregate; });
  const auto badged = std::count_if(scores.begin(), scores.end(), [](const ReputationScore& r) { return r.badge; });
  s.out() << badged << " of " << scores.size() << " contributors badged\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(5, ranked.size()); ++i) {
    s.out() << "  " << ranked[i].contributor << " " << fixed(ranked[i].aggregate) << (ranked[i].badge ? " *" : "")
            << "\n";
  }
}

void cmd_score(Session& s, const Flags&) {
  const auto table = read_centrality_csv(s.read(kCentrality));
  const auto scores = assign_badges(aggregate_score(table), s.cfg().badge_policy());
  s.ws().write_artifact(kScores, write_scores_csv(scores), s.inputs({kCentrality}),
                        s.derived_config({kCentrality}, {}), {{"badge_policy", policy_json(s.cfg())}});
  report_scores(s, scores);
}

void cmd_badge(Session& s, const Flags&) {
  const auto scores = assign_badges(read_scores_csv(s.read(kScores)), s.cfg().badge_policy());
  std::map<std::string, std::string> inputs;
  json config = json::object();
  if (const auto* rec = s.ws().record(kScores)) {
    inputs = (*rec)["inputs"].get<std::map<std::string, std::string>>();
    config = (*rec)["config"];
  }
  s.ws().write_artifact(kScores, write_scores_csv(scores), inputs, config, {{"badge_policy", policy_json(s.cfg())}});
  report_scores(s, scores);
}

void cmd_sample(Session& s, const Flags& f) {
  const auto net = s.network();
  const auto scores = read_scores_csv(s.read(kScores));
  const auto eligible = eligible_respondents(net, static_cast<std::size_t>(s.cfg().min_collaborators));
  std::string respondent = f.respondent;
  if (respondent.empty()) {
    if (eligible.empty()) throw SamplingError("no contributor has enough collaborators to be a respondent");
    respondent = eligible.front();
  } else if (std::find(eligible.begin(), eligible.end(), respondent) == eligible.end()) {
    throw SamplingError("respondent '" + respondent + "' has fewer than " +
                        std::to_string(s.cfg().min_collaborators) + " collaborators");
  }
  const auto plan = stratified_sample(net, scores, respondent, s.cfg().seed);
  s.ws().write_artifact(kSample, sample_plan_json(plan), s.inputs({kNetwork, kScores}),
                        s.derived_config({kNetwork, kScores}, {"seed", "min_collaborators"}));
  s.out() << "sampled 10 contributors for " << respondent << " (" << eligible.size() << " eligible respondents)\n";
}

void cmd_fit(Session& s, const Flags& f) {
  std::string responses_text;
  std::map<std::string, std::string> inputs;
  if (!f.responses.empty()) {
    responses_text = read_file(f.responses);
    inputs["--responses"] = sha256_hex(responses_text);
  } else {
    responses_text = s.read(kResponses);
    inputs = s.inputs({kResponses});
  }
  const auto scores = read_scores_csv(s.read(kScores));
  inputs.merge(s.inputs({kScores}));

  const std::vector<std::string> all(kMeasureNames.begin(), kMeasureNames.end());
  const auto frame = build_frame(read_responses_csv(responses_text), scores, all);
  ReviewModelOptions options;
  options.vif_threshold = s.cfg().vif_threshold;
  options.variance_threshold = s.cfg().variance_threshold;
  const auto model = fit_review_model(frame, options);
  s.ws().write_artifact(kModel, model_json(model), inputs,
                        s.derived_config({kScores}, {"vif_threshold", "variance_threshold"}));

  s.out() << "mixed model: " << model.fit.n_obs << " observations, " << model.fit.n_groups << " contributors\n";
  for (std::size_t i = 0; i < model.fit.columns.size(); ++i) {
    s.out() << "  " << std::left << std::setw(12) << model.fit.columns[i] << std::right << " beta "
            << fixed(model.fit.beta(static_cast<Eigen::Index>(i))) << " se "
            << fixed(model.fit.se(static_cast<Eigen::Index>(i))) << "\n";
  }
  if (!model.vif.dropped.empty()) {
    s.out() << "  dropped by VIF:";
    for (const auto& [name, _] : model.vif.dropped) s.out() << " " << name;
    s.out() << "\n";
  }
  s.out() << "  R2m " << fixed(model.r2.r2m) << ", R2c " << fixed(model.r2.r2c) << "\n";
  for (const auto& w : model.fit.warnings) s.out() << "  warning: " << w << "\n";
}

void cmd_simulate(Session& s, const Flags& f) {
  const auto& c = s.cfg();
  SynthNetworkSpec spec;
  spec.n = c.sim_vertices;
  spec.k = c.sim_lattice_degree;
  spec.p_rewire = c.sim_rewire;
  spec.weight_max = c.sim_weight_max;
  spec.seed = c.seed;
  const auto net = generate_network(spec);
  const json net_config =
      subset(s.cfg_json(), {"sim_vertices", "sim_lattice_degree", "sim_rewire", "sim_weight_max", "seed"});
  s.ws().write_artifact(kNetwork, export_graph(net, GraphFormat::GraphML), {}, net_config);

  const auto table = centrality_table(net, c.centrality(f.threads));
  SynthResponseSpec rspec;
  rspec.measures = {"closeness", "betweenness", "eigenvector", "pagerank"};
  rspec.true_beta = {2.0, 0.8, 0.3, -0.4, -0.2};
  rspec.sigma_alpha = 0.5;
  rspec.sigma_eps = 0.7;
  rspec.responses_per_contributor = c.sim_responses_per_contributor;
  rspec.rounding = ResponseRounding::Clamped1To4;
  rspec.seed = c.seed;
  const auto responses = frame_to_responses(synth_responses(net, table, rspec));
  json resp_config = net_config;
  resp_config.update(subset(s.cfg_json(), {"sim_responses_per_contributor", "distance_transform", "damping"}));
  s.ws().write_artifact(kResponses, write_responses_csv(responses), s.inputs({kNetwork}), resp_config);
  s.out() << "simulated " << net.vertex_count() << " contributors, " << net.edge_count() << " edges, "
          << responses.size() << " responses\n";
}

void cmd_analyze(Session& s, const Flags& f) {
  if (f.contingency.empty() == f.reliability.empty()) {
    throw ValidationError("analyze requires exactly one of --contingency or --reliability");
  }
  ordered_json j;
  std::map<std::string, std::string> inputs;
  if (!f.contingency.empty()) {
    const auto text = read_file(f.contingency);
    inputs["--contingency"] = sha256_hex(text);
    const auto r = chi_squared_independence(read_contingency_csv(text));
    j["test"] = "chi_squared_independence";
    j["statistic"] = r.statistic;
    j["df"] = r.df;
    j["p"] = r.p;
    s.out() << "X^2 = " << fixed(r.statistic) << ", df = " << r.df << ", p = " << std::setprecision(4) << r.p << "\n";
  } else {
    const auto text = read_file(f.reliability);
    inputs["--reliability"] = sha256_hex(text);
    const double alpha = krippendorff_alpha(read_reliability_csv(text));
    j["test"] = "krippendorff_alpha_nominal";
    j["alpha"] = alpha;
    s.out() << "Krippendorff's alpha (nominal) = " << fixed(alpha) << "\n";
  }
  s.ws().write_artifact("analysis.json", j.dump(2) + "\n", inputs, json::object());
}

void cmd_export(Session& s, const Flags& f) {
  const auto format = parse_graph_format(f.format);
  const auto net = s.network();
  const auto text = export_graph(net, format);
  if (f.output == "-") {
    s.out() << text;
    return;
  }
  if (!f.output.empty()) {
    write_file_atomic(f.output, text);
    s.out() << "wrote " << f.output << "\n";
    return;
  }
  const std::string name = format == GraphFormat::GraphML ? "network.export.graphml"
                           : format == GraphFormat::Dot   ? "network.dot"
                                                          : "network.edges.csv";
  s.ws().write_artifact(name, text, s.inputs({kNetwork}), s.derived_config({kNetwork}, {}));
  s.out() << "wrote " << s.ws().path(name).string() << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"repnet: contributor reputation from developer collaboration networks"};
  app.fallthrough();
  app.require_subcommand(1);

  Flags flags;
  Config cli;  // flag values; applied only when given
  std::string badge_quantile_text;
  app.add_option("--out", flags.out, "Workspace directory")->capture_default_str();
  app.add_flag("--force", flags.force, "Reuse artifacts even when their provenance is stale");
  app.add_option("--threads", flags.threads, "Worker threads for per-source graph passes")->capture_default_str();
  auto* o_from = app.add_option("--from", cli.from, "Window start (RFC 3339, inclusive)");
  auto* o_to = app.add_option("--to", cli.to, "Window end (RFC 3339, exclusive)");
  auto* o_window = app.add_option("--window-days", cli.window_days, "Co-edition window in days");
  auto* o_transform = app.add_option("--distance-transform", cli.distance_transform, "inverse or raw")
                          ->check(CLI::IsMember({"inverse", "raw"}));
  auto* o_damping = app.add_option("--damping", cli.damping, "PageRank damping factor");
  auto* o_vif = app.add_option("--vif-threshold", cli.vif_threshold, "Drop predictors above this VIF");
  auto* o_var = app.add_option("--variance-threshold", cli.variance_threshold, "log1p columns above this variance");
  auto* o_bq = app.add_option("--badge-quantile", cli.badge_quantile, "Badge the top aggregates at this quantile");
  auto* o_bt = app.add_option("--badge-threshold", cli.badge_threshold, "Badge aggregates at or above this value");
  auto* o_minc = app.add_option("--min-collaborators", cli.min_collaborators, "Respondent eligibility threshold");
  auto* o_seed = app.add_option("--seed", cli.seed, "Seed for Louvain, sampling and simulation");
  auto* o_n = app.add_option("--vertices", cli.sim_vertices, "simulate: contributor count");
  auto* o_k = app.add_option("--lattice-degree", cli.sim_lattice_degree, "simulate: even ring-lattice degree");
  auto* o_p = app.add_option("--rewire", cli.sim_rewire, "simulate: rewiring probability");
  auto* o_w = app.add_option("--weight-max", cli.sim_weight_max, "simulate: largest edge total");
  auto* o_rpc = app.add_option("--responses-per-contributor", cli.sim_responses_per_contributor,
                               "simulate: responses per contributor");
  o_bq->excludes(o_bt);

  auto* ingest = app.add_subcommand("ingest", "Parse, bot-filter and window an event log");
  ingest->add_option("--events", flags.events, "Line-delimited JSON event log")->required();
  app.add_subcommand("build", "Build the collaboration network");
  app.add_subcommand("stats", "Structural summary and Louvain communities");
  app.add_subcommand("centrality", "Five centrality measures per contributor");
  app.add_subcommand("score", "Aggregate reputation scores and badges");
  app.add_subcommand("badge", "Re-apply a badge policy to existing scores");
  auto* sample = app.add_subcommand("sample", "Stratified contributor sample for one respondent");
  sample->add_option("--respondent", flags.respondent, "Respondent login (default: first eligible)");
  auto* fit = app.add_subcommand("fit", "Random-intercept model of review level on centrality");
  fit->add_option("--responses", flags.responses, "CSV respondent_id,contributor_id,level");
  app.add_subcommand("simulate", "Synthetic small-world network and survey responses");
  auto* analyze = app.add_subcommand("analyze", "Chi-squared test or Krippendorff's alpha");
  analyze->add_option("--contingency", flags.contingency, "CSV contingency table");
  analyze->add_option("--reliability", flags.reliability, "CSV coders x units");
  auto* exp = app.add_subcommand("export", "Write the network as graphml, dot or edge-csv");
  exp->add_option("--format", flags.format, "graphml, dot or edge-csv")->capture_default_str();
  exp->add_option("--output", flags.output, "Destination file, '-' for standard output");

  std::vector<std::string> argv_store{"repnet"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    Config cfg;
    const auto config_path = std::filesystem::path(flags.out) / kConfig;
    if (std::filesystem::exists(config_path)) {
      auto j = json::parse(read_file(config_path), nullptr, false);
      if (j.is_discarded()) throw ValidationError("'" + config_path.string() + "' is not valid JSON");
      cfg = Config::from_json(j);
    }
    auto apply = [](CLI::Option* opt, auto& dst, const auto& src) {
      if (opt->count() > 0) dst = src;
    };
    apply(o_from, cfg.from, cli.from);
    apply(o_to, cfg.to, cli.to);
    apply(o_window, cfg.window_days, cli.window_days);
    apply(o_transform, cfg.distance_transform, cli.distance_transform);
    apply(o_damping, cfg.damping, cli.damping);
    apply(o_vif, cfg.vif_threshold, cli.vif_threshold);
    apply(o_var, cfg.variance_threshold, cli.variance_threshold);
    if (o_bq->count() > 0) {
      cfg.badge_mode = "quantile";
      cfg.badge_quantile = cli.badge_quantile;
    }
    if (o_bt->count() > 0) {
      cfg.badge_mode = "absolute";
      cfg.badge_threshold = cli.badge_threshold;
    }
    apply(o_minc, cfg.min_collaborators, cli.min_collaborators);
    apply(o_seed, cfg.seed, cli.seed);
    apply(o_n, cfg.sim_vertices, cli.sim_vertices);
    apply(o_k, cfg.sim_lattice_degree, cli.sim_lattice_degree);
    apply(o_p, cfg.sim_rewire, cli.sim_rewire);
    apply(o_w, cfg.sim_weight_max, cli.sim_weight_max);
    apply(o_rpc, cfg.sim_responses_per_contributor, cli.sim_responses_per_contributor);
    cfg.validate();
    if (flags.threads < 1) throw ValidationError("--threads must be at least 1");

    Session session(flags, cfg, out);
    const auto* sub = app.get_subcommands().front();
    const auto& name = sub->get_name();
    if (name == "ingest") cmd_ingest(session, flags);
    else if (name == "build") cmd_build(session, flags);
    else if (name == "stats") cmd_stats(session, flags);
    else if (name == "centrality") cmd_centrality(session, flags);
    else if (name == "score") cmd_score(session, flags);
    else if (name == "badge") cmd_badge(session, flags);
    else if (name == "sample") cmd_sample(session, flags);
    else if (name == "fit") cmd_fit(session, flags);
    else if (name == "simulate") cmd_simulate(session, flags);
    else if (name == "analyze") cmd_analyze(session, flags);
    else if (name == "export") cmd_export(session, flags);
    session.save_config();
    return kExitOk;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace repnet
