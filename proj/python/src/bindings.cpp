#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "repnet/centrality.hpp"
#include "repnet/error.hpp"
#include "repnet/graphstats.hpp"
#include "repnet/ingest.hpp"
#include "repnet/lmm.hpp"
#include "repnet/network.hpp"
#include "repnet/pipeline.hpp"
#include "repnet/reputation.hpp"
#include "repnet/statkit.hpp"
#include "repnet/synth.hpp"

namespace py = pybind11;
using namespace repnet;

namespace {

constexpr const char* kFrom = "2020-10-01T00:00:00Z";
constexpr const char* kTo = "2022-10-01T00:00:00Z";

EventLog load_events(const std::string& text, const std::string& start, const std::string& end) {
  std::istringstream in(text);
  return filter_actors_and_window(parse_event_log(in), parse_rfc3339(start), parse_rfc3339(end));
}

CentralityConfig centrality_config(const std::string& transform, double damping, unsigned threads) {
  CentralityConfig c;
  c.distance_transform = parse_distance_transform(transform);
  c.pagerank_damping = damping;
  c.threads = threads;
  return c;
}

std::vector<ReputationScore> score_network(const DeveloperNetwork& net, const std::string& transform, double damping,
                                           double badge_quantile, unsigned threads) {
  return assign_badges(aggregate_score(centrality_table(net, centrality_config(transform, damping, threads))),
                       BadgePolicy::at_quantile(badge_quantile));
}

py::object loads(const std::string& json_text) { return py::module_::import("json").attr("loads")(json_text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Contributor reputation from developer collaboration networks";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base);
  py::register_exception<InputError>(m, "InputError", base);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base);

  py::class_<DeveloperNetwork>(m, "Network")
      .def(py::init<>())
      .def("add_vertex", &DeveloperNetwork::add_vertex)
      .def("add_collaboration", &DeveloperNetwork::add_collaboration, py::arg("a"), py::arg("b"),
           py::arg("coedit"), py::arg("review"))
      .def("vertices", [](const DeveloperNetwork& n) {
        return std::vector<std::string>(n.vertices().begin(), n.vertices().end());
      })
      .def("edges",
           [](const DeveloperNetwork& n) {
             std::vector<std::tuple<std::string, std::string, std::int64_t, std::int64_t>> out;
             for (const auto& [pair, w] : n.edges()) out.emplace_back(pair.first, pair.second, w.coedit, w.review);
             return out;
           },
           "List of (a, b, coedit, review) with a < b.")
      .def("export", [](const DeveloperNetwork& n, const std::string& format) {
        return export_graph(n, parse_graph_format(format));
      }, py::arg("format") = "graphml")
      .def_static("from_graphml", [](const std::string& text) { return import_graphml(text); })
      .def_static("from_edge_csv", [](const std::string& text) { return import_edge_csv(text); })
      .def("__len__", &DeveloperNetwork::vertex_count)
      .def("__eq__", [](const DeveloperNetwork& a, const DeveloperNetwork& b) { return a == b; })
      .def("__repr__", [](const DeveloperNetwork& n) {
        return "<Network " + std::to_string(n.vertex_count()) + " vertices, " + std::to_string(n.edge_count()) +
               " edges>";
      });

  m.def(
      "parse_events",
      [](const std::string& text, const std::string& start, const std::string& end) {
        const auto log = load_events(text, start, end);
        const auto tally = tally_review_status(log);
        const auto& d = log.diagnostics;
        py::dict out;
        out["commits"] = log.commits.size();
        out["rejected_prs"] = log.rejected_prs.size();
        out["reviewed"] = tally.reviewed;
        out["unreviewed"] = tally.unreviewed;
        out["dropped"] = d.dropped();
        out["jsonl"] = to_jsonl(log);
        return out;
      },
      py::arg("text"), py::arg("start") = kFrom, py::arg("end") = kTo,
      "Parse a JSON-lines event log, drop bots and keep events in [start, end).");

  m.def(
      "build_network",
      [](const std::string& text, const std::string& start, const std::string& end, int window_days) {
        return build_network(load_events(text, start, end), window_days);
      },
      py::arg("text"), py::arg("start") = kFrom, py::arg("end") = kTo,
      py::arg("window_days") = kDefaultCoeditWindowDays);

  m.def(
      "generate_network",
      [](std::size_t n, std::size_t k, double p, std::int64_t weight_max, std::uint64_t seed) {
        return generate_network(SynthNetworkSpec{n, k, p, weight_max, seed});
      },
      py::arg("n") = 200, py::arg("k") = 6, py::arg("p_rewire") = 0.1, py::arg("weight_max") = 5,
      py::arg("seed") = 0);

  m.def(
      "structural_summary",
      [](const DeveloperNetwork& net, unsigned threads) {
        const auto s = structural_summary(net, threads);
        py::dict out;
        out["vertex_count"] = s.vertex_count;
        out["edge_count"] = s.edge_count;
        out["component_count"] = s.component_count;
        out["largest_component_size"] = s.largest_component_size;
        out["component_sizes"] = s.component_sizes;
        out["density"] = s.density;
        out["avg_clustering"] = s.avg_clustering;
        out["avg_shortest_path_lcc"] = s.avg_shortest_path_lcc ? py::cast(*s.avg_shortest_path_lcc) : py::none();
        return out;
      },
      py::arg("network"), py::arg("threads") = 1);

  m.def(
      "louvain",
      [](const DeveloperNetwork& net, std::uint64_t seed, double resolution) {
        const auto p = louvain(net, seed, resolution);
        return py::make_tuple(p.assignment, p.modularity);
      },
      py::arg("network"), py::arg("seed") = 0, py::arg("resolution") = 1.0,
      "Returns (assignment, modularity).");

  m.def(
      "centrality",
      [](const DeveloperNetwork& net, const std::string& transform, double damping, unsigned threads) {
        const auto t = centrality_table(net, centrality_config(transform, damping, threads));
        py::dict out;
        out["contributor"] = t.contributors;
        for (std::size_t i = 0; i < kMeasureNames.size(); ++i) out[py::str(std::string(kMeasureNames[i]))] = t.column(i);
        return out;
      },
      py::arg("network"), py::arg("distance_transform") = "inverse", py::arg("damping") = 0.85,
      py::arg("threads") = 1, "Column-oriented table of the five centrality measures.");

  m.def(
      "scores",
      [](const DeveloperNetwork& net, const std::string& transform, double damping, double badge_quantile,
         unsigned threads) {
        py::list out;
        for (const auto& s : score_network(net, transform, damping, badge_quantile, threads)) {
          py::dict row;
          row["contributor"] = s.contributor;
          for (std::size_t i = 0; i < kMeasureNames.size(); ++i) {
            row[py::str(std::string(kMeasureNames[i]))] = s.normalized[i];
          }
          row["aggregate"] = s.aggregate;
          row["badge"] = s.badge;
          out.append(row);
        }
        return out;
      },
      py::arg("network"), py::arg("distance_transform") = "inverse", py::arg("damping") = 0.85,
      py::arg("badge_quantile") = 0.9, py::arg("threads") = 1);

  m.def(
      "stratified_sample",
      [](const DeveloperNetwork& net, const std::string& respondent, std::uint64_t seed) {
        return loads(sample_plan_json(stratified_sample(net, score_network(net, "inverse", 0.85, 0.9, 1), respondent, seed)));
      },
      py::arg("network"), py::arg("respondent"), py::arg("seed") = 0);

  m.def(
      "fit_review_model",
      [](const DeveloperNetwork& net, const std::vector<std::tuple<std::string, std::string, int>>& responses,
         double vif_threshold, double variance_threshold) {
        std::vector<ResponseRecord> records;
        for (const auto& [r, c, level] : responses) records.push_back({r, c, level});
        const std::vector<std::string> all(kMeasureNames.begin(), kMeasureNames.end());
        ReviewModelOptions options;
        options.vif_threshold = vif_threshold;
        options.variance_threshold = variance_threshold;
        const auto frame = build_frame(records, score_network(net, "inverse", 0.85, 0.9, 1), all);
        return loads(model_json(fit_review_model(frame, options)));
      },
      py::arg("network"), py::arg("responses"), py::arg("vif_threshold") = 5.0, py::arg("variance_threshold") = 0.2,
      "Random-intercept model of (respondent, contributor, level) responses on normalized centrality.");

  m.def(
      "chi_squared",
      [](const std::vector<std::vector<std::int64_t>>& counts) {
        const auto r = chi_squared_independence(ContingencyTable{counts});
        return py::make_tuple(r.statistic, r.df, r.p);
      },
      py::arg("counts"), "Returns (statistic, df, p).");

  m.def(
      "krippendorff_alpha",
      [](const std::vector<std::vector<std::optional<std::string>>>& codes) {
        return krippendorff_alpha(ReliabilityData{codes});
      },
      py::arg("codes"), "Nominal alpha for a coders x units matrix; None marks a missing value.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs one command line; returns (exit_code, stdout, stderr).");
}
