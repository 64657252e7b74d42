#include <optional>
#include <sstream>

#include "repnet/csv.hpp"
#include "repnet/error.hpp"
#include "repnet/network.hpp"

namespace repnet {
namespace {

constexpr std::string_view kEdgeCsvHeader = "a,b,total,coedit,review";

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string xml_unescape(std::string_view s) {
  static constexpr std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    bool matched = false;
    if (s[i] == '&') {
      for (auto [entity, c] : kEntities) {
        if (s.substr(i, entity.size()) == entity) {
          out.push_back(c);
          i += entity.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out.push_back(s[i++]);
  }
  return out;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string to_graphml(const DeveloperNetwork& net) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n"
      << "  <key id=\"coedit\" for=\"edge\" attr.name=\"coedit\" attr.type=\"long\"/>\n"
      << "  <key id=\"review\" for=\"edge\" attr.name=\"review\" attr.type=\"long\"/>\n"
      << "  <graph id=\"developers\" edgedefault=\"undirected\">\n";
  for (const auto& v : net.vertices()) out << "    <node id=\"" << xml_escape(v) << "\"/>\n";
  for (const auto& [pair, w] : net.edges()) {
    out << "    <edge source=\"" << xml_escape(pair.first) << "\" target=\"" << xml_escape(pair.second) << "\">\n"
        << "      <data key=\"weight\">" << w.total() << "</data>\n"
        << "      <data key=\"coedit\">" << w.coedit << "</data>\n"
        << "      <data key=\"review\">" << w.review << "</data>\n"
        << "    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

std::string to_dot(const DeveloperNetwork& net) {
  std::ostringstream out;
  out << "graph developers {\n";
  for (const auto& v : net.vertices()) out << "  " << dot_quote(v) << ";\n";
  for (const auto& [pair, w] : net.edges()) {
    out << "  " << dot_quote(pair.first) << " -- " << dot_quote(pair.second) << " [weight=" << w.total()
        << ", coedit=" << w.coedit << ", review=" << w.review << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_edge_csv(const DeveloperNetwork& net) {
  std::string out(kEdgeCsvHeader);
  out.push_back('\n');
  for (const auto& [pair, w] : net.edges()) {
    out += csv::join({pair.first, pair.second, std::to_string(w.total()), std::to_string(w.coedit),
                      std::to_string(w.review)});
    out.push_back('\n');
  }
  return out;
}

// Value of attribute `name` inside the tag text, or nullopt.
std::optional<std::string> attribute(std::string_view tag, std::string_view name) {
  const std::string needle = " " + std::string(name) + "=\"";
  auto pos = tag.find(needle);
  if (pos == std::string_view::npos) return std::nullopt;
  pos += needle.size();
  auto end = tag.find('"', pos);
  if (end == std::string_view::npos) return std::nullopt;
  return xml_unescape(tag.substr(pos, end - pos));
}

std::int64_t require_count(std::string_view text, std::string_view what) {
  try {
    auto v = csv::parse_int(text);
    if (v < 0) throw ValidationError("");
    return v;
  } catch (const ValidationError&) {
    throw ValidationError("invalid " + std::string(what) + " count '" + std::string(text) + "'");
  }
}

}  // namespace

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "graphml") return GraphFormat::GraphML;
  if (name == "dot") return GraphFormat::Dot;
  if (name == "edge-csv") return GraphFormat::EdgeCsv;
  throw ValidationError("unknown graph format '" + std::string(name) + "' (expected graphml, dot or edge-csv)");
}

std::string export_graph(const DeveloperNetwork& net, GraphFormat format) {
  switch (format) {
    case GraphFormat::GraphML: return to_graphml(net);
    case GraphFormat::Dot: return to_dot(net);
    case GraphFormat::EdgeCsv: return to_edge_csv(net);
  }
  throw ValidationError("unknown graph format");
}

DeveloperNetwork import_edge_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty() || csv::join(rows.front()) != kEdgeCsvHeader) {
    throw ValidationError("edge csv must start with header '" + std::string(kEdgeCsvHeader) + "'");
  }
  DeveloperNetwork net;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 5) throw ValidationError("edge csv row " + std::to_string(i + 1) + " needs 5 fields");
    const auto total = require_count(r[2], "total");
    const auto coedit = require_count(r[3], "coedit");
    const auto review = require_count(r[4], "review");
    if (total != coedit + review || total == 0) {
      throw ValidationError("edge csv row " + std::to_string(i + 1) + ": total must equal coedit + review > 0");
    }
    net.add_collaboration(r[0], r[1], coedit, review);
  }
  return net;
}

DeveloperNetwork import_graphml(std::string_view text) {
  DeveloperNetwork net;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string_view::npos) {
    auto close = text.find('>', pos);
    if (close == std::string_view::npos) throw ValidationError("unterminated GraphML tag");
    auto tag = text.substr(pos, close - pos + 1);
    if (tag.starts_with("<node ")) {
      auto id = attribute(tag, "id");
      if (!id) throw ValidationError("GraphML node without id");
      net.add_vertex(*id);
    } else if (tag.starts_with("<edge ")) {
      auto source = attribute(tag, "source");
      auto target = attribute(tag, "target");
      if (!source || !target) throw ValidationError("GraphML edge without source/target");
      const auto end = text.find("</edge>", close);
      if (end == std::string_view::npos) throw ValidationError("GraphML edge is not closed");
      auto body = text.substr(close + 1, end - close - 1);
      std::optional<std::int64_t> weight, coedit, review;
      std::size_t dpos = 0;
      while ((dpos = body.find("<data ", dpos)) != std::string_view::npos) {
        auto dclose = body.find('>', dpos);
        auto dend = body.find("</data>", dclose);
        if (dclose == std::string_view::npos || dend == std::string_view::npos) {
          throw ValidationError("malformed GraphML data element");
        }
        auto key = attribute(body.substr(dpos, dclose - dpos + 1), "key");
        auto value = body.substr(dclose + 1, dend - dclose - 1);
        if (key == "weight") weight = require_count(value, "weight");
        if (key == "coedit") coedit = require_count(value, "coedit");
        if (key == "review") review = require_count(value, "review");
        dpos = dend;
      }
      if (!coedit || !review) throw ValidationError("GraphML edge lacks coedit/review data");
      if (weight && *weight != *coedit + *review) {
        throw ValidationError("GraphML edge weight disagrees with coedit + review");
      }
      if (*coedit + *review == 0) throw ValidationError("GraphML edge with zero weight");
      net.add_collaboration(*source, *target, *coedit, *review);
      pos = end + std::string_view("</edge>").size();
      continue;
    }
    pos = close + 1;
  }
  return net;
}

}  // namespace repnet
