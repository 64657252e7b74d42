#include "repnet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "repnet/error.hpp"

namespace repnet {

using nlohmann::json;
using nlohmann::ordered_json;

bool is_bot_login(std::string_view login) {
  constexpr std::string_view suffix = "[bot]";
  return login.size() >= suffix.size() && login.substr(login.size() - suffix.size()) == suffix;
}

Actor::Actor(std::string l) : login(std::move(l)), is_bot(is_bot_login(login)) {
  if (login.empty()) throw ValidationError("actor login must be non-empty");
}

namespace {

// Every helper returns nullopt when the record does not fit the schema.

std::optional<std::string> required_string(const json& rec, const char* key) {
  auto it = rec.find(key);
  if (it == rec.end() || !it->is_string()) return std::nullopt;
  auto s = it->get<std::string>();
  if (s.empty()) return std::nullopt;
  return s;
}

std::optional<Timestamp> required_time(const json& rec, const char* key) {
  auto s = required_string(rec, key);
  if (!s) return std::nullopt;
  try {
    return parse_rfc3339(*s);
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

std::optional<std::vector<std::string>> string_set(const json& rec, const char* key, bool required) {
  auto it = rec.find(key);
  if (it == rec.end() || it->is_null()) {
    if (required) return std::nullopt;
    return std::vector<std::string>{};
  }
  if (!it->is_array()) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string() || v.get_ref<const std::string&>().empty()) return std::nullopt;
    out.push_back(v.get<std::string>());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<CommitEvent> parse_commit(const json& rec) {
  CommitEvent c;
  auto sha = required_string(rec, "sha");
  auto repo = required_string(rec, "repo");
  auto author = required_string(rec, "author");
  auto ts = required_time(rec, "ts");
  auto files = string_set(rec, "files", true);
  auto approvals = string_set(rec, "approvals", false);
  if (!sha || !repo || !author || !ts || !files || !approvals) return std::nullopt;
  c.sha = std::move(*sha);
  c.repo = std::move(*repo);
  c.author = std::move(*author);
  c.timestamp = *ts;
  c.files = std::move(*files);
  c.approvals = std::move(*approvals);

  if (auto it = rec.find("pr"); it != rec.end() && !it->is_null()) {
    if (!it->is_number_integer()) return std::nullopt;
    c.pr_number = it->get<std::int64_t>();
  }
  if (auto it = rec.find("merged_by"); it != rec.end() && !it->is_null()) {
    if (!it->is_string() || it->get_ref<const std::string&>().empty()) return std::nullopt;
    c.merged_by = it->get<std::string>();
  }
  return c;
}

std::optional<RejectedPrEvent> parse_rejected(const json& rec) {
  auto repo = required_string(rec, "repo");
  auto author = required_string(rec, "author");
  auto actor = required_string(rec, "actor");
  auto ts = required_time(rec, "ts");
  auto pr = rec.find("pr");
  if (!repo || !author || !actor || !ts || pr == rec.end() || !pr->is_number_integer()) {
    return std::nullopt;
  }
  RejectedPrEvent e;
  e.pr_number = pr->get<std::int64_t>();
  e.repo = std::move(*repo);
  e.author = std::move(*author);
  e.closer_or_reviewer = std::move(*actor);
  e.timestamp = *ts;
  return e;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

EventLog parse_event_log(std::istream& in) {
  if (!in.good()) throw InputError("event stream is not readable");

  EventLog log;
  std::unordered_set<std::string> seen_sha;
  std::int64_t records = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    ++records;
    json rec = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (rec.is_discarded() || !rec.is_object()) {
      ++log.diagnostics.malformed;
      continue;
    }
    auto kind = rec.find("kind");
    if (kind == rec.end() || !kind->is_string()) {
      ++log.diagnostics.malformed;
      continue;
    }
    const auto& k = kind->get_ref<const std::string&>();
    if (k == "commit") {
      auto c = parse_commit(rec);
      if (!c) {
        ++log.diagnostics.malformed;
      } else if (!seen_sha.insert(c->sha).second) {
        ++log.diagnostics.duplicate_sha;
      } else {
        log.commits.push_back(std::move(*c));
      }
    } else if (k == "pr_rejected") {
      auto e = parse_rejected(rec);
      if (!e) {
        ++log.diagnostics.malformed;
      } else if (e->author == e->closer_or_reviewer) {
        ++log.diagnostics.self_closed_pr;
      } else {
        log.rejected_prs.push_back(std::move(*e));
      }
    } else {
      ++log.diagnostics.unknown_kind;
    }
  }
  if (in.bad()) throw InputError("error while reading event stream");
  if (records > 0 && 2 * log.diagnostics.malformed > records) {
    throw CorruptInputError(std::to_string(log.diagnostics.malformed) + " of " + std::to_string(records) +
                            " event records are malformed");
  }
  return log;
}

EventLog read_event_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open event log '" + path + "'");
  return parse_event_log(in);
}

void write_event_log(std::ostream& out, const EventLog& log) {
  for (const auto& c : log.commits) {
    ordered_json rec;
    rec["kind"] = "commit";
    rec["sha"] = c.sha;
    rec["repo"] = c.repo;
    rec["author"] = c.author;
    rec["ts"] = format_rfc3339(c.timestamp);
    rec["files"] = c.files;
    rec["pr"] = c.pr_number ? ordered_json(*c.pr_number) : ordered_json(nullptr);
    rec["merged_by"] = c.merged_by ? ordered_json(*c.merged_by) : ordered_json(nullptr);
    rec["approvals"] = c.approvals;
    out << rec.dump() << '\n';
  }
  for (const auto& e : log.rejected_prs) {
    ordered_json rec;
    rec["kind"] = "pr_rejected";
    rec["repo"] = e.repo;
    rec["pr"] = e.pr_number;
    rec["author"] = e.author;
    rec["actor"] = e.closer_or_reviewer;
    rec["ts"] = format_rfc3339(e.timestamp);
    out << rec.dump() << '\n';
  }
}

std::string to_jsonl(const EventLog& log) {
  std::ostringstream out;
  write_event_log(out, log);
  return out.str();
}

EventLog filter_bots(const EventLog& log) {
  EventLog out;
  out.window_start = log.window_start;
  out.window_end = log.window_end;
  out.diagnostics = log.diagnostics;
  for (const auto& c : log.commits) {
    if (is_bot_login(c.author)) {
      ++out.diagnostics.bot;
      continue;
    }
    CommitEvent kept = c;
    auto removed = std::erase_if(kept.approvals, [](const std::string& l) { return is_bot_login(l); });
    if (kept.merged_by && is_bot_login(*kept.merged_by)) {
      kept.merged_by.reset();
      ++removed;
    }
    out.diagnostics.bot_reviewers_removed += static_cast<std::int64_t>(removed);
    out.commits.push_back(std::move(kept));
  }
  for (const auto& e : log.rejected_prs) {
    if (is_bot_login(e.author) || is_bot_login(e.closer_or_reviewer)) {
      ++out.diagnostics.bot;
      continue;
    }
    out.rejected_prs.push_back(e);
  }
  return out;
}

EventLog filter_window(const EventLog& log, Timestamp start, Timestamp end) {
  if (!(start < end)) throw ValidationError("window start must precede window end");
  auto inside = [&](Timestamp t) { return start <= t && t < end; };
  EventLog out;
  out.window_start = start;
  out.window_end = end;
  out.diagnostics = log.diagnostics;
  for (const auto& c : log.commits) {
    if (inside(c.timestamp)) {
      out.commits.push_back(c);
    } else {
      ++out.diagnostics.out_of_window;
    }
  }
  for (const auto& e : log.rejected_prs) {
    if (inside(e.timestamp)) {
      out.rejected_prs.push_back(e);
    } else {
      ++out.diagnostics.out_of_window;
    }
  }
  return out;
}

EventLog filter_actors_and_window(const EventLog& log, Timestamp start, Timestamp end) {
  if (!(start < end)) throw ValidationError("window start must precede window end");
  return filter_window(filter_bots(log), start, end);
}

ReviewStatus classify_review_status(const CommitEvent& commit) {
  const bool approved_by_other = std::any_of(commit.approvals.begin(), commit.approvals.end(),
                                             [&](const std::string& a) { return a != commit.author; });
  const bool merged_by_other = commit.merged_by && *commit.merged_by != commit.author;
  return approved_by_other || merged_by_other ? ReviewStatus::Reviewed : ReviewStatus::Unreviewed;
}

ReviewTally tally_review_status(const EventLog& log) {
  ReviewTally t;
  for (const auto& c : log.commits) {
    if (classify_review_status(c) == ReviewStatus::Reviewed) {
      ++t.reviewed;
    } else {
      ++t.unreviewed;
    }
  }
  return t;
}

}  // namespace repnet
