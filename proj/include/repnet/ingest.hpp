#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repnet/timeutil.hpp"

namespace repnet {

/// True iff the login carries the platform's bot suffix "[bot]".
bool is_bot_login(std::string_view login);

struct Actor {
  explicit Actor(std::string login);

  std::string login;
  bool is_bot;
};

struct CommitEvent {
  std::string sha;
  std::string repo;
  std::string author;
  Timestamp timestamp{};
  std::vector<std::string> files;  // sorted, unique
  std::optional<std::int64_t> pr_number;
  std::optional<std::string> merged_by;
  std::vector<std::string> approvals;  // sorted, unique

  bool operator==(const CommitEvent&) const = default;
};

/// A pull request that was never merged but received a review from, or was
/// closed by, someone other than its author.
struct RejectedPrEvent {
  std::int64_t pr_number = 0;
  std::string repo;
  std::string author;
  std::string closer_or_reviewer;
  Timestamp timestamp{};

  bool operator==(const RejectedPrEvent&) const = default;
};

struct IngestDiagnostics {
  std::int64_t malformed = 0;
  std::int64_t unknown_kind = 0;
  std::int64_t duplicate_sha = 0;
  std::int64_t self_closed_pr = 0;
  std::int64_t bot = 0;
  std::int64_t out_of_window = 0;
  /// Bot logins removed from approvals / merged_by of retained commits.
  std::int64_t bot_reviewers_removed = 0;

  std::int64_t dropped() const {
    return malformed + unknown_kind + duplicate_sha + self_closed_pr + bot + out_of_window;
  }
  bool operator==(const IngestDiagnostics&) const = default;
};

struct EventLog {
  std::vector<CommitEvent> commits;
  std::vector<RejectedPrEvent> rejected_prs;
  /// Half-open retention window; unbounded until a window filter is applied.
  Timestamp window_start = Timestamp::min();
  Timestamp window_end = Timestamp::max();
  IngestDiagnostics diagnostics;

  /// Compares events only, ignoring window bounds and diagnostics.
  bool same_events(const EventLog& other) const {
    return commits == other.commits && rejected_prs == other.rejected_prs;
  }
};

enum class ReviewStatus { Reviewed, Unreviewed };

/// Reads line-delimited JSON records. Malformed lines and unknown kinds are
/// dropped and tallied; more than 50% malformed lines raises
/// CorruptInputError, an unreadable stream raises InputError.
EventLog parse_event_log(std::istream& in);
EventLog read_event_log_file(const std::string& path);

/// Serializes retained events in the same line-delimited schema.
void write_event_log(std::ostream& out, const EventLog& log);
std::string to_jsonl(const EventLog& log);

EventLog filter_bots(const EventLog& log);
EventLog filter_window(const EventLog& log, Timestamp start, Timestamp end);
/// Bot filter followed by the half-open window [start, end).
EventLog filter_actors_and_window(const EventLog& log, Timestamp start, Timestamp end);

/// Reviewed iff someone other than the author approved the pull request or
/// merged the commit.
ReviewStatus classify_review_status(const CommitEvent& commit);

struct ReviewTally {
  std::int64_t reviewed = 0;
  std::int64_t unreviewed = 0;
};
ReviewTally tally_review_status(const EventLog& log);

}  // namespace repnet
