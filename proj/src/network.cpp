#include "repnet/network.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "repnet/error.hpp"

namespace repnet {

ContributorPair make_contributor_pair(std::string_view a, std::string_view b) {
  if (a == b) throw ValidationError("self-loop on '" + std::string(a) + "' is not a collaboration");
  if (b < a) std::swap(a, b);
  return {std::string(a), std::string(b)};
}

void DeveloperNetwork::add_vertex(const std::string& login) {
  if (login.empty()) throw ValidationError("vertex login must be non-empty");
  vertices_.insert(login);
}

void DeveloperNetwork::add_collaboration(std::string_view a, std::string_view b, std::int64_t coedit,
                                         std::int64_t review) {
  if (coedit < 0 || review < 0) throw ValidationError("collaboration counts must be non-negative");
  if (coedit + review == 0) return;
  auto key = make_contributor_pair(a, b);
  add_vertex(key.first);
  add_vertex(key.second);
  auto& w = edges_[key];
  w.coedit += coedit;
  w.review += review;
}

PairCounts coedition_events(const EventLog& log, int window_days) {
  if (window_days < 1) throw ValidationError("co-edition window must be at least one day");
  const auto window = std::chrono::seconds(std::int64_t{window_days} * 86400);

  struct Touch {
    Timestamp at;
    const std::string* author;
  };
  std::unordered_map<std::string_view, std::vector<Touch>> by_file;
  for (const auto& c : log.commits) {
    for (const auto& f : c.files) by_file[f].push_back({c.timestamp, &c.author});
  }

  // Files are visited in sorted order so the result does not depend on hashing.
  std::vector<std::string_view> files;
  files.reserve(by_file.size());
  for (const auto& [f, _] : by_file) files.push_back(f);
  std::sort(files.begin(), files.end());

  PairCounts counts;
  for (auto f : files) {
    auto& touches = by_file[f];
    std::sort(touches.begin(), touches.end(), [](const Touch& x, const Touch& y) {
      return x.at != y.at ? x.at < y.at : *x.author < *y.author;
    });
    for (std::size_t i = 0; i < touches.size(); ++i) {
      for (std::size_t j = i + 1; j < touches.size() && touches[j].at - touches[i].at <= window; ++j) {
        if (*touches[i].author != *touches[j].author) {
          ++counts[make_contributor_pair(*touches[i].author, *touches[j].author)];
        }
      }
    }
  }
  return counts;
}

PairCounts review_events(const EventLog& log) {
  PairCounts counts;
  for (const auto& c : log.commits) {
    std::vector<std::string_view> reviewers;
    for (const auto& a : c.approvals) {
      if (a != c.author) reviewers.push_back(a);
    }
    if (c.merged_by && *c.merged_by != c.author &&
        std::find(c.approvals.begin(), c.approvals.end(), *c.merged_by) == c.approvals.end()) {
      reviewers.push_back(*c.merged_by);
    }
    for (auto r : reviewers) ++counts[make_contributor_pair(c.author, r)];
  }
  for (const auto& e : log.rejected_prs) {
    if (e.author == e.closer_or_reviewer) continue;
    ++counts[make_contributor_pair(e.author, e.closer_or_reviewer)];
  }
  return counts;
}

DeveloperNetwork build_network(const EventLog& log, int window_days) {
  DeveloperNetwork net;
  auto add = [&](const std::string& login) {
    if (!is_bot_login(login)) net.add_vertex(login);
  };
  for (const auto& c : log.commits) {
    add(c.author);
    for (const auto& a : c.approvals) add(a);
    if (c.merged_by) add(*c.merged_by);
  }
  for (const auto& e : log.rejected_prs) {
    add(e.author);
    add(e.closer_or_reviewer);
  }

  auto skip_bot_pair = [](const ContributorPair& p) { return is_bot_login(p.first) || is_bot_login(p.second); };
  for (const auto& [pair, n] : coedition_events(log, window_days)) {
    if (!skip_bot_pair(pair)) net.add_collaboration(pair.first, pair.second, n, 0);
  }
  for (const auto& [pair, n] : review_events(log)) {
    if (!skip_bot_pair(pair)) net.add_collaboration(pair.first, pair.second, 0, n);
  }
  return net;
}

}  // namespace repnet
