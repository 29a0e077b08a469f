// Copyright 2026 The mhd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mhd/corpus.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "mhd/preprocess.hpp"

namespace mhd {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const char* group_name(Group g) {
  switch (g) {
    case Group::kDiagnosed:
      return "diagnosed";
    case Group::kControl:
      return "control";
    case Group::kUnlabeled:
      return "unlabeled";
  }
  return "unlabeled";
}

Group parse_group(std::string_view name) {
  if (name == "diagnosed") return Group::kDiagnosed;
  if (name == "control") return Group::kControl;
  if (name == "unlabeled") return Group::kUnlabeled;
  fail(ErrorCode::kParse, "unknown group '" + std::string(name) + "'");
}

TweetStore::TweetStore(std::vector<Tweet> tweets) : tweets_(std::move(tweets)) {
  std::sort(tweets_.begin(), tweets_.end(), [](const Tweet& a, const Tweet& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.id < b.id;
  });
  by_id_.reserve(tweets_.size());
  for (std::size_t i = 0; i < tweets_.size(); ++i) {
    const Tweet& t = tweets_[i];
    if (t.text.empty()) {
      fail(ErrorCode::kInvalidArgument, "tweet '" + t.id + "' has empty text");
    }
    if (!by_id_.emplace(t.id, i).second) {
      fail(ErrorCode::kInvalidArgument, "duplicate tweet id '" + t.id + "'");
    }
    by_user_[t.user_id].push_back(i);
  }
  if (!tweets_.empty()) {
    range_ = DateRange{Date::of(tweets_.front().timestamp),
                       Date::of(tweets_.back().timestamp)};
  }
}

const Tweet* TweetStore::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &tweets_[it->second];
}

const std::vector<std::size_t>& TweetStore::user_tweets(const std::string& user_id) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = by_user_.find(user_id);
  return it == by_user_.end() ? kEmpty : it->second;
}

std::vector<std::string> TweetStore::users() const {
  std::vector<std::string> out;
  out.reserve(by_user_.size());
  for (const auto& [user, _] : by_user_) out.push_back(user);
  std::sort(out.begin(), out.end());
  return out;
}

namespace corpus {
namespace {

std::string required_string(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) fail(ErrorCode::kParse, "missing field '" + key + "'");
  if (!it->is_string()) fail(ErrorCode::kParse, "field '" + key + "' is not a string");
  return it->get<std::string>();
}

Tweet tweet_from_json(const json& obj, const FieldSchema& schema) {
  if (!obj.is_object()) fail(ErrorCode::kParse, "line is not a JSON object");
  Tweet t;
  t.id = required_string(obj, schema.id);
  t.user_id = required_string(obj, schema.user_id);
  t.timestamp = parse_timestamp(required_string(obj, schema.created_at));
  t.text = required_string(obj, schema.text);
  t.country = required_string(obj, schema.country);
  t.lang = required_string(obj, schema.lang);
  if (t.id.empty()) fail(ErrorCode::kParse, "empty field '" + schema.id + "'");
  if (t.user_id.empty()) fail(ErrorCode::kParse, "empty field '" + schema.user_id + "'");
  if (t.text.empty()) fail(ErrorCode::kParse, "empty field '" + schema.text + "'");
  return t;
}

ojson tweet_json(const Tweet& t) {
  ojson j;
  j["id"] = t.id;
  j["user_id"] = t.user_id;
  j["created_at"] = format_timestamp(t.timestamp);
  j["text"] = t.text;
  j["country"] = t.country;
  j["lang"] = t.lang;
  return j;
}

bool in_scope(const Tweet& t, DateRange window, std::string_view country) {
  return t.country == country && window.contains(t.timestamp);
}

}  // namespace

LoadResult parse_corpus(std::string_view ndjson, const FieldSchema& schema) {
  LoadResult result;
  std::vector<Tweet> tweets;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < ndjson.size()) {
    std::size_t end = ndjson.find('\n', start);
    if (end == std::string_view::npos) end = ndjson.size();
    std::string_view line = ndjson.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      Tweet t = tweet_from_json(json::parse(line), schema);
      if (!seen.insert(t.id).second) {
        result.rejects.push_back({line_no, "duplicate id '" + t.id + "'"});
        continue;
      }
      tweets.push_back(std::move(t));
    } catch (const json::exception& e) {
      result.rejects.push_back({line_no, std::string("invalid JSON: ") + e.what()});
    } catch (const Error& e) {
      result.rejects.push_back({line_no, e.what()});
    }
  }
  result.store = TweetStore(std::move(tweets));
  return result;
}

LoadResult load_corpus(const std::string& path, const FieldSchema& schema) {
  return parse_corpus(read_file(path), schema);
}

std::string tweet_to_json(const Tweet& t) { return tweet_json(t).dump(); }

std::string export_corpus(const TweetStore& store) {
  std::string out;
  for (const auto& t : store.tweets()) {
    out += tweet_to_json(t);
    out += '\n';
  }
  return out;
}

void save_corpus(const TweetStore& store, const std::string& path) {
  write_file(path, export_corpus(store));
}

std::string rejects_to_ndjson(const std::vector<Reject>& rejects) {
  std::string out;
  for (const auto& r : rejects) {
    ojson j;
    j["line_no"] = r.line_no;
    j["reason"] = r.reason;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<AnnotationRecord> parse_annotations(std::string_view tsv) {
  std::vector<AnnotationRecord> records;
  std::size_t line_no = 0;
  for (const auto& raw : split(tsv, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 2) {
      fail(ErrorCode::kParse, "annotations line " + std::to_string(line_no) +
                                  ": expected 2 tab-separated columns");
    }
    std::string id(trim(cols[0]));
    std::string verdict(trim(cols[1]));
    std::transform(verdict.begin(), verdict.end(), verdict.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    AnnotationRecord rec{id, Verdict::kGenuine};
    if (verdict == "genuine") {
      rec.verdict = Verdict::kGenuine;
    } else if (verdict == "non-genuine") {
      rec.verdict = Verdict::kNonGenuine;
    } else {
      fail(ErrorCode::kParse, "annotations line " + std::to_string(line_no) +
                                  ": verdict must be genuine|non-genuine, got '" +
                                  verdict + "'");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<AnnotationRecord> load_annotations(const std::string& path) {
  return parse_annotations(read_file(path));
}

std::string format_annotations(const std::vector<AnnotationRecord>& records) {
  std::string out = "# tweet_id\tverdict\n";
  for (const auto& r : records) {
    out += r.tweet_id;
    out += '\t';
    out += r.verdict == Verdict::kGenuine ? "genuine" : "non-genuine";
    out += '\n';
  }
  return out;
}

std::vector<Candidate> select_diagnosed_candidates(const TweetStore& store,
                                                   const std::vector<std::string>& patterns,
                                                   DateRange window,
                                                   std::string_view country) {
  if (patterns.empty()) {
    fail(ErrorCode::kInvalidArgument, "select_diagnosed_candidates: no patterns");
  }
  std::vector<std::string> folded;
  folded.reserve(patterns.size());
  for (const auto& p : patterns) folded.push_back(text::fold_case(p));

  std::map<std::string, Candidate> found;
  for (const Tweet& t : store.tweets()) {
    if (!in_scope(t, window, country) || found.count(t.user_id)) continue;
    const std::string body = text::fold_case(t.text);
    for (const auto& p : folded) {
      if (body.find(p) != std::string::npos) {
        found.emplace(t.user_id, Candidate{t.user_id, t});
        break;
      }
    }
  }
  std::vector<Candidate> out;
  out.reserve(found.size());
  for (auto& [_, c] : found) out.push_back(std::move(c));
  return out;
}

UserSet apply_annotations(const std::vector<Candidate>& candidates,
                          const std::vector<AnnotationRecord>& annotations) {
  std::unordered_map<std::string, Verdict> verdicts;
  for (const auto& a : annotations) {
    auto [it, inserted] = verdicts.emplace(a.tweet_id, a.verdict);
    if (!inserted && it->second != a.verdict) {
      fail(ErrorCode::kInvalidArgument,
           "conflicting verdicts for tweet '" + a.tweet_id + "'");
    }
  }
  std::vector<std::string> missing;
  UserSet kept;
  for (const auto& c : candidates) {
    auto it = verdicts.find(c.exemplar.id);
    if (it == verdicts.end()) {
      missing.push_back(c.exemplar.id);
    } else if (it->second == Verdict::kGenuine) {
      kept.insert(c.user_id);
    }
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    throw MissingAnnotationError(std::move(missing));
  }
  return kept;
}

UserSet build_control(const TweetStore& store, DateRange window, std::string_view country,
                      const UserSet& exclude, std::size_t cap) {
  if (cap == 0) fail(ErrorCode::kInvalidArgument, "build_control: cap must be > 0");
  UserSet users;
  std::size_t taken = 0;
  for (const Tweet& t : store.tweets()) {
    if (taken == cap) break;
    if (!in_scope(t, window, country)) continue;
    ++taken;
    if (!exclude.count(t.user_id)) users.insert(t.user_id);
  }
  return users;
}

std::vector<UserTimeline> collect_history(const TweetStore& store,
                                          const std::vector<std::string>& users,
                                          DateRange history_window,
                                          std::size_t per_user_cap, Group group) {
  std::vector<UserTimeline> out;
  out.reserve(users.size());
  for (const auto& user : users) {
    UserTimeline tl{user, group, {}};
    std::vector<const Tweet*> in_window;
    for (std::size_t idx : store.user_tweets(user)) {
      const Tweet& t = store.tweets()[idx];
      if (history_window.contains(t.timestamp)) in_window.push_back(&t);
    }
    std::size_t skip = in_window.size() > per_user_cap ? in_window.size() - per_user_cap : 0;
    tl.tweets.reserve(in_window.size() - skip);
    for (std::size_t i = skip; i < in_window.size(); ++i) tl.tweets.push_back(*in_window[i]);
    out.push_back(std::move(tl));
  }
  return out;
}

std::vector<UserTimeline> filter_users(const std::vector<UserTimeline>& timelines,
                                       const FilterConfig& config) {
  if (config.lang_threshold < 0.0 || config.lang_threshold > 1.0) {
    fail(ErrorCode::kInvalidArgument, "lang_threshold must be in [0,1]");
  }
  std::vector<UserTimeline> out;
  for (const auto& tl : timelines) {
    const std::size_t n = tl.tweets.size();
    if (n == 0 || n < config.min_tweets) continue;
    std::size_t major = 0;
    for (const auto& t : tl.tweets) major += t.lang == config.major_lang;
    // Integer-scaled comparison keeps 14/20 >= 0.70 exact.
    if (static_cast<double>(major) + 1e-9 >=
        config.lang_threshold * static_cast<double>(n)) {
      out.push_back(tl);
    }
  }
  return out;
}

std::string timeline_to_json(const UserTimeline& tl) {
  ojson j;
  j["user_id"] = tl.user_id;
  j["group"] = group_name(tl.group);
  ojson tweets = ojson::array();
  for (const auto& t : tl.tweets) tweets.push_back(tweet_json(t));
  j["tweets"] = std::move(tweets);
  return j.dump();
}

std::vector<UserTimeline> parse_timelines(std::string_view ndjson) {
  std::vector<UserTimeline> out;
  std::size_t line_no = 0;
  FieldSchema schema;
  for (const auto& line : split(ndjson, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      json j = json::parse(line);
      UserTimeline tl;
      tl.user_id = j.at("user_id").get<std::string>();
      tl.group = parse_group(j.at("group").get<std::string>());
      for (const auto& t : j.at("tweets")) tl.tweets.push_back(tweet_from_json(t, schema));
      out.push_back(std::move(tl));
    } catch (const json::exception& e) {
      fail(ErrorCode::kParse, "timelines line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void save_timelines(const std::vector<UserTimeline>& timelines, const std::string& path) {
  std::string out;
  for (const auto& tl : timelines) {
    out += timeline_to_json(tl);
    out += '\n';
  }
  write_file(path, out);
}

std::vector<UserTimeline> load_timelines(const std::string& path) {
  return parse_timelines(read_file(path));
}

}  // namespace corpus
}  // namespace mhd
