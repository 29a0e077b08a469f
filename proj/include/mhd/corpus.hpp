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

#ifndef MHD_CORPUS_HPP_
#define MHD_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mhd/common.hpp"

namespace mhd {

struct Tweet {
  std::string id;
  std::string user_id;
  UnixSeconds timestamp = 0;
  std::string text;
  std::string country;  // ISO-3166 alpha-2
  std::string lang;     // ISO-639-1

  bool operator==(const Tweet&) const = default;
};

enum class Group { kDiagnosed, kControl, kUnlabeled };

const char* group_name(Group g);
Group parse_group(std::string_view name);

struct UserTimeline {
  std::string user_id;
  Group group = Group::kUnlabeled;
  std::vector<Tweet> tweets;  // ascending by timestamp

  bool operator==(const UserTimeline&) const = default;
};

enum class Verdict { kGenuine, kNonGenuine };

struct AnnotationRecord {
  std::string tweet_id;
  Verdict verdict = Verdict::kGenuine;
};

using UserSet = std::set<std::string>;

// Immutable collection of validated tweets, ordered by (timestamp, id).
class TweetStore {
 public:
  TweetStore() = default;
  // Throws kInvalidArgument on duplicate ids or empty text.
  explicit TweetStore(std::vector<Tweet> tweets);

  const std::vector<Tweet>& tweets() const { return tweets_; }
  std::size_t size() const { return tweets_.size(); }
  bool empty() const { return tweets_.empty(); }
  // Range of UTC days covered; empty range for an empty store.
  DateRange range() const { return range_; }

  const Tweet* find(std::string_view id) const;
  // Indices into tweets() for one user, ascending by (timestamp, id).
  const std::vector<std::size_t>& user_tweets(const std::string& user_id) const;
  std::vector<std::string> users() const;

  bool operator==(const TweetStore& other) const { return tweets_ == other.tweets_; }

 private:
  std::vector<Tweet> tweets_;
  DateRange range_{Date{1}, Date{0}};
  std::unordered_map<std::string, std::size_t> by_id_;
  std::unordered_map<std::string, std::vector<std::size_t>> by_user_;
};

namespace corpus {

// JSON key names for the six tweet fields.
struct FieldSchema {
  std::string id = "id";
  std::string user_id = "user_id";
  std::string created_at = "created_at";
  std::string text = "text";
  std::string country = "country";
  std::string lang = "lang";
};

struct Reject {
  std::size_t line_no = 0;  // 1-based
  std::string reason;
};

struct LoadResult {
  TweetStore store;
  std::vector<Reject> rejects;
};

// Reads a newline-delimited JSON tweet archive. Bad lines go to `rejects`;
// an unreadable file throws kIo.
LoadResult load_corpus(const std::string& path, const FieldSchema& schema = {});
LoadResult parse_corpus(std::string_view ndjson, const FieldSchema& schema = {});

std::string tweet_to_json(const Tweet& t);
std::string export_corpus(const TweetStore& store);
void save_corpus(const TweetStore& store, const std::string& path);
std::string rejects_to_ndjson(const std::vector<Reject>& rejects);

// Annotation file: "tweet_id<TAB>genuine|non-genuine", '#' comments.
std::vector<AnnotationRecord> parse_annotations(std::string_view tsv);
std::vector<AnnotationRecord> load_annotations(const std::string& path);
std::string format_annotations(const std::vector<AnnotationRecord>& records);

struct Candidate {
  std::string user_id;
  Tweet exemplar;
};

// Users with an in-window, in-country tweet matching any pattern
// (case-insensitive substring after NFC). The earliest match is the
// exemplar. Result is sorted by user_id.
std::vector<Candidate> select_diagnosed_candidates(
    const TweetStore& store, const std::vector<std::string>& patterns,
    DateRange window, std::string_view country);

// Keeps candidates whose exemplar is annotated Genuine. Throws
// MissingAnnotationError if any exemplar lacks a verdict.
UserSet apply_annotations(const std::vector<Candidate>& candidates,
                          const std::vector<AnnotationRecord>& annotations);

// Takes the first `cap` in-window, in-country tweets in (timestamp, id)
// order, drops those by excluded users, and returns the distinct authors.
UserSet build_control(const TweetStore& store, DateRange window,
                      std::string_view country, const UserSet& exclude,
                      std::size_t cap);

// Most recent `per_user_cap` tweets of each user inside `history_window`,
// ascending. Users come out in the order given.
std::vector<UserTimeline> collect_history(const TweetStore& store,
                                          const std::vector<std::string>& users,
                                          DateRange history_window,
                                          std::size_t per_user_cap, Group group);

struct FilterConfig {
  std::size_t min_tweets = 20;
  double lang_threshold = 0.70;  // inclusive
  std::string major_lang = "en";
};

std::vector<UserTimeline> filter_users(const std::vector<UserTimeline>& timelines,
                                       const FilterConfig& config);

std::string timeline_to_json(const UserTimeline& t);
std::vector<UserTimeline> parse_timelines(std::string_view ndjson);
void save_timelines(const std::vector<UserTimeline>& timelines, const std::string& path);
std::vector<UserTimeline> load_timelines(const std::string& path);

// ---------------------------------------------------------------------------
// Synthetic corpora.

struct SpikeDay {
  Date date;
  double multiplier = 1.0;
};

struct SynthConfig {
  std::size_t n_diagnosed_users = 50;
  std::size_t n_control_users = 500;
  std::size_t tweets_per_user_min = 20;
  std::size_t tweets_per_user_max = 60;
  DateRange date_range{Date::from_ymd(2019, 5, 1), Date::from_ymd(2019, 5, 14)};
  std::vector<std::string> signal_lexicon = {"hopeless", "exhausted", "numb",
                                             "therapy",  "meds",      "insomnia",
                                             "worthless", "anxious"};
  // Probability that a Diagnosed tweet carries signal tokens.
  double signal_rate = 0.3;
  // Same for Control tweets (colloquial use); 0 keeps them signal-free.
  double control_signal_rate = 0.0;
  // Diagnosed signal tweets carry 1..max distinct signal tokens; Control
  // signal tweets always carry one.
  std::size_t max_signal_tokens = 1;
  std::vector<SpikeDay> spike_days;
  std::uint64_t seed = 42;

  std::string country = "GB";
  std::string major_lang = "en";
  std::string minor_lang = "fr";
  // Fraction of users who mostly tweet outside the major language.
  double offlang_user_rate = 0.0;
  // Major-language share of such users' tweets.
  double offlang_major_share = 0.4;
  std::size_t background_vocab_size = 2000;
  std::size_t tweet_len_min = 6;
  std::size_t tweet_len_max = 14;
  // Permits tweets_per_user_min below the default 20-tweet filter.
  bool allow_short_users = false;

  void validate() const;
};

struct SynthTruth {
  std::vector<std::string> diagnosed_users;
  std::vector<std::string> control_users;
  // One per Diagnosed user.
  std::vector<std::string> diagnosis_tweet_ids;
};

struct SynthCorpus {
  TweetStore store;
  SynthTruth truth;
};

SynthCorpus synth_corpus(const SynthConfig& config);

// Phrases that flag a self-reported diagnosis.
const std::vector<std::string>& default_diagnosis_patterns();

// Whether `text` contains any token of `lexicon` after normalization.
bool contains_signal(std::string_view text, const std::vector<std::string>& lexicon);

}  // namespace corpus
}  // namespace mhd

#endif  // MHD_CORPUS_HPP_
