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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "mhd/corpus.hpp"
#include "mhd/preprocess.hpp"

namespace mhd::corpus {
namespace {

using testing::day;
using testing::days;
using testing::tweet;

const char* kThreeTweets =
    R"({"id":"1","user_id":"a","created_at":"2019-05-01T09:00:00Z","text":"hello","country":"GB","lang":"en"}
{"id":"2","user_id":"b","created_at":"2019-05-02T09:00:00Z","text":"world","country":"GB","lang":"en"}
{"id":"3","user_id":"a","created_at":"2019-05-01T08:00:00Z","text":"early","country":"FR","lang":"fr"}
)";

TEST(LoadCorpus, ValidLines) {
  auto r = parse_corpus(kThreeTweets);
  EXPECT_EQ(r.store.size(), 3u);
  EXPECT_TRUE(r.rejects.empty());
  // Sorted by timestamp.
  EXPECT_EQ(r.store.tweets().front().id, "3");
  EXPECT_EQ(r.store.range(), days("2019-05-01", "2019-05-02"));
}

TEST(LoadCorpus, MissingFieldIsRejectedNotDropped) {
  std::string text = kThreeTweets;
  text += R"({"id":"4","user_id":"c","created_at":"2019-05-01T09:00:00Z","country":"GB","lang":"en"})";
  text += "\nnot json\n\n";
  text += R"({"id":"1","user_id":"z","created_at":"2019-05-01T09:00:00Z","text":"dup","country":"GB","lang":"en"})";
  auto r = parse_corpus(text);
  EXPECT_EQ(r.store.size(), 3u);
  ASSERT_EQ(r.rejects.size(), 3u);
  EXPECT_EQ(r.rejects[0].line_no, 4u);
  EXPECT_NE(r.rejects[0].reason.find("text"), std::string::npos);
  EXPECT_EQ(r.rejects[1].line_no, 5u);
  EXPECT_EQ(r.rejects[2].line_no, 7u);
  EXPECT_NE(rejects_to_ndjson(r.rejects).find("\"line_no\":4"), std::string::npos);
}

TEST(LoadCorpus, SchemaRemap) {
  FieldSchema s{"tid", "uid", "ts", "body", "cc", "lg"};
  auto r = parse_corpus(
      R"({"tid":"9","uid":"u","ts":"2020-03-23T10:00:00+01:00","body":"hi","cc":"GB","lg":"en"})", s);
  ASSERT_EQ(r.store.size(), 1u);
  EXPECT_EQ(r.store.tweets()[0].timestamp, parse_timestamp("2020-03-23T09:00:00Z"));
  EXPECT_EQ(parse_corpus(kThreeTweets, s).rejects.size(), 3u);
}

TEST(LoadCorpus, ExportRoundTrip) {
  auto a = parse_corpus(kThreeTweets).store;
  testing::TempDir dir("corpus_rt");
  save_corpus(a, dir.file("c.jsonl"));
  auto b = load_corpus(dir.file("c.jsonl"));
  EXPECT_TRUE(b.rejects.empty());
  EXPECT_EQ(a, b.store);
  try {
    load_corpus(dir.file("absent.jsonl"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(TweetStore, RejectsDuplicatesAndEmptyText) {
  EXPECT_THROW(TweetStore({tweet("1", "a", "2019-05-01T00:00:00Z", "x"),
                           tweet("1", "b", "2019-05-01T00:00:00Z", "y")}),
               Error);
  EXPECT_THROW(TweetStore({tweet("1", "a", "2019-05-01T00:00:00Z", "")}), Error);
}

TEST(Annotations, ParseFormat) {
  auto recs = parse_annotations("# header\n1\tgenuine\n\n2\tnon-genuine\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[1].verdict, Verdict::kNonGenuine);
  EXPECT_EQ(parse_annotations(format_annotations(recs)).size(), 2u);
  EXPECT_THROW(parse_annotations("1\tmaybe\n"), Error);
  EXPECT_THROW(parse_annotations("1 genuine\n"), Error);
}

TweetStore table_one_store() {
  return TweetStore({
      tweet("g1", "alice", "2019-05-03T10:00:00Z", "I was diagnosed with depression"),
      tweet("n1", "bob", "2019-05-04T10:00:00Z", "My guinea pig has been diagnosed with depression"),
      tweet("x1", "carol", "2019-05-05T10:00:00Z", "lovely weather"),
      tweet("late", "dave", "2019-06-20T10:00:00Z", "I was DIAGNOSED with Depression"),
      tweet("fr", "erin", "2019-05-05T10:00:00Z", "I was diagnosed with depression", "FR"),
  });
}

std::vector<std::string> users_of(const std::vector<Candidate>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.user_id);
  return out;
}

TEST(SelectCandidates, WindowAndCountry) {
  auto store = table_one_store();
  auto c = select_diagnosed_candidates(store, default_diagnosis_patterns(),
                                       days("2019-05-01", "2019-05-14"), "GB");
  EXPECT_EQ(users_of(c), (std::vector<std::string>{"alice", "bob"}));
  EXPECT_EQ(c[0].exemplar.id, "g1");
  EXPECT_TRUE(select_diagnosed_candidates(store, {"diagnosed with depression"},
                                          days("2019-07-01", "2019-07-14"), "GB")
                  .empty());
  auto late = select_diagnosed_candidates(store, default_diagnosis_patterns(),
                                          days("2019-06-01", "2019-06-30"), "GB");
  EXPECT_EQ(users_of(late), (std::vector<std::string>{"dave"}));
}

TEST(ApplyAnnotations, GenuineOnly) {
  auto store = table_one_store();
  auto c = select_diagnosed_candidates(store, default_diagnosis_patterns(),
                                       days("2019-05-01", "2019-05-14"), "GB");
  auto kept = apply_annotations(c, {{"g1", Verdict::kGenuine}, {"n1", Verdict::kNonGenuine}});
  EXPECT_EQ(kept, (UserSet{"alice"}));
  auto all = apply_annotations(c, {{"g1", Verdict::kGenuine}, {"n1", Verdict::kGenuine}});
  EXPECT_EQ(all, (UserSet{"alice", "bob"}));
  EXPECT_THROW(apply_annotations(c, {{"g1", Verdict::kGenuine}, {"g1", Verdict::kNonGenuine},
                                     {"n1", Verdict::kGenuine}}),
               Error);
}

TEST(ApplyAnnotations, MissingVerdictsListed) {
  auto store = table_one_store();
  auto c = select_diagnosed_candidates(store, default_diagnosis_patterns(),
                                       days("2019-05-01", "2019-05-14"), "GB");
  try {
    apply_annotations(c, {});
    FAIL();
  } catch (const MissingAnnotationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingAnnotation);
    EXPECT_EQ(e.tweet_ids(), (std::vector<std::string>{"g1", "n1"}));
  }
}

TEST(ApplyAnnotations, MixedCounts) {
  std::vector<Candidate> cands;
  std::vector<AnnotationRecord> recs;
  Rng rng(11);
  std::size_t genuine = 0;
  for (int i = 0; i < 60; ++i) {
    const std::string id = "t" + std::to_string(i);
    cands.push_back({"u" + std::to_string(i), tweet(id, "u", "2019-05-01T00:00:00Z", "x")});
    const bool g = rng.bernoulli(0.6);
    genuine += g;
    recs.push_back({id, g ? Verdict::kGenuine : Verdict::kNonGenuine});
  }
  EXPECT_EQ(apply_annotations(cands, recs).size(), genuine);
}

TEST(BuildControl, ExclusionAndCap) {
  std::vector<Tweet> tweets;
  for (int i = 0; i < 10; ++i) {
    char ts[32];
    std::snprintf(ts, sizeof ts, "2019-05-01T%02d:00:00Z", i);
    tweets.push_back(tweet("t" + std::to_string(i), "u" + std::to_string(i % 4), ts, "x"));
  }
  tweets.push_back(tweet("o", "out", "2019-05-01T23:00:00Z", "x", "FR"));
  TweetStore store(tweets);
  const auto w = days("2019-05-01", "2019-05-01");
  EXPECT_EQ(build_control(store, w, "GB", {}, 1000), (UserSet{"u0", "u1", "u2", "u3"}));
  EXPECT_EQ(build_control(store, w, "GB", {"u1"}, 1000), (UserSet{"u0", "u2", "u3"}));
  // The first three tweets are by u0, u1, u2.
  EXPECT_EQ(build_control(store, w, "GB", {}, 3), (UserSet{"u0", "u1", "u2"}));
  EXPECT_EQ(build_control(store, w, "GB", {"u1"}, 3), (UserSet{"u0", "u2"}));
  EXPECT_THROW(build_control(store, w, "GB", {}, 0), Error);
}

TEST(CollectHistory, MostRecentWithinWindow) {
  std::vector<Tweet> tweets;
  const UnixSeconds t0 = parse_timestamp("2019-01-01T00:00:00Z");
  for (int i = 0; i < 6000; ++i) {
    Tweet t = tweet("a" + std::to_string(i), "a", "2019-01-01T00:00:00Z", "x");
    t.timestamp = t0 + i * 60;
    tweets.push_back(t);
  }
  for (int i = 0; i < 5; ++i) {
    Tweet t = tweet("b" + std::to_string(i), "b", "2019-01-01T00:00:00Z", "x");
    t.timestamp = t0 + i * 3600;
    tweets.push_back(t);
  }
  tweets.push_back(tweet("c0", "c", "2018-06-01T00:00:00Z", "x"));
  TweetStore store(tweets);
  const auto w = days("2019-01-01", "2019-12-31");
  auto tl = collect_history(store, {"a", "b", "c"}, w, 5000, Group::kDiagnosed);
  ASSERT_EQ(tl.size(), 3u);
  ASSERT_EQ(tl[0].tweets.size(), 5000u);
  EXPECT_EQ(tl[0].tweets.front().id, "a1000");
  EXPECT_EQ(tl[0].tweets.back().id, "a5999");
  EXPECT_TRUE(tl[2].tweets.empty());
  auto three = collect_history(store, {"b"}, w, 3, Group::kControl);
  std::vector<std::string> ids;
  for (const auto& t : three[0].tweets) ids.push_back(t.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"b2", "b3", "b4"}));
  EXPECT_EQ(three[0].group, Group::kControl);
}

UserTimeline user(const std::string& id, std::size_t n, std::size_t n_major) {
  UserTimeline t{id, Group::kControl, {}};
  for (std::size_t i = 0; i < n; ++i) {
    t.tweets.push_back(tweet(id + "-" + std::to_string(i), id, "2019-05-01T00:00:00Z", "x", "GB",
                             i < n_major ? "en" : "fr"));
  }
  return t;
}

std::vector<std::string> ids_of(const std::vector<UserTimeline>& tls) {
  std::vector<std::string> out;
  for (const auto& t : tls) out.push_back(t.user_id);
  return out;
}

TEST(FilterUsers, Boundaries) {
  FilterConfig cfg;
  EXPECT_TRUE(filter_users({user("u", 19, 19)}, cfg).empty());
  EXPECT_EQ(filter_users({user("u", 20, 14)}, cfg).size(), 1u);
  EXPECT_TRUE(filter_users({user("u", 20, 13)}, cfg).empty());
}

TEST(FilterUsers, HandEnumeratedFixture) {
  // (tweets, major-language tweets); survivors need >= 20 and >= 70%.
  const std::vector<std::pair<std::size_t, std::size_t>> spec = {
      {0, 0},   {5, 5},   {19, 19}, {20, 20}, {20, 14},
      {30, 20}, {30, 21}, {100, 69}, {100, 70}, {40, 40}};
  std::vector<UserTimeline> tls;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    tls.push_back(user("u" + std::to_string(i), spec[i].first, spec[i].second));
  }
  EXPECT_EQ(ids_of(filter_users(tls, {})),
            (std::vector<std::string>{"u3", "u4", "u6", "u8", "u9"}));
}

TEST(Synth, DeterministicAndValidated) {
  SynthConfig c;
  c.n_diagnosed_users = 5;
  c.n_control_users = 20;
  EXPECT_EQ(export_corpus(synth_corpus(c).store), export_corpus(synth_corpus(c).store));
  c.seed = 43;
  SynthConfig d = c;
  d.seed = 44;
  EXPECT_NE(export_corpus(synth_corpus(c).store), export_corpus(synth_corpus(d).store));
  SynthConfig empty = c;
  empty.date_range = days("2019-05-02", "2019-05-01");
  EXPECT_THROW(synth_corpus(empty), Error);
  SynthConfig shorty = c;
  shorty.tweets_per_user_min = 5;
  EXPECT_THROW(synth_corpus(shorty), Error);
  shorty.allow_short_users = true;
  EXPECT_NO_THROW(synth_corpus(shorty));
}

TEST(Synth, DiagnosisTweetIffDiagnosed) {
  SynthConfig c;
  c.n_diagnosed_users = 30;
  c.n_control_users = 100;
  auto s = synth_corpus(c);
  std::map<std::string, int> hits;
  for (const auto& t : s.store.tweets()) {
    const auto folded = text::fold_case(t.text);
    for (const auto& p : default_diagnosis_patterns()) {
      if (folded.find(p) != std::string::npos) {
        ++hits[t.user_id];
        break;
      }
    }
  }
  for (const auto& u : s.truth.diagnosed_users) EXPECT_EQ(hits[u], 1) << u;
  for (const auto& u : s.truth.control_users) EXPECT_EQ(hits.count(u), 0u) << u;
}

TEST(Synth, ZeroSignalRateLeavesNoSignal) {
  SynthConfig c;
  c.n_diagnosed_users = 20;
  c.n_control_users = 20;
  c.signal_rate = 0.0;
  auto s = synth_corpus(c);
  const std::set<std::string> diag_tweets(s.truth.diagnosis_tweet_ids.begin(),
                                          s.truth.diagnosis_tweet_ids.end());
  for (const auto& t : s.store.tweets()) {
    if (diag_tweets.count(t.id)) continue;
    EXPECT_FALSE(contains_signal(t.text, c.signal_lexicon)) << t.text;
  }
}

TEST(Synth, SignalRateWithinBinomialBound) {
  SynthConfig c;
  c.n_diagnosed_users = 250;
  c.n_control_users = 0;
  c.signal_rate = 0.5;
  auto s = synth_corpus(c);
  const std::set<std::string> diag_tweets(s.truth.diagnosis_tweet_ids.begin(),
                                          s.truth.diagnosis_tweet_ids.end());
  std::size_t n = 0, hits = 0;
  for (const auto& t : s.store.tweets()) {
    if (diag_tweets.count(t.id)) continue;
    ++n;
    hits += contains_signal(t.text, c.signal_lexicon);
  }
  ASSERT_GE(n, 9000u);
  const double mean = 0.5 * static_cast<double>(n);
  const double sd = std::sqrt(static_cast<double>(n) * 0.25);
  EXPECT_LE(std::fabs(static_cast<double>(hits) - mean), 3.0 * sd);
}

TEST(Synth, SpikeDayRaisesSignal) {
  SynthConfig c;
  c.n_diagnosed_users = 0;
  c.n_control_users = 400;
  c.control_signal_rate = 0.1;
  c.spike_days = {{day("2019-05-07"), 3.0}};
  auto s = synth_corpus(c);
  std::size_t n_spike = 0, hit_spike = 0, n_other = 0, hit_other = 0;
  for (const auto& t : s.store.tweets()) {
    const bool sig = contains_signal(t.text, c.signal_lexicon);
    if (Date::of(t.timestamp) == day("2019-05-07")) {
      ++n_spike;
      hit_spike += sig;
    } else {
      ++n_other;
      hit_other += sig;
    }
  }
  const double r_spike = static_cast<double>(hit_spike) / static_cast<double>(n_spike);
  const double r_other = static_cast<double>(hit_other) / static_cast<double>(n_other);
  EXPECT_NEAR(r_other, 0.1, 0.02);
  EXPECT_NEAR(r_spike, 0.3, 0.06);
}

TEST(Protocol, GroundTruthRecoveryAndDisjointness) {
  SynthConfig c;
  c.n_diagnosed_users = 40;
  c.n_control_users = 200;
  c.tweets_per_user_min = 10;
  c.allow_short_users = true;
  c.offlang_user_rate = 0.2;
  c.seed = 7;
  auto s = synth_corpus(c);
  const auto& store = s.store;
  auto cands = select_diagnosed_candidates(store, default_diagnosis_patterns(), c.date_range,
                                           c.country);
  std::vector<AnnotationRecord> recs;
  for (const auto& id : s.truth.diagnosis_tweet_ids) recs.push_back({id, Verdict::kGenuine});
  auto diagnosed = apply_annotations(cands, recs);
  auto control = build_control(store, c.date_range, c.country, diagnosed, 1000000);
  for (const auto& u : diagnosed) EXPECT_EQ(control.count(u), 0u);
  auto kept = filter_users(collect_history(store, {diagnosed.begin(), diagnosed.end()},
                                           c.date_range, 5000, Group::kDiagnosed),
                           {});
  // Expected survivors recounted straight from the generated tweets.
  std::vector<std::string> expected;
  for (const auto& u : s.truth.diagnosed_users) {
    const auto& idx = store.user_tweets(u);
    std::size_t en = 0;
    for (auto i : idx) en += store.tweets()[i].lang == "en";
    if (idx.size() >= 20 && 10 * en >= 7 * idx.size()) expected.push_back(u);
  }
  ASSERT_FALSE(expected.empty());
  ASSERT_LT(expected.size(), s.truth.diagnosed_users.size());
  EXPECT_EQ(ids_of(kept), expected);
  EXPECT_EQ(control, UserSet(s.truth.control_users.begin(), s.truth.control_users.end()));
}

TEST(Timelines, JsonRoundTrip) {
  auto tl = user("u1", 3, 2);
  tl.group = Group::kDiagnosed;
  auto back = parse_timelines(timeline_to_json(tl) + "\n" + timeline_to_json(user("u2", 1, 1)));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], tl);
}

}  // namespace
}  // namespace mhd::corpus
