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

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_set>

#include "mhd/corpus.hpp"
#include "mhd/preprocess.hpp"

namespace mhd::corpus {
namespace {

// Background words are pronounceable CVCV(C) strings. The list depends only
// on the requested size so development and experiment corpora generated
// with different seeds share a vocabulary.
std::vector<std::string> background_words(std::size_t n,
                                          const std::vector<std::string>& banned) {
  static constexpr const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m",
                                            "n", "p", "r", "s", "t", "v", "z"};
  static constexpr const char* kVowels[] = {"a", "e", "i", "o", "u"};
  static constexpr const char* kCodas[] = {"", "n", "s", "k", "r"};
  std::vector<std::string> all;
  for (const char* c3 : kCodas)
    for (const char* o1 : kOnsets)
      for (const char* v1 : kVowels)
        for (const char* o2 : kOnsets)
          for (const char* v2 : kVowels)
            all.push_back(std::string(o1) + v1 + o2 + v2 + c3);
  Rng rng(0x6d68645f766f6361ULL);
  rng.shuffle(all);
  std::unordered_set<std::string> ban(banned.begin(), banned.end());
  std::vector<std::string> words;
  for (auto& w : all) {
    if (words.size() == n) break;
    if (!ban.count(w)) words.push_back(std::move(w));
  }
  return words;
}

class ZipfSampler {
 public:
  explicit ZipfSampler(std::size_t n) : cumulative_(n) {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      total += 1.0 / static_cast<double>(i + 1);
      cumulative_[i] = total;
    }
    for (auto& c : cumulative_) c /= total;
  }

  std::size_t draw(Rng& rng) const {
    double u = rng.uniform();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min(static_cast<std::size_t>(it - cumulative_.begin()),
                    cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

const std::vector<std::string>& diagnosis_templates() {
  static const std::vector<std::string> t = {
      "I was diagnosed with depression %d years ago and it still shapes my days",
      "Finally got diagnosed with depression today, strangely relieved",
      "i've been diagnosed with depression since %d",
      "So I was diagnosed with Depression last month",
      "My doctor diagnosed me with depression this morning",
  };
  return t;
}

std::string capitalize(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

std::string random_alnum(Rng& rng, std::size_t n) {
  static constexpr char kChars[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(kChars[rng.below(sizeof kChars - 1)]);
  return s;
}

class TextGenerator {
 public:
  explicit TextGenerator(const SynthConfig& config)
      : config_(config), zipf_(config.background_vocab_size) {
    std::vector<std::string> banned = config.signal_lexicon;
    for (const auto& tmpl : diagnosis_templates()) {
      for (const auto& tok : text::normalize(tmpl)) banned.push_back(tok);
    }
    words_ = background_words(config.background_vocab_size, banned);
    if (words_.size() < config.background_vocab_size) {
      fail(ErrorCode::kInvalidArgument, "background_vocab_size too large");
    }
  }

  std::string tweet(Rng& rng, std::size_t n_signal) const {
    std::size_t len = static_cast<std::size_t>(rng.between(
        static_cast<std::int64_t>(config_.tweet_len_min),
        static_cast<std::int64_t>(config_.tweet_len_max)));
    std::vector<std::string> words;
    words.reserve(len + n_signal + 4);
    for (std::size_t i = 0; i < len; ++i) words.push_back(words_[zipf_.draw(rng)]);

    std::vector<std::size_t> lex(config_.signal_lexicon.size());
    for (std::size_t i = 0; i < lex.size(); ++i) lex[i] = i;
    rng.shuffle(lex);
    n_signal = std::min(n_signal, lex.size());
    for (std::size_t k = 0; k < n_signal; ++k) {
      std::size_t pos = static_cast<std::size_t>(rng.below(words.size() + 1));
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(pos),
                   config_.signal_lexicon[lex[k]]);
    }

    if (rng.bernoulli(0.5)) words.front() = capitalize(words.front());
    if (rng.bernoulli(0.08)) {
      words.push_back("#" + capitalize(words_[zipf_.draw(rng)]) +
                      capitalize(words_[zipf_.draw(rng)]));
    }
    if (rng.bernoulli(0.15)) {
      words.insert(words.begin(), "@user" + std::to_string(rng.below(10000)));
    }
    if (rng.bernoulli(0.10)) words.push_back("https://t.co/" + random_alnum(rng, 8));
    if (rng.bernoulli(0.05)) words.push_back(":)");

    std::string out = text::join(words);
    static constexpr const char* kEndings[] = {".", "!", "?", "!!"};
    if (rng.bernoulli(0.3)) out += kEndings[rng.below(4)];
    return out;
  }

  std::string diagnosis(Rng& rng) const {
    const auto& templates = diagnosis_templates();
    const std::string& tmpl = templates[rng.below(templates.size())];
    char buf[256];
    int arg = tmpl.find("since") != std::string::npos
                  ? static_cast<int>(2010 + rng.below(9))
                  : static_cast<int>(2 + rng.below(8));
    std::snprintf(buf, sizeof buf, tmpl.c_str(), arg);
    return buf;
  }

 private:
  const SynthConfig& config_;
  ZipfSampler zipf_;
  std::vector<std::string> words_;
};

double spike_multiplier(const SynthConfig& config, Date d) {
  double m = 1.0;
  for (const auto& s : config.spike_days) {
    if (s.date == d) m *= s.multiplier;
  }
  return m;
}

std::string user_name(char prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%05zu", prefix, i + 1);
  return buf;
}

}  // namespace

void SynthConfig::validate() const {
  if (date_range.empty()) fail(ErrorCode::kInvalidArgument, "synth: empty date_range");
  if (tweets_per_user_min < 1 || tweets_per_user_min > tweets_per_user_max) {
    fail(ErrorCode::kInvalidArgument, "synth: need 1 <= tweets_per_user_min <= max");
  }
  if (tweets_per_user_min < 20 && !allow_short_users) {
    fail(ErrorCode::kInvalidArgument,
         "synth: tweets_per_user_min < 20 requires allow_short_users");
  }
  if (signal_rate < 0.0 || signal_rate > 1.0 || control_signal_rate < 0.0 ||
      control_signal_rate > 1.0) {
    fail(ErrorCode::kInvalidArgument, "synth: signal rates must be in [0,1]");
  }
  if (offlang_user_rate < 0.0 || offlang_user_rate > 1.0 || offlang_major_share < 0.0 ||
      offlang_major_share > 1.0) {
    fail(ErrorCode::kInvalidArgument, "synth: language rates must be in [0,1]");
  }
  if ((signal_rate > 0 || control_signal_rate > 0) && signal_lexicon.empty()) {
    fail(ErrorCode::kInvalidArgument, "synth: empty signal_lexicon with nonzero rate");
  }
  if (max_signal_tokens < 1) fail(ErrorCode::kInvalidArgument, "synth: max_signal_tokens < 1");
  if (tweet_len_min < 1 || tweet_len_min > tweet_len_max) {
    fail(ErrorCode::kInvalidArgument, "synth: need 1 <= tweet_len_min <= tweet_len_max");
  }
  if (background_vocab_size < 10) {
    fail(ErrorCode::kInvalidArgument, "synth: background_vocab_size < 10");
  }
  for (const auto& s : spike_days) {
    if (s.multiplier < 0) fail(ErrorCode::kInvalidArgument, "synth: negative spike multiplier");
  }
}

SynthCorpus synth_corpus(const SynthConfig& config) {
  config.validate();
  TextGenerator gen(config);
  const UnixSeconds t0 = config.date_range.start.start_seconds();
  const auto span_seconds = static_cast<std::uint64_t>(config.date_range.length()) * 86400;

  SynthCorpus out;
  std::vector<Tweet> tweets;
  auto make_user = [&](const std::string& user, bool diagnosed) {
    Rng rng(derive_seed(config.seed, user));
    const auto n = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(config.tweets_per_user_min),
                    static_cast<std::int64_t>(config.tweets_per_user_max)));
    const bool offlang = rng.bernoulli(config.offlang_user_rate);
    const std::size_t diagnosis_at = diagnosed ? static_cast<std::size_t>(rng.below(n)) : n;
    const double base_rate = diagnosed ? config.signal_rate : config.control_signal_rate;
    for (std::size_t i = 0; i < n; ++i) {
      Tweet t;
      char idbuf[48];
      std::snprintf(idbuf, sizeof idbuf, "%s-%04zu", user.c_str(), i);
      t.id = idbuf;
      t.user_id = user;
      t.timestamp = t0 + static_cast<UnixSeconds>(rng.below(span_seconds));
      t.country = config.country;
      if (i == diagnosis_at) {
        t.text = gen.diagnosis(rng);
        t.lang = config.major_lang;
        out.truth.diagnosis_tweet_ids.push_back(t.id);
      } else {
        double p = std::min(1.0, base_rate * spike_multiplier(config, Date::of(t.timestamp)));
        std::size_t n_signal = 0;
        if (rng.bernoulli(p)) {
          n_signal = diagnosed ? static_cast<std::size_t>(rng.between(
                                     1, static_cast<std::int64_t>(config.max_signal_tokens)))
                               : 1;
        }
        t.text = gen.tweet(rng, n_signal);
        t.lang = (!offlang || rng.bernoulli(config.offlang_major_share)) ? config.major_lang
                                                                         : config.minor_lang;
      }
      tweets.push_back(std::move(t));
    }
  };

  for (std::size_t i = 0; i < config.n_diagnosed_users; ++i) {
    std::string user = user_name('d', i);
    make_user(user, true);
    out.truth.diagnosed_users.push_back(std::move(user));
  }
  for (std::size_t i = 0; i < config.n_control_users; ++i) {
    std::string user = user_name('c', i);
    make_user(user, false);
    out.truth.control_users.push_back(std::move(user));
  }
  out.store = TweetStore(std::move(tweets));
  return out;
}

const std::vector<std::string>& default_diagnosis_patterns() {
  static const std::vector<std::string> p = {"diagnosed with depression",
                                             "diagnosed me with depression"};
  return p;
}

bool contains_signal(std::string_view text, const std::vector<std::string>& lexicon) {
  const auto tokens = text::normalize(text);
  for (const auto& tok : tokens) {
    if (std::find(lexicon.begin(), lexicon.end(), tok) != lexicon.end()) return true;
  }
  return false;
}

}  // namespace mhd::corpus
