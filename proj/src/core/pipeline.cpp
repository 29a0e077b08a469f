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

#include "mhd/pipeline.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>

#include "json.hpp"
#include "mhd/corpus.hpp"
#include "mhd/dynamics.hpp"
#include "mhd/eval.hpp"
#include "mhd/features.hpp"
#include "mhd/models.hpp"
#include "mhd/sampling.hpp"

namespace mhd::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      // shared
      "seed", "country", "major_lang", "representation", "model", "regime",
      "validation_regime", "diagnosed_weight", "vocab", "model_file", "train", "validation",
      // synth
      "preset", "n_diagnosed", "n_control", "tweets_min", "tweets_max", "date_range",
      "signal_rate", "control_signal_rate", "max_signal_tokens", "spike_days",
      "offlang_user_rate", "offlang_major_share", "minor_lang", "background_vocab_size",
      "tweet_len_min", "tweet_len_max", "allow_short_users",
      // label
      "corpus", "annotations", "patterns", "diagnosed_window", "control_window",
      "history_window", "control_cap", "per_user_cap", "min_tweets", "lang_threshold",
      "field_id", "field_user_id", "field_created_at", "field_text", "field_country",
      "field_lang",
      // build
      "timelines", "train_fraction", "split_unit", "min_count",
      // train
      "learning_rate", "batch_size", "epochs", "optimizer", "beta1", "beta2", "epsilon",
      "svm_lambda", "embed_dim", "hidden_dim", "max_len",
      // eval, significance
      "predictions",
      // deploy, report
      "experiment", "experiment_window", "soft", "rates", "key_dates", "smoothing_window",
      "spike_threshold", "baseline_window"};
  return keys;
}

std::uint64_t env_seed() {
  const char* s = std::getenv("MHD_SEED");
  if (s == nullptr || *s == '\0') return 42;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (errno != 0 || *end != '\0' || *s == '-') {
    fail(ErrorCode::kInvalidArgument, std::string("MHD_SEED is not an unsigned integer: ") + s);
  }
  return v;
}

// Per-stage state: the config as given, everything the stage read from it
// (defaults included), and the digests of files consumed and produced.
class Stage {
 public:
  Stage(std::string name, const json& config, fs::path out)
      : name_(std::move(name)), config_(config), out_(std::move(out)) {
    if (!config_.is_object()) fail(ErrorCode::kInvalidArgument, "config must be a JSON object");
    for (const auto& [key, value] : config_.items()) {
      if (!known_keys().contains(key)) {
        fail(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
      }
    }
    seed_ = config_.contains("seed") ? get_raw<std::uint64_t>("seed") : env_seed();
    resolved_["seed"] = seed_;
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec) fail(ErrorCode::kIo, "cannot create '" + out_.string() + "': " + ec.message());
  }

  std::uint64_t seed() const { return seed_; }

  template <typename T>
  T get(const char* key, T fallback) {
    T v = config_.contains(key) ? get_raw<T>(key) : fallback;
    resolved_[key] = v;
    return v;
  }

  std::string str(const char* key, const std::string& fallback) {
    return get<std::string>(key, fallback);
  }

  std::optional<DateRange> range(const char* key) {
    if (!config_.contains(key)) return std::nullopt;
    const auto text = get_raw<std::string>(key);
    resolved_[key] = text;
    DateRange r = DateRange::parse(text);
    if (r.empty()) fail(ErrorCode::kInvalidArgument, std::string("config key '") + key + "' is empty");
    return r;
  }

  DateRange range_or(const char* key, DateRange fallback) {
    if (auto r = range(key)) return *r;
    resolved_[key] = fallback.str();
    return fallback;
  }

  // Resolves an input path and records its digest.
  std::string input(const char* key, const std::string& fallback) {
    const std::string rel = str(key, fallback);
    const std::string path = resolve(rel);
    if (!fs::is_regular_file(path)) {
      fail(ErrorCode::kIo, std::string(key) + " file not found: '" + path + "'");
    }
    inputs_[key] = {{"path", rel}, {"sha256", sha256_file(path)}};
    return path;
  }

  std::optional<std::string> optional_input(const char* key) {
    if (!config_.contains(key) || config_[key].is_null()) return std::nullopt;
    return input(key, "");
  }

  void output(const std::string& file, std::string_view contents) {
    write_file((out_ / file).string(), contents);
    outputs_[file] = sha256_hex(contents);
  }

  void output_written(const std::string& path) {
    const std::string file = fs::path(path).filename().string();
    outputs_[file] = sha256_file(path);
  }

  std::string resolve(const std::string& rel) const {
    fs::path p(rel);
    return (p.is_absolute() ? p : out_ / p).string();
  }

  const fs::path& out() const { return out_; }

  StageResult finish(const std::string& manifest_name) {
    ojson m;
    m["stage"] = name_;
    m["version"] = kVersion;
    m["seed"] = seed_;
    m["config"] = resolved_;
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    StageResult r;
    r.manifest = m.dump(2) + "\n";
    r.manifest_path = (out_ / manifest_name).string();
    write_file(r.manifest_path, r.manifest);
    return r;
  }

 private:
  template <typename T>
  T get_raw(const char* key) const {
    try {
      return config_.at(key).get<T>();
    } catch (const json::exception& e) {
      fail(ErrorCode::kInvalidArgument, std::string("config key '") + key + "': " + e.what());
    }
  }

  std::string name_;
  json config_;
  fs::path out_;
  std::uint64_t seed_ = 42;
  ojson resolved_ = ojson::object();
  ojson inputs_ = ojson::object();
  ojson outputs_ = ojson::object();
};

std::string truth_json(const corpus::SynthTruth& t) {
  ojson j;
  j["diagnosed_users"] = t.diagnosed_users;
  j["control_users"] = t.control_users;
  j["diagnosis_tweet_ids"] = t.diagnosis_tweet_ids;
  return j.dump(2) + "\n";
}

std::vector<corpus::SpikeDay> parse_spike_days(const json& j) {
  std::vector<corpus::SpikeDay> out;
  for (const auto& s : j) {
    out.push_back({Date::parse(s.at("date").get<std::string>()), s.at("multiplier").get<double>()});
  }
  return out;
}

StageResult run_synth(Stage& st) {
  const std::string preset = st.str("preset", "development");
  const bool experiment = preset == "experiment";
  if (!experiment && preset != "development") {
    fail(ErrorCode::kInvalidArgument, "unknown synth preset '" + preset + "'");
  }
  corpus::SynthConfig c;
  c.seed = st.seed();
  if (experiment) {
    c.n_diagnosed_users = 40;
    c.n_control_users = 960;
    c.date_range = {Date::from_ymd(2019, 12, 1), Date::from_ymd(2019, 12, 28)};
    c.control_signal_rate = 0.05;
    c.spike_days = {{Date::from_ymd(2019, 12, 25), 2.0}};
  }
  c.n_diagnosed_users = st.get<std::size_t>("n_diagnosed", c.n_diagnosed_users);
  c.n_control_users = st.get<std::size_t>("n_control", c.n_control_users);
  c.tweets_per_user_min = st.get<std::size_t>("tweets_min", c.tweets_per_user_min);
  c.tweets_per_user_max = st.get<std::size_t>("tweets_max", c.tweets_per_user_max);
  c.date_range = st.range_or("date_range", c.date_range);
  c.signal_rate = st.get<double>("signal_rate", c.signal_rate);
  c.control_signal_rate = st.get<double>("control_signal_rate", c.control_signal_rate);
  c.max_signal_tokens = st.get<std::size_t>("max_signal_tokens", c.max_signal_tokens);
  c.country = st.str("country", c.country);
  c.major_lang = st.str("major_lang", c.major_lang);
  c.minor_lang = st.str("minor_lang", c.minor_lang);
  c.offlang_user_rate = st.get<double>("offlang_user_rate", c.offlang_user_rate);
  c.offlang_major_share = st.get<double>("offlang_major_share", c.offlang_major_share);
  c.background_vocab_size = st.get<std::size_t>("background_vocab_size", c.background_vocab_size);
  c.tweet_len_min = st.get<std::size_t>("tweet_len_min", c.tweet_len_min);
  c.tweet_len_max = st.get<std::size_t>("tweet_len_max", c.tweet_len_max);
  c.allow_short_users = st.get<bool>("allow_short_users", c.allow_short_users);
  {
    json spikes = json::array();
    for (const auto& s : c.spike_days) spikes.push_back({{"date", s.date.str()}, {"multiplier", s.multiplier}});
    spikes = st.get<json>("spike_days", spikes);
    c.spike_days = parse_spike_days(spikes);
  }

  const auto synth = corpus::synth_corpus(c);
  if (experiment) {
    st.output("experiment.jsonl", corpus::export_corpus(synth.store));
    st.output("truth_experiment.json", truth_json(synth.truth));
    return st.finish("manifest_synth_experiment.json");
  }
  std::vector<AnnotationRecord> verdicts;
  for (const auto& id : synth.truth.diagnosis_tweet_ids) verdicts.push_back({id, Verdict::kGenuine});
  st.output("corpus.jsonl", corpus::export_corpus(synth.store));
  st.output("annotations.tsv", corpus::format_annotations(verdicts));
  st.output("truth.json", truth_json(synth.truth));
  return st.finish("manifest_synth.json");
}

StageResult run_label(Stage& st) {
  corpus::FieldSchema schema;
  schema.id = st.str("field_id", schema.id);
  schema.user_id = st.str("field_user_id", schema.user_id);
  schema.created_at = st.str("field_created_at", schema.created_at);
  schema.text = st.str("field_text", schema.text);
  schema.country = st.str("field_country", schema.country);
  schema.lang = st.str("field_lang", schema.lang);

  const auto loaded = corpus::load_corpus(st.input("corpus", "corpus.jsonl"), schema);
  const auto& store = loaded.store;
  if (store.empty()) fail(ErrorCode::kInvalidArgument, "corpus has no valid tweets");
  const std::string annotations_path = st.input("annotations", "annotations.tsv");
  const std::string country = st.str("country", "GB");
  const auto patterns = st.get<std::vector<std::string>>("patterns", corpus::default_diagnosis_patterns());
  const DateRange diag_window = st.range_or("diagnosed_window", store.range());
  const DateRange control_window = st.range_or("control_window", store.range());
  const DateRange history_window = st.range_or("history_window", store.range());
  const auto control_cap = st.get<std::size_t>("control_cap", 10000);
  const auto per_user_cap = st.get<std::size_t>("per_user_cap", 5000);
  corpus::FilterConfig filter;
  filter.min_tweets = st.get<std::size_t>("min_tweets", filter.min_tweets);
  filter.lang_threshold = st.get<double>("lang_threshold", filter.lang_threshold);
  filter.major_lang = st.str("major_lang", filter.major_lang);

  const auto candidates = corpus::select_diagnosed_candidates(store, patterns, diag_window, country);
  UserSet diagnosed;
  try {
    diagnosed = corpus::apply_annotations(candidates, corpus::load_annotations(annotations_path));
  } catch (const MissingAnnotationError& e) {
    // Leave a template beside the outputs for the annotators to fill in.
    std::string todo = "# Replace ? with genuine or non-genuine.\n";
    const std::set<std::string> missing(e.tweet_ids().begin(), e.tweet_ids().end());
    for (const auto& c : candidates) {
      if (!missing.contains(c.exemplar.id)) continue;
      std::string text = c.exemplar.text;
      std::replace(text.begin(), text.end(), '\n', ' ');
      todo += "# " + c.user_id + ": " + text + "\n" + c.exemplar.id + "\t?\n";
    }
    write_file((st.out() / "annotations_todo.tsv").string(), todo);
    throw;
  }
  const UserSet control = corpus::build_control(store, control_window, country, diagnosed, control_cap);

  auto d_tl = corpus::collect_history(store, {diagnosed.begin(), diagnosed.end()}, history_window,
                                      per_user_cap, Group::kDiagnosed);
  auto c_tl = corpus::collect_history(store, {control.begin(), control.end()}, history_window,
                                      per_user_cap, Group::kControl);
  const auto d_kept = corpus::filter_users(d_tl, filter);
  const auto c_kept = corpus::filter_users(c_tl, filter);
  std::vector<UserTimeline> all = d_kept;
  all.insert(all.end(), c_kept.begin(), c_kept.end());

  std::string timelines;
  for (const auto& t : all) timelines += corpus::timeline_to_json(t) + "\n";
  st.output("timelines.jsonl", timelines);
  st.output("rejects.jsonl", corpus::rejects_to_ndjson(loaded.rejects));

  ojson rep;
  rep["tweets_loaded"] = store.size();
  rep["lines_rejected"] = loaded.rejects.size();
  rep["candidates"] = candidates.size();
  rep["diagnosed_users"] = diagnosed.size();
  rep["control_users"] = control.size();
  rep["diagnosed_kept"] = d_kept.size();
  rep["control_kept"] = c_kept.size();
  std::size_t d_tweets = 0, c_tweets = 0;
  for (const auto& t : d_kept) d_tweets += t.tweets.size();
  for (const auto& t : c_kept) c_tweets += t.tweets.size();
  rep["diagnosed_tweets"] = d_tweets;
  rep["control_tweets"] = c_tweets;
  st.output("label_report.json", rep.dump(2) + "\n");
  return st.finish("manifest_label.json");
}

std::string samples_text(const std::vector<Sample>& samples) {
  std::string out;
  for (const auto& s : samples) out += sampling::sample_to_json(s) + "\n";
  return out;
}

ojson counts_json(const std::vector<Sample>& samples) {
  const auto [control, diagnosed] = sampling::class_counts(samples);
  return {{"control", control}, {"diagnosed", diagnosed}};
}

StageResult run_build(Stage& st) {
  const auto timelines = corpus::load_timelines(st.input("timelines", "timelines.jsonl"));
  const auto rep = parse_representation(st.str("representation", "individual"));
  sampling::SplitConfig sc;
  sc.train_fraction = st.get<double>("train_fraction", sc.train_fraction);
  sc.seed = derive_seed(st.seed(), "split");
  const std::string unit = st.str("split_unit", "user");
  if (unit == "user") {
    sc.unit = sampling::SplitUnit::kUser;
  } else if (unit == "sample") {
    sc.unit = sampling::SplitUnit::kSample;
  } else {
    fail(ErrorCode::kInvalidArgument, "split_unit must be user or sample");
  }
  const auto min_count = st.get<std::size_t>("min_count", 2);

  const auto samples = sampling::build_samples(timelines, rep);
  const auto parts = sampling::split(samples, sc);
  const auto vocab = features::build_vocab(parts.train, min_count);
  st.output("train.jsonl", samples_text(parts.train));
  st.output("validation.jsonl", samples_text(parts.validation));
  st.output("vocab.tsv", vocab.serialize());
  ojson r;
  r["representation"] = representation_name(rep);
  r["train"] = counts_json(parts.train);
  r["validation"] = counts_json(parts.validation);
  r["vocab_size"] = vocab.size();
  r["vocab_hash"] = vocab.hash();
  st.output("build_report.json", r.dump(2) + "\n");
  return st.finish("manifest_build.json");
}

models::TrainConfig train_config(Stage& st) {
  models::TrainConfig c;
  c.learning_rate = st.get<double>("learning_rate", c.learning_rate);
  c.batch_size = st.get<std::size_t>("batch_size", c.batch_size);
  c.epochs = st.get<std::size_t>("epochs", c.epochs);
  c.optimizer = models::parse_optimizer(st.str("optimizer", models::optimizer_name(c.optimizer)));
  c.beta1 = st.get<double>("beta1", c.beta1);
  c.beta2 = st.get<double>("beta2", c.beta2);
  c.epsilon = st.get<double>("epsilon", c.epsilon);
  c.svm_lambda = st.get<double>("svm_lambda", c.svm_lambda);
  c.embed_dim = st.get<std::size_t>("embed_dim", c.embed_dim);
  c.hidden_dim = st.get<std::size_t>("hidden_dim", c.hidden_dim);
  c.max_len = st.get<std::size_t>("max_len", c.max_len);
  c.seed = derive_seed(st.seed(), "train");
  c.validate();
  return c;
}

StageResult run_train(Stage& st) {
  auto samples = sampling::load_samples(st.input("train", "train.jsonl"));
  const auto vocab = features::Vocabulary::load(st.input("vocab", "vocab.tsv"));
  const auto family = models::parse_family(st.str("model", "svm"));
  const auto regime = sampling::parse_regime(st.str("regime", "imbalanced"));
  const double weight = st.get<double>("diagnosed_weight", 1.0);
  const std::string model_file = st.str("model_file", "model.json");
  const auto config = train_config(st);

  samples = sampling::rebalance(samples, regime, derive_seed(st.seed(), "rebalance"));
  samples = sampling::apply_class_weights(std::move(samples), weight);
  const auto model = models::train(family, samples, vocab, config);
  st.output(model_file, models::serialize_model(*model, config));
  ojson r;
  r["model_id"] = models::model_id(*model);
  r["family"] = models::family_name(family);
  r["regime"] = sampling::regime_name(regime);
  r["diagnosed_weight"] = weight;
  r["samples"] = counts_json(samples);
  st.output("train_report.json", r.dump(2) + "\n");
  return st.finish("manifest_train.json");
}

// Loads the model and vocabulary named by the config and checks they belong
// together.
std::pair<models::LoadedModel, features::Vocabulary> model_and_vocab(Stage& st) {
  auto loaded = models::load_model(st.input("model_file", "model.json"));
  auto vocab = features::Vocabulary::load(st.input("vocab", "vocab.tsv"));
  if (vocab.hash() != loaded.model->vocab_hash()) {
    fail(ErrorCode::kHashMismatch, "model " + loaded.id + " was trained with vocabulary " +
                                       loaded.model->vocab_hash().substr(0, 12) +
                                       " but the given vocabulary is " +
                                       vocab.hash().substr(0, 12));
  }
  return {std::move(loaded), std::move(vocab)};
}

StageResult run_eval(Stage& st) {
  auto samples = sampling::load_samples(st.input("validation", "validation.jsonl"));
  auto [loaded, vocab] = model_and_vocab(st);
  const auto regime = sampling::parse_regime(st.str("validation_regime", "imbalanced"));
  samples = sampling::rebalance(samples, regime, derive_seed(st.seed(), "rebalance-validation"));

  std::vector<Label> predicted, gold;
  std::string lines;
  for (const auto& s : samples) {
    if (s.label == Label::kUnknown) {
      fail(ErrorCode::kInvalidArgument, "validation sample " + s.span.str() + " has no label");
    }
    const auto p = loaded.model->predict(s.tokens, vocab);
    predicted.push_back(p.label);
    gold.push_back(s.label);
    ojson j;
    j["user_id"] = s.user_id;
    j["span"] = s.span.str();
    j["label"] = static_cast<int>(s.label);
    j["predicted"] = static_cast<int>(p.label);
    j["score"] = p.score;
    lines += j.dump() + "\n";
  }
  const auto cm = eval::confusion(predicted, gold);
  const auto m = eval::metrics(cm);
  st.output("predictions.jsonl", lines);
  st.output("metrics.json", eval::metrics_json(cm, m, "validation"));
  st.output("metrics.txt", eval::metrics_table(m, loaded.id));
  return st.finish("manifest_eval.json");
}

StageResult run_significance(Stage& st) {
  const std::string preds = read_file(st.input("predictions", "predictions.jsonl"));
  std::vector<double> observed(2, 0.0);
  for (const auto& line : split(preds, '\n')) {
    if (trim(line).empty()) continue;
    try {
      const int p = json::parse(line).at("predicted").get<int>();
      if (p != 0 && p != 1) fail(ErrorCode::kParse, "prediction must be 0 or 1");
      observed[static_cast<std::size_t>(p)] += 1;
    } catch (const json::exception& e) {
      fail(ErrorCode::kParse, std::string("malformed prediction line: ") + e.what());
    }
  }
  // The development distribution is the labelled train and validation data.
  std::vector<double> prior(2, 0.0);
  for (const char* key : {"train", "validation"}) {
    const auto samples = sampling::load_samples(
        st.input(key, std::string(key) + ".jsonl"));
    const auto [c, d] = sampling::class_counts(samples);
    prior[0] += static_cast<double>(c);
    prior[1] += static_cast<double>(d);
  }
  std::vector<eval::SignificanceResult> results;
  results.push_back(eval::chi_square(observed, eval::Baseline::kUniform));
  results.push_back(eval::chi_square(observed, eval::Baseline::kWeighted, prior));
  st.output("significance.json", eval::significance_json(results));
  st.output("significance.txt", eval::significance_table(results, st.str("country", "GB")));
  return st.finish("manifest_significance.json");
}

StageResult run_deploy(Stage& st) {
  const auto loaded_corpus = corpus::load_corpus(st.input("experiment", "experiment.jsonl"));
  const auto& store = loaded_corpus.store;
  auto [loaded, vocab] = model_and_vocab(st);
  const std::string country = st.str("country", "GB");
  const DateRange window = st.range_or("experiment_window", store.range());
  const auto rep = parse_representation(st.str("representation", "individual"));
  const bool soft = st.get<bool>("soft", false);

  std::map<std::string, UserTimeline> by_user;
  for (const auto& t : store.tweets()) {
    if (t.country != country || !window.contains(t.timestamp)) continue;
    auto& tl = by_user[t.user_id];
    tl.user_id = t.user_id;
    tl.group = Group::kUnlabeled;
    tl.tweets.push_back(t);
  }
  std::vector<UserTimeline> timelines;
  for (auto& [user, tl] : by_user) timelines.push_back(std::move(tl));
  auto series = dynamics::rate_series(*loaded.model, vocab, timelines, rep, soft);
  series.country = country;
  st.output("rates.json", dynamics::series_to_json(series));
  return st.finish("manifest_deploy.json");
}

StageResult run_report(Stage& st) {
  const auto series = dynamics::series_from_json(read_file(st.input("rates", "rates.json")));
  std::vector<dynamics::KeyDate> key_dates;
  if (auto path = st.optional_input("key_dates")) key_dates = dynamics::load_key_dates(*path);
  const auto window = st.get<std::size_t>("smoothing_window", 7);
  const double threshold = st.get<double>("spike_threshold", 0.5);
  const auto baseline = st.get<std::size_t>("baseline_window", 7);

  const auto smoothed = dynamics::moving_average(series.points, window);
  const auto spikes = dynamics::detect_spikes(series.points, threshold, baseline);
  const auto files = dynamics::report(series, smoothed, key_dates, spikes, st.out().string());
  st.output_written(files.csv);
  st.output_written(files.svg);
  st.output_written(files.summary);
  return st.finish("manifest_report.json");
}

json parse_config(std::string_view text) {
  if (trim(text).empty()) return json::object();
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {"synth", "label",  "build",  "train",
                                                 "eval",  "significance", "deploy", "report"};
  return names;
}

StageResult run_stage(std::string_view stage, std::string_view config_json,
                      const std::string& out_dir) {
  if (out_dir.empty()) fail(ErrorCode::kInvalidArgument, "output directory is required");
  Stage st(std::string(stage), parse_config(config_json), out_dir);
  if (stage == "synth") return run_synth(st);
  if (stage == "label") return run_label(st);
  if (stage == "build") return run_build(st);
  if (stage == "train") return run_train(st);
  if (stage == "eval") return run_eval(st);
  if (stage == "significance") return run_significance(st);
  if (stage == "deploy") return run_deploy(st);
  if (stage == "report") return run_report(st);
  fail(ErrorCode::kInvalidArgument, "unknown stage '" + std::string(stage) + "'");
}

StageResult rerun(const std::string& manifest_path, const std::string& out_dir) {
  json m;
  try {
    m = json::parse(read_file(manifest_path));
    const std::string out =
        out_dir.empty() ? fs::path(manifest_path).parent_path().string() : out_dir;
    const fs::path out_path = out.empty() ? fs::path(".") : fs::path(out);
    for (const auto& [key, rec] : m.at("inputs").items()) {
      fs::path p(rec.at("path").get<std::string>());
      if (!p.is_absolute()) p = out_path / p;
      if (!fs::is_regular_file(p)) {
        fail(ErrorCode::kIo, key + " file not found: '" + p.string() + "'");
      }
      const std::string want = rec.at("sha256").get<std::string>();
      if (sha256_file(p.string()) != want) {
        fail(ErrorCode::kHashMismatch, "input '" + p.string() + "' no longer matches the manifest");
      }
    }
    return run_stage(m.at("stage").get<std::string>(), m.at("config").dump(), out_path.string());
  } catch (const json::exception& e) {
    fail(ErrorCode::kParse, "malformed manifest '" + manifest_path + "': " + e.what());
  }
}

std::string config_from_file(const std::string& path) {
  const json j = parse_config(read_file(path));
  if (j.is_object() && j.contains("stage") && j.contains("config")) return j.at("config").dump();
  return j.dump();
}

}  // namespace mhd::pipeline
