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

// mhd command line front end. Every subcommand runs one pipeline stage through
// the C API and prints the stage manifest on success.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mhd/mhd.h"

namespace {

using json = nlohmann::json;

int print_error(int status, const std::string& message) {
  json j;
  j["status"] = status;
  j["error"] = mhd_status_string(static_cast<mhd_status>(status));
  j["message"] = message;
  std::cerr << j.dump() << "\n";
  return status;
}

int print_last_error(mhd_status status) {
  std::cerr << mhd_last_error_json() << "\n";
  return static_cast<int>(status);
}

struct StageOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> representation, regime, model, preset;
  std::optional<double> diagnosed_weight;
  // Input files, made absolute so they do not resolve against --out.
  std::map<std::string, std::string> paths;
  std::map<std::string, std::string> schema;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, StageOptions& o) {
  cmd->add_option("--config", o.config, "JSON config file or a stage manifest")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output directory")->required();
  cmd->add_option("--seed", o.seed, "Random seed (default: $MHD_SEED, then 42)");
  cmd->add_option("--set", o.sets, "Config override KEY=JSON_VALUE (repeatable)");
}

void add_path(CLI::App* cmd, StageOptions& o, const std::string& flag, const std::string& key,
              const std::string& help) {
  cmd->add_option_function<std::string>(
      "--" + flag, [&o, key](const std::string& v) { o.paths[key] = v; }, help);
}

std::string build_config(const StageOptions& o, const std::string& stage) {
  json cfg = json::object();
  if (!o.config.empty()) {
    char* text = nullptr;
    mhd_status st = mhd_config_from_file(o.config.c_str(), &text);
    if (st != MHD_OK) throw st;
    cfg = json::parse(text);
    mhd_string_free(text);
  }
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw CLI::ValidationError("--set", "expected KEY=VALUE, got '" + kv + "'");
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    // Bare words are taken as strings.
    json v = json::parse(value, nullptr, false);
    cfg[key] = v.is_discarded() ? json(value) : v;
  }
  if (o.seed) cfg["seed"] = *o.seed;
  if (o.representation) cfg["representation"] = *o.representation;
  if (o.model) cfg["model"] = *o.model;
  if (o.preset) cfg["preset"] = *o.preset;
  if (o.diagnosed_weight) cfg["diagnosed_weight"] = *o.diagnosed_weight;
  if (o.regime) cfg[stage == "eval" ? "validation_regime" : "regime"] = *o.regime;
  for (const auto& [key, path] : o.paths) {
    cfg[key] = std::filesystem::absolute(path).lexically_normal().string();
  }
  for (const auto& [key, field] : o.schema) cfg[key] = field;
  return cfg.dump();
}

int run(const std::string& stage, const StageOptions& o) {
  const std::string cfg = build_config(o, stage);
  char* manifest = nullptr;
  const mhd_status st = mhd_run_stage(stage.c_str(), cfg.c_str(), o.out.c_str(), &manifest);
  if (st != MHD_OK) return print_last_error(st);
  std::cout << manifest;
  mhd_string_free(manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distant-supervision depression corpus and rate-of-depression pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mhd_version()));

  const std::vector<std::string> stages = {"synth", "label",        "build",  "train",
                                           "eval",  "significance", "deploy", "report"};
  const std::map<std::string, std::string> help = {
      {"synth", "Generate a synthetic corpus with ground truth"},
      {"label", "Select, annotate and filter Diagnosed and Control users"},
      {"build", "Build samples, the train/validation split and the vocabulary"},
      {"train", "Train a classifier"},
      {"eval", "Score the validation split"},
      {"significance", "Chi-square test of the predictions against random baselines"},
      {"deploy", "Daily rate of depression over an experiment corpus"},
      {"report", "Smooth the rates, detect spikes and write CSV/SVG/JSON"}};

  std::map<std::string, StageOptions> opts;
  std::map<std::string, CLI::App*> cmds;
  for (const auto& s : stages) {
    auto* cmd = app.add_subcommand(s, help.at(s));
    auto& o = opts[s];
    add_common(cmd, o);
    cmds[s] = cmd;
  }
  auto rep_check = CLI::IsMember({"individual", "user-day", "user-week", "all-user"});
  auto regime_check = CLI::IsMember({"balanced", "imbalanced"});
  auto model_check = CLI::IsMember({"svm", "avepl"});

  cmds["synth"]->add_option("--preset", opts["synth"].preset, "development or experiment")
      ->check(CLI::IsMember({"development", "experiment"}));

  {
    auto* c = cmds["label"];
    auto& o = opts["label"];
    add_path(c, o, "corpus", "corpus", "Tweet archive (NDJSON)");
    add_path(c, o, "annotations", "annotations", "Annotation TSV");
    for (const char* f : {"id", "user-id", "created-at", "text", "country", "lang"}) {
      std::string key = std::string("field_") + f;
      for (auto& ch : key) if (ch == '-') ch = '_';
      c->add_option_function<std::string>(
          std::string("--field-") + f, [&o, key](const std::string& v) { o.schema[key] = v; },
          std::string("Archive field holding the tweet ") + f);
    }
  }
  for (const char* s : {"build", "deploy"}) {
    cmds[s]->add_option("--representation", opts[s].representation)->check(rep_check);
  }
  {
    auto* c = cmds["train"];
    auto& o = opts["train"];
    c->add_option("--model", o.model, "svm or avepl")->check(model_check);
    c->add_option("--regime", o.regime, "Training regime")->check(regime_check);
    c->add_option("--diagnosed-weight", o.diagnosed_weight, "Loss weight of Diagnosed samples")
        ->check(CLI::PositiveNumber);
  }
  cmds["eval"]->add_option("--regime", opts["eval"].regime, "Validation regime")
      ->check(regime_check);
  add_path(cmds["deploy"], opts["deploy"], "experiment", "experiment", "Experiment corpus");
  add_path(cmds["report"], opts["report"], "key-dates", "key_dates", "Key dates CSV");

  std::string rerun_manifest, rerun_out;
  auto* rerun = app.add_subcommand("rerun", "Re-execute a stage from its manifest");
  rerun->add_option("manifest", rerun_manifest, "manifest_<stage>.json")
      ->required()
      ->check(CLI::ExistingFile);
  rerun->add_option("--out", rerun_out, "Output directory (default: the manifest's)");

  bool show = false;
  std::vector<std::string> texts;
  auto* pre = app.add_subcommand("preprocess", "Debug the tweet normalizer");
  pre->add_flag("--show", show, "Print the token sequence, one token per line");
  pre->add_option("text", texts, "Texts to normalize (default: stdin lines)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return print_error(MHD_ERR_INVALID_ARGUMENT, e.what());
  }

  try {
    for (const auto& s : stages) {
      if (cmds[s]->parsed()) return run(s, opts[s]);
    }
    if (rerun->parsed()) {
      char* manifest = nullptr;
      const mhd_status st = mhd_rerun(rerun_manifest.c_str(), rerun_out.c_str(), &manifest);
      if (st != MHD_OK) return print_last_error(st);
      std::cout << manifest;
      mhd_string_free(manifest);
      return 0;
    }
    if (pre->parsed()) {
      if (texts.empty()) {
        for (std::string line; std::getline(std::cin, line);) texts.push_back(line);
      }
      for (std::size_t i = 0; i < texts.size(); ++i) {
        char* tokens = nullptr;
        const mhd_status st = mhd_normalize_text(texts[i].c_str(), &tokens);
        if (st != MHD_OK) return print_last_error(st);
        if (i > 0 && show) std::cout << "\n";
        if (show) {
          std::cout << tokens;
        } else {
          std::string joined(tokens);
          for (auto& ch : joined) if (ch == '\n') ch = ' ';
          if (!joined.empty()) joined.pop_back();
          std::cout << joined << "\n";
        }
        mhd_string_free(tokens);
      }
      return 0;
    }
  } catch (mhd_status st) {
    return print_last_error(st);
  } catch (const CLI::Error& e) {
    return print_error(MHD_ERR_INVALID_ARGUMENT, e.what());
  } catch (const json::exception& e) {
    return print_error(MHD_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    return print_error(MHD_ERR_INTERNAL, e.what());
  }
  return 0;
}
