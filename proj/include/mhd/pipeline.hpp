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

#ifndef MHD_PIPELINE_HPP_
#define MHD_PIPELINE_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace mhd::pipeline {

inline constexpr const char* kVersion = "0.1.0";

// synth, label, build, train, eval, significance, deploy, report.
const std::vector<std::string>& stage_names();

struct StageResult {
  std::string manifest_path;
  std::string manifest;  // JSON text as written
};

// Runs one stage. `config_json` is a flat JSON object; relative paths in it
// resolve against `out_dir`. The seed comes from the "seed" key, then the
// MHD_SEED environment variable, then 42. Writes manifest_<stage>.json.
StageResult run_stage(std::string_view stage, std::string_view config_json,
                      const std::string& out_dir);

// Re-executes the stage recorded in a manifest. Input files must still hash
// to the recorded digests. An empty `out_dir` means the manifest's directory.
StageResult rerun(const std::string& manifest_path, const std::string& out_dir = "");

// Accepts either a plain config object or a stage manifest, whose recorded
// config is returned.
std::string config_from_file(const std::string& path);

}  // namespace mhd::pipeline

#endif  // MHD_PIPELINE_HPP_
