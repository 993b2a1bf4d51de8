#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bt::pipeline {

// A pipeline config is a JSON document; see validate() for the schema. Paths
// are resolved relative to the config file's directory.
struct PipelineConfig {
  nlohmann::json raw;
  std::filesystem::path base_dir;

  static PipelineConfig load(const std::string& path);
  static PipelineConfig from_json(nlohmann::json j, std::filesystem::path base_dir = ".");

  std::filesystem::path resolve(const std::string& p) const;
};

struct Plan {
  struct Stage {
    std::string name;
    std::string detail;
  };
  std::vector<Stage> stages;
};

// Validation reports every problem at once instead of stopping at the first.
struct Validation {
  std::vector<std::string> errors;
  Plan plan;
  bool ok() const { return errors.empty(); }
};

Validation validate_config(const PipelineConfig& cfg);

struct RunOutputs {
  std::filesystem::path mixed_src, mixed_tgt, manifest;
  std::filesystem::path bpe_model, bpe_src, bpe_tgt;  // empty unless bpe_merges > 0
};

// Executes the configured strategy end to end: load, optional clean/dedup/
// tokenize, build backends, back-translate, mix, optional joint BPE, write
// outputs plus a manifest. Throws ConfigError listing the validation errors if
// the config does not validate.
RunOutputs run(const PipelineConfig& cfg);

}  // namespace bt::pipeline
