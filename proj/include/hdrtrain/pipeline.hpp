#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hdrtrain/dataset.hpp"
#include "hdrtrain/metrics.hpp"
#include "hdrtrain/report.hpp"

namespace hdrtrain {

// Everything `prepare` needs. Seeds left unset are derived from `seed`.
struct PipelineConfig {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  Task task = Task::Denoise;
  std::vector<std::string> conditions;  // empty: the whole registry
  DisplayModel display;

  std::uint64_t seed = 0;
  std::optional<std::uint64_t> split_seed;
  std::optional<std::uint64_t> exposure_seed;
  std::optional<std::uint64_t> noise_seed;
  std::optional<std::uint64_t> patch_seed;

  SplitSpec split;
  ExposureAugmentSpec exposure{0, 0.1, 0.9, 0};
  std::vector<std::string> exposure_splits{"test"};
  DegradeParams degrade;
  double normalize_nits = 0.0;  // 0 disables exposure normalization
  int patch_size = 0;           // 0 disables patch extraction
  int patches_per_image = 0;
  std::vector<std::string> patch_splits{"train"};
};

// Applies one `key = value` setting. Throws ContractError for unknown keys
// or unparsable values.
void set_config_value(PipelineConfig& config, const std::string& key, const std::string& value);

// Reads `key = value` lines ('#' starts a comment). A `preset` key is applied
// before all other keys; `overrides` are applied last. Relative directories
// resolve against the config file's directory.
PipelineConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::pair<std::string, std::string>>& overrides = {});
PipelineConfig parse_config_text(const std::string& text,
                                 const std::vector<std::pair<std::string, std::string>>& overrides = {});

// Applies a named preset: "hdr" (5 extra test exposures) or "raw" (hdr plus
// 20-nit exposure normalization and 4x super-resolution).
void apply_preset(PipelineConfig& config, const std::string& name);

nlohmann::json config_to_json(const PipelineConfig& config);

// Sorted *.pfm files of a directory, by file name.
std::vector<std::filesystem::path> list_pfm(const std::filesystem::path& dir);

// Materializes the dataset tree and writes manifest.json; returns the
// manifest. All inputs are validated before anything is written.
nlohmann::json prepare_dataset(const PipelineConfig& config);

struct ExternalScores {
  std::string name;
  std::filesystem::path csv;  // columns: condition,image_id,score
  bool higher_is_better = true;
};

struct EvaluateOptions {
  std::vector<Metric> metrics{Metric::PuPsnr, Metric::PuSsim};
  DisplayModel display;
  GroupingOptions grouping;
  std::vector<ExternalScores> external;
};

// Scores every condition directory against the reference directory. File
// names must match exactly across directories.
EvaluationReport evaluate_directories(
    const std::filesystem::path& ref_dir,
    const std::vector<std::pair<std::string, std::filesystem::path>>& conditions,
    const EvaluateOptions& options = {});

}  // namespace hdrtrain
