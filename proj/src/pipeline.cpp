#include "hdrtrain/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hdrtrain/error.hpp"
#include "hdrtrain/pfm.hpp"
#include "hdrtrain/random.hpp"

namespace hdrtrain {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ContractError("config: '" + key + "' expects a number, got '" + v + "'");
  return d;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  std::uint64_t x = 0;
  try {
    if (!v.empty() && v[0] != '-') x = std::stoull(v, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ContractError("config: '" + key + "' expects an unsigned integer, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != static_cast<int>(d)) throw ContractError("config: '" + key + "' expects an integer");
  return static_cast<int>(d);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ContractError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

PipelineConfig build_config(std::vector<std::pair<std::string, std::string>> pairs,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
  pairs.insert(pairs.end(), overrides.begin(), overrides.end());
  PipelineConfig config;
  // The last preset wins and is applied before any explicit key.
  std::string preset;
  for (const auto& [k, v] : pairs) {
    if (k == "preset") preset = v;
  }
  if (!preset.empty()) apply_preset(config, preset);
  for (const auto& [k, v] : pairs) {
    if (k != "preset") set_config_value(config, k, v);
  }
  return config;
}

std::string rel(const fs::path& p, const fs::path& base) {
  return p.lexically_relative(base).generic_string();
}

}  // namespace

void apply_preset(PipelineConfig& config, const std::string& name) {
  if (name == "hdr") {
    config.exposure.count = 5;
    config.exposure.low = 0.1;
    config.exposure.high = 0.9;
    config.exposure_splits = {"test"};
  } else if (name == "raw") {
    apply_preset(config, "hdr");
    config.normalize_nits = 20.0;
    config.task = Task::SuperRes4x;
  } else if (name != "none") {
    throw ContractError("unknown preset '" + name + "'");
  }
}

void set_config_value(PipelineConfig& c, const std::string& key, const std::string& v) {
  if (key == "input_dir") c.input_dir = v;
  else if (key == "output_dir") c.output_dir = v;
  else if (key == "task") c.task = parse_task(v);
  else if (key == "conditions") {
    c.conditions.clear();
    if (v != "all") {
      for (const auto& label : split_list(v)) c.conditions.push_back(condition_by_label(label).label);
    }
  }
  else if (key == "peak") c.display.peak = to_double(key, v);
  else if (key == "black_level") c.display.black_level = to_double(key, v);
  else if (key == "seed") c.seed = to_u64(key, v);
  else if (key == "split_seed") c.split_seed = to_u64(key, v);
  else if (key == "exposure_seed") c.exposure_seed = to_u64(key, v);
  else if (key == "noise_seed") c.noise_seed = to_u64(key, v);
  else if (key == "patch_seed") c.patch_seed = to_u64(key, v);
  else if (key == "train_frac") c.split.train_frac = to_double(key, v);
  else if (key == "val_frac") c.split.val_frac = to_double(key, v);
  else if (key == "test_frac") c.split.test_frac = to_double(key, v);
  else if (key == "exposure_count") c.exposure.count = to_int(key, v);
  else if (key == "exposure_low") c.exposure.low = to_double(key, v);
  else if (key == "exposure_high") c.exposure.high = to_double(key, v);
  else if (key == "exposure_splits") c.exposure_splits = split_list(v);
  else if (key == "photon_gain") c.degrade.noise.photon_gain = to_double(key, v);
  else if (key == "readout_std") c.degrade.noise.readout_std = to_double(key, v);
  else if (key == "blur_sigma") c.degrade.blur.sigma = to_double(key, v);
  else if (key == "blur_radius") c.degrade.blur.kernel_radius = to_int(key, v);
  else if (key == "sr_factor") c.degrade.sr_factor = to_int(key, v);
  else if (key == "normalize_nits") c.normalize_nits = to_double(key, v);
  else if (key == "patch_size") c.patch_size = to_int(key, v);
  else if (key == "patches_per_image") c.patches_per_image = to_int(key, v);
  else if (key == "patch_splits") c.patch_splits = split_list(v);
  else throw ContractError("config: unknown key '" + key + "'");
}

PipelineConfig parse_config_text(const std::string& text,
                                 const std::vector<std::pair<std::string, std::string>>& overrides) {
  return build_config(parse_pairs(text), overrides);
}

PipelineConfig load_config(const fs::path& path,
                           const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  PipelineConfig config = build_config(parse_pairs(ss.str()), overrides);
  const fs::path base = path.parent_path();
  if (!config.input_dir.empty() && config.input_dir.is_relative()) config.input_dir = base / config.input_dir;
  if (!config.output_dir.empty() && config.output_dir.is_relative()) config.output_dir = base / config.output_dir;
  return config;
}

json config_to_json(const PipelineConfig& c) {
  json conditions = json::array();
  for (const auto& label : c.conditions) conditions.push_back(label);
  return {{"task", std::string(task_name(c.task))},
          {"conditions", conditions},
          {"display", {{"black_level", c.display.black_level}, {"peak", c.display.peak}}},
          {"split", {{"train_frac", c.split.train_frac}, {"val_frac", c.split.val_frac}, {"test_frac", c.split.test_frac}}},
          {"exposure", {{"count", c.exposure.count}, {"low", c.exposure.low}, {"high", c.exposure.high}, {"splits", c.exposure_splits}}},
          {"noise", {{"photon_gain", c.degrade.noise.photon_gain}, {"readout_std", c.degrade.noise.readout_std}}},
          {"blur", {{"sigma", c.degrade.blur.sigma}, {"radius", c.degrade.blur.radius()}}},
          {"sr_factor", c.degrade.sr_factor},
          {"normalize_nits", c.normalize_nits},
          {"patches", {{"size", c.patch_size}, {"per_image", c.patches_per_image}, {"splits", c.patch_splits}}}};
}

std::vector<fs::path> list_pfm(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ContractError("not a directory: '" + dir.string() + "'");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".pfm") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

json prepare_dataset(const PipelineConfig& config) {
  config.display.validate();
  config.split.validate();
  config.exposure.validate();
  if (config.output_dir.empty()) throw ContractError("output_dir is not set");

  // Validate every input before writing anything.
  std::vector<std::string> problems;
  std::vector<fs::path> files;
  // Unpatched splits degrade whole images, which must then divide evenly.
  const bool whole_images_patched = config.patch_size > 0 && contains(config.patch_splits, "train") &&
                                    contains(config.patch_splits, "val") &&
                                    contains(config.patch_splits, "test");
  if (config.input_dir.empty() || !fs::is_directory(config.input_dir)) {
    problems.push_back("input_dir '" + config.input_dir.string() + "' is not a directory");
  } else {
    files = list_pfm(config.input_dir);
    if (files.size() < 5) {
      problems.push_back("input_dir holds " + std::to_string(files.size()) + " .pfm files, need at least 5");
    }
    for (const auto& f : files) {
      try {
        const LinearImage img = read_pfm(f);
        if (config.task == Task::SuperRes4x &&
            (img.width() % config.degrade.sr_factor != 0 || img.height() % config.degrade.sr_factor != 0) &&
            !whole_images_patched) {
          problems.push_back(f.filename().string() + ": dimensions not divisible by sr_factor");
        }
        if (config.patch_size > 0 && (config.patch_size > img.width() || config.patch_size > img.height())) {
          problems.push_back(f.filename().string() + ": smaller than patch_size");
        }
      } catch (const std::exception& e) {
        problems.push_back(e.what());
      }
    }
  }
  if (config.patch_size > 0 && config.task == Task::SuperRes4x &&
      config.patch_size % config.degrade.sr_factor != 0) {
    problems.push_back("patch_size not divisible by sr_factor");
  }
  if (!problems.empty()) {
    std::string msg = "prepare: " + std::to_string(problems.size()) + " problem(s):";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ContractError(msg);
  }

  std::vector<Condition> conditions;
  if (config.conditions.empty()) {
    conditions = condition_registry();
  } else {
    for (const auto& label : config.conditions) conditions.push_back(condition_by_label(label));
  }

  const std::uint64_t split_seed = config.split_seed.value_or(derive_seed(config.seed, "split"));
  const std::uint64_t exposure_seed = config.exposure_seed.value_or(derive_seed(config.seed, "exposure"));
  const std::uint64_t noise_seed = config.noise_seed.value_or(derive_seed(config.seed, "noise"));
  const std::uint64_t patch_seed = config.patch_seed.value_or(derive_seed(config.seed, "patch"));

  std::vector<std::string> ids;
  std::map<std::string, fs::path> by_id;
  for (const auto& f : files) {
    ids.push_back(f.stem().string());
    by_id[f.stem().string()] = f;
  }
  SplitSpec split_spec = config.split;
  split_spec.seed = split_seed;
  const DatasetSplit split = split_dataset(ids, split_spec);

  const fs::path out = config.output_dir;
  json entries = json::array();
  json samples = json::array();
  const std::vector<std::pair<std::string, const std::vector<std::string>*>> splits = {
      {"train", &split.train}, {"val", &split.val}, {"test", &split.test}};

  for (const auto& [split_name, members] : splits) {
    fs::create_directories(out / "clean" / split_name);
    fs::create_directories(out / "degraded" / split_name);
    for (const auto& c : conditions) fs::create_directories(out / "pairs" / c.label / split_name);

    for (const auto& id : *members) {
      LinearImage img = read_pfm(by_id.at(id));
      if (config.normalize_nits > 0.0) img = normalize_exposure(img, config.normalize_nits, config.display);

      ExposureAugmentSpec aug = config.exposure;
      if (!contains(config.exposure_splits, split_name)) aug.count = 0;
      aug.seed = derive_seed(exposure_seed, id);
      const ExposureSet exposures = augment_exposures(img, aug);

      for (std::size_t k = 0; k < exposures.images.size(); ++k) {
        const std::string exposure_name = id + "_e" + std::to_string(k);
        std::vector<std::pair<std::string, LinearImage>> units;
        if (config.patch_size > 0 && contains(config.patch_splits, split_name)) {
          PatchSpec ps{config.patch_size, config.patches_per_image, derive_seed(patch_seed, exposure_name)};
          auto patches = extract_patches(exposures.images[k], ps);
          for (std::size_t p = 0; p < patches.size(); ++p) {
            units.emplace_back(exposure_name + "_p" + std::to_string(p), std::move(patches[p]));
          }
        } else {
          units.emplace_back(exposure_name, exposures.images[k]);
        }

        for (const auto& [name, clean] : units) {
          DegradeParams params = config.degrade;
          params.noise.seed = derive_seed(noise_seed, name);
          const LinearImage degraded = degrade_for_task(config.task, clean, params);
          const std::string degradation = describe_degradation(config.task, params);

          const fs::path clean_path = out / "clean" / split_name / (name + ".pfm");
          const fs::path degraded_path = out / "degraded" / split_name / (name + ".pfm");
          write_pfm(clean, clean_path);
          write_pfm(degraded, degraded_path);
          samples.push_back({{"sample", name},
                             {"image_id", id},
                             {"split", split_name},
                             {"exposure_index", k},
                             {"exposure", exposures.coefficients[k]},
                             {"noise_seed", params.noise.seed},
                             {"degradation", degradation},
                             {"clean", rel(clean_path, out)},
                             {"degraded", rel(degraded_path, out)}});

          for (const auto& cond : conditions) {
            const TrainingPair pair = encode_pair(degraded, clean, cond, config.display, id, degradation);
            const fs::path dir = out / "pairs" / cond.label / split_name;
            const fs::path in_path = dir / (name + "_input.pfm");
            const fs::path target_path = dir / (name + "_target.pfm");
            write_pfm(pair.input, in_path);
            write_pfm(pair.target, target_path);
            entries.push_back({{"sample", name},
                               {"image_id", id},
                               {"split", split_name},
                               {"exposure_index", k},
                               {"exposure", exposures.coefficients[k]},
                               {"task", std::string(task_name(config.task))},
                               {"condition", cond.label},
                               {"encoding", encoding_to_json(cond.encoding)},
                               {"input", rel(in_path, out)},
                               {"target", rel(target_path, out)},
                               {"reference", rel(clean_path, out)}});
          }
        }
      }
    }
  }

  json conds = json::array();
  for (const auto& c : conditions) conds.push_back(condition_to_json(c));
  json manifest = {{"format", "hdrtrain-manifest"},
                   {"version", 1},
                   {"config", config_to_json(config)},
                   {"seeds",
                    {{"seed", config.seed},
                     {"split", split_seed},
                     {"exposure", exposure_seed},
                     {"noise", noise_seed},
                     {"patch", patch_seed}}},
                   {"conditions", conds},
                   {"splits", {{"train", split.train}, {"val", split.val}, {"test", split.test}}},
                   {"samples", samples},
                   {"entries", entries}};
  write_text(out / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

namespace {

std::map<std::pair<std::string, std::string>, double> read_external(const ExternalScores& ext) {
  std::ifstream in(ext.csv);
  if (!in) throw ContractError("cannot open external scores '" + ext.csv.string() + "'");
  std::map<std::pair<std::string, std::string>, double> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const auto cols = split_list(line);
    if (lineno == 1 && cols.size() == 3 && cols[0] == "condition") continue;
    if (cols.size() != 3) {
      throw ContractError(ext.csv.string() + ":" + std::to_string(lineno) + ": expected condition,image_id,score");
    }
    out[{cols[0], cols[1]}] = to_double("score", cols[2]);
  }
  return out;
}

}  // namespace

EvaluationReport evaluate_directories(const fs::path& ref_dir,
                                      const std::vector<std::pair<std::string, fs::path>>& conditions,
                                      const EvaluateOptions& options) {
  options.display.validate();
  if (conditions.empty()) throw ContractError("evaluate: no test directories given");
  std::set<std::string> labels;
  for (const auto& [label, dir] : conditions) {
    if (!labels.insert(label).second) throw ContractError("evaluate: duplicate condition label '" + label + "'");
  }

  const auto ref_files = list_pfm(ref_dir);
  if (ref_files.empty()) throw ContractError("evaluate: no .pfm files in '" + ref_dir.string() + "'");
  std::set<std::string> ref_names;
  for (const auto& f : ref_files) ref_names.insert(f.filename().string());

  std::vector<std::string> mismatches;
  for (const auto& [label, dir] : conditions) {
    std::set<std::string> names;
    for (const auto& f : list_pfm(dir)) names.insert(f.filename().string());
    for (const auto& n : ref_names) {
      if (!names.count(n)) mismatches.push_back(label + ": missing " + n);
    }
    for (const auto& n : names) {
      if (!ref_names.count(n)) mismatches.push_back(label + ": unexpected " + n);
    }
  }
  if (!mismatches.empty()) {
    std::string msg = "evaluate: test directories do not align with the reference:";
    for (const auto& m : mismatches) msg += "\n  " + m;
    throw ContractError(msg);
  }

  EvaluationReport report;
  report.alpha = options.grouping.alpha;
  report.bonferroni = options.grouping.bonferroni;
  for (const auto& [label, dir] : conditions) report.conditions.push_back(label);
  for (const auto& f : ref_files) report.image_ids.push_back(f.stem().string());

  const std::size_t k = conditions.size();
  std::vector<ScoreMatrix> matrices(options.metrics.size());
  for (auto& m : matrices) {
    m.conditions = report.conditions;
    m.samples.assign(k, {});
  }
  for (const auto& ref_path : ref_files) {
    const LinearImage ref = read_pfm(ref_path);
    for (std::size_t c = 0; c < k; ++c) {
      const LinearImage test = read_pfm(conditions[c].second / ref_path.filename());
      if (!test.pixels().same_shape(ref.pixels())) {
        throw ContractError("evaluate: " + conditions[c].first + "/" + ref_path.filename().string() +
                            " differs in size from the reference");
      }
      for (std::size_t m = 0; m < options.metrics.size(); ++m) {
        matrices[m].samples[c].push_back(compute_metric(options.metrics[m], test, ref, options.display));
      }
    }
  }
  for (std::size_t m = 0; m < options.metrics.size(); ++m) {
    report.metrics.push_back(analyze_metric(std::string(metric_name(options.metrics[m])),
                                            std::move(matrices[m]), options.grouping));
  }

  for (const auto& ext : options.external) {
    const auto scores = read_external(ext);
    ScoreMatrix s;
    s.conditions = report.conditions;
    for (const auto& label : report.conditions) {
      std::vector<double> col;
      for (const auto& id : report.image_ids) {
        auto it = scores.find({label, id});
        if (it == scores.end()) {
          throw ContractError("external scores '" + ext.name + "' lack " + label + "/" + id);
        }
        col.push_back(it->second);
      }
      s.samples.push_back(std::move(col));
    }
    GroupingOptions g = options.grouping;
    g.higher_is_better = ext.higher_is_better;
    report.metrics.push_back(analyze_metric(ext.name, std::move(s), g));
  }
  return report;
}

}  // namespace hdrtrain
