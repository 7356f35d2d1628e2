#include "hdrtrain/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "hdrtrain/curves.hpp"
#include "hdrtrain/degrade.hpp"
#include "hdrtrain/error.hpp"
#include "hdrtrain/pfm.hpp"
#include "hdrtrain/pipeline.hpp"
#include "hdrtrain/report.hpp"
#include "hdrtrain/transfer.hpp"

namespace hdrtrain {
namespace fs = std::filesystem;

namespace {

// Bad flag values discovered after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kEncodingNames = {"linear", "mulaw", "mu-law", "pq", "pu21"};
const std::vector<std::string> kTaskNames = {"denoise", "deblur", "superres4x"};

std::pair<std::string, std::string> split_assignment(const std::string& s, const char* what) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) {
    throw UsageError(std::string(what) + " expects NAME=VALUE, got '" + s + "'");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

struct DisplayFlags {
  double peak = 4000.0;
  double black = 0.005;

  void add(CLI::App* cmd) {
    cmd->add_option("--peak", peak, "Display peak luminance in cd/m^2")->capture_default_str();
    cmd->add_option("--black", black, "Display black level in cd/m^2")->capture_default_str();
  }
  DisplayModel model() const {
    DisplayModel d{black, peak};
    try {
      d.validate();
    } catch (const ContractError& e) {
      throw UsageError(e.what());
    }
    return d;
  }
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

std::vector<std::pair<std::string, fs::path>> condition_dirs_under(const fs::path& root) {
  if (!fs::is_directory(root)) throw ContractError("not a directory: '" + root.string() + "'");
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory()) names.push_back(e.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  std::vector<std::pair<std::string, fs::path>> out;
  for (const auto& c : condition_registry()) {
    auto it = std::find(names.begin(), names.end(), c.label);
    if (it != names.end()) {
      out.emplace_back(*it, root / *it);
      names.erase(it);
    }
  }
  for (const auto& n : names) out.emplace_back(n, root / n);
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perceptual HDR/RAW training-data encodings, degradations and evaluation"};
  app.name(args.empty() ? "hdrtrain" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  std::function<void()> action;

  // encode
  auto* encode = app.add_subcommand("encode", "Encode a linear PFM image, or dump transfer curves");
  std::string enc_in, enc_out, enc_name, curve_csv;
  double enc_mu = EncodingKind::kDefaultMu;
  int curve_points = 256;
  DisplayFlags enc_display;
  encode->add_option("input", enc_in, "Linear input .pfm");
  encode->add_option("output", enc_out, "Encoded output .pfm");
  encode->add_option("--encoding,-e", enc_name, "linear | mulaw | pq | pu21")
      ->transform(CLI::IsMember(kEncodingNames, CLI::ignore_case));
  encode->add_option("--mu", enc_mu, "mu-law constant")->capture_default_str();
  encode->add_option("--curve-csv", curve_csv, "Write the transfer-curve table instead of encoding");
  encode->add_option("--points", curve_points, "Rows in the curve table")->capture_default_str();
  enc_display.add(encode);
  encode->callback([&] {
    action = [&] {
      if (!curve_csv.empty()) {
        write_text(curve_csv, transfer_curve_csv(curve_points));
        return;
      }
      if (enc_in.empty() || enc_out.empty() || enc_name.empty()) {
        throw UsageError("encode needs INPUT, OUTPUT and --encoding (or --curve-csv)");
      }
      const EncodingKind kind = parse_encoding(enc_name, enc_mu);
      write_pfm(encode_image(read_pfm(enc_in), kind, enc_display.model()), enc_out);
    };
  });

  // decode
  auto* decode = app.add_subcommand("decode", "Decode an encoded PFM image back to relative linear");
  std::string dec_in, dec_out, dec_name;
  double dec_mu = EncodingKind::kDefaultMu;
  DisplayFlags dec_display;
  decode->add_option("input", dec_in, "Encoded input .pfm")->required();
  decode->add_option("output", dec_out, "Linear output .pfm")->required();
  decode->add_option("--encoding,-e", dec_name, "linear | mulaw | pq | pu21")
      ->required()
      ->transform(CLI::IsMember(kEncodingNames, CLI::ignore_case));
  decode->add_option("--mu", dec_mu, "mu-law constant")->capture_default_str();
  dec_display.add(decode);
  decode->callback([&] {
    action = [&] {
      const EncodingKind kind = parse_encoding(dec_name, dec_mu);
      const LinearImage raw = read_pfm(dec_in);
      write_pfm(decode_image(EncodedImage(raw.pixels(), kind), dec_display.model()), dec_out);
    };
  });

  // degrade
  auto* degrade = app.add_subcommand("degrade", "Apply a task degradation to a linear PFM image");
  std::string deg_in, deg_out, deg_task;
  DegradeParams deg_params;
  degrade->add_option("input", deg_in, "Linear input .pfm")->required();
  degrade->add_option("output", deg_out, "Linear output .pfm")->required();
  degrade->add_option("--task,-t", deg_task, "denoise | deblur | superres4x")
      ->required()
      ->transform(CLI::IsMember(kTaskNames, CLI::ignore_case));
  degrade->add_option("--seed", deg_params.noise.seed, "Noise seed")->capture_default_str();
  degrade->add_option("--photon-gain", deg_params.noise.photon_gain, "Photon noise variance per unit signal")
      ->capture_default_str();
  degrade->add_option("--readout-std", deg_params.noise.readout_std, "Readout noise standard deviation")
      ->capture_default_str();
  degrade->add_option("--blur-sigma", deg_params.blur.sigma, "Gaussian blur sigma in pixels")
      ->capture_default_str();
  degrade->add_option("--factor", deg_params.sr_factor, "Downsampling factor")->capture_default_str();
  degrade->callback([&] {
    action = [&] {
      write_pfm(degrade_for_task(parse_task(deg_task), read_pfm(deg_in), deg_params), deg_out);
    };
  });

  // prepare
  auto* prepare = app.add_subcommand("prepare", "Materialize split, augmented, degraded and encoded pairs");
  std::string prep_config, prep_input, prep_output, prep_task, prep_preset;
  std::vector<std::string> prep_sets;
  std::uint64_t prep_seed = 0;
  prepare->add_option("--config,-c", prep_config, "key = value configuration file");
  prepare->add_option("--input-dir", prep_input, "Directory of linear .pfm sources (overrides config)");
  prepare->add_option("--output-dir", prep_output, "Output tree root (overrides config)");
  prepare->add_option("--task", prep_task, "denoise | deblur | superres4x (overrides config)")
      ->transform(CLI::IsMember(kTaskNames, CLI::ignore_case));
  prepare->add_option("--preset", prep_preset, "hdr | raw | none (overrides config)");
  auto* seed_opt = prepare->add_option("--seed", prep_seed, "Global seed (overrides config)");
  prepare->add_option("--set", prep_sets, "Extra KEY=VALUE overrides, applied last");
  prepare->callback([&] {
    action = [&] {
      std::vector<std::pair<std::string, std::string>> overrides;
      if (!prep_input.empty()) overrides.emplace_back("input_dir", prep_input);
      if (!prep_output.empty()) overrides.emplace_back("output_dir", prep_output);
      if (!prep_task.empty()) overrides.emplace_back("task", prep_task);
      if (!prep_preset.empty()) overrides.emplace_back("preset", prep_preset);
      if (seed_opt->count() > 0) overrides.emplace_back("seed", std::to_string(prep_seed));
      for (const auto& s : prep_sets) overrides.push_back(split_assignment(s, "--set"));
      PipelineConfig config;
      try {
        config = prep_config.empty() ? parse_config_text("", overrides) : load_config(prep_config, overrides);
      } catch (const ContractError& e) {
        throw UsageError(e.what());
      }
      const auto manifest = prepare_dataset(config);
      out << "prepared " << manifest.at("entries").size() << " pairs ("
          << manifest.at("samples").size() << " samples) in " << config.output_dir.string() << "\n";
      out << "seeds: " << manifest.at("seeds").dump() << "\n";
    };
  });

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score condition outputs against references and test significance");
  std::string ev_ref, ev_out, ev_root;
  std::vector<std::string> ev_tests, ev_external;
  std::string ev_metrics = "pu-psnr,pu-ssim";
  GroupingOptions ev_grouping;
  DisplayFlags ev_display;
  evaluate->add_option("--ref,-r", ev_ref, "Reference directory of linear .pfm files")->required();
  evaluate->add_option("--test", ev_tests, "LABEL=DIR of linear outputs for one condition (repeatable)");
  evaluate->add_option("--test-root", ev_root, "Directory whose subdirectories are conditions");
  evaluate->add_option("--metrics,-m", ev_metrics, "Comma list of pu-psnr, pu-ssim")->capture_default_str();
  evaluate->add_option("--alpha", ev_grouping.alpha, "Significance level")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  evaluate->add_flag("--bonferroni", ev_grouping.bonferroni, "Divide alpha by the number of pairs");
  evaluate->add_option("--external", ev_external,
                       "NAME=CSV of externally computed scores (condition,image_id,score)");
  evaluate->add_option("--out,-o", ev_out, "Report output directory")->required();
  ev_display.add(evaluate);
  evaluate->callback([&] {
    action = [&] {
      std::vector<std::pair<std::string, fs::path>> conditions;
      if (!ev_root.empty()) conditions = condition_dirs_under(ev_root);
      for (const auto& t : ev_tests) {
        auto [label, dir] = split_assignment(t, "--test");
        conditions.emplace_back(label, dir);
      }
      if (conditions.empty()) throw UsageError("evaluate needs --test LABEL=DIR or --test-root");
      EvaluateOptions opt;
      opt.display = ev_display.model();
      opt.grouping = ev_grouping;
      opt.metrics.clear();
      std::stringstream ms(ev_metrics);
      std::string name;
      while (std::getline(ms, name, ',')) {
        try {
          opt.metrics.push_back(parse_metric(name));
        } catch (const ContractError& e) {
          throw UsageError(e.what());
        }
      }
      for (const auto& e : ev_external) {
        auto [n, path] = split_assignment(e, "--external");
        opt.external.push_back({n, path, true});
      }
      const EvaluationReport report = evaluate_directories(ev_ref, conditions, opt);
      write_report(report, ev_out);
      out << report_summary(report);
    };
  });

  // report
  auto* report_cmd = app.add_subcommand("report", "Summarize a report.json and regenerate its tables");
  std::string rep_in, rep_out;
  report_cmd->add_option("report", rep_in, "report.json from evaluate")->required();
  report_cmd->add_option("--out,-o", rep_out, "Directory for regenerated report files");
  report_cmd->callback([&] {
    action = [&] {
      std::ifstream in(rep_in);
      if (!in) throw ContractError("cannot open '" + rep_in + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ContractError(rep_in + ": " + e.what());
      }
      const EvaluationReport report = report_from_json(j);
      if (!rep_out.empty()) write_report(report, rep_out);
      out << report_summary(report);
    };
  });

  // curves
  auto* curves = app.add_subcommand("curves", "Write the transfer-curve table as CSV");
  std::string curves_out;
  int curves_points = 256;
  curves->add_option("--out,-o", curves_out, "Output CSV (stdout when omitted)");
  curves->add_option("--points", curves_points, "Rows in the table")->capture_default_str();
  curves->callback([&] {
    action = [&] {
      const std::string csv = transfer_curve_csv(curves_points);
      if (curves_out.empty()) {
        out << csv;
      } else {
        write_text(curves_out, csv);
      }
    };
  });

  // conditions
  auto* conds = app.add_subcommand("conditions", "Print the condition registry as JSON");
  conds->callback([&] { action = [&] { out << registry_to_json().dump(2) << "\n"; }; });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("hdrtrain");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // Help requests carry exit code 0 and print to `out`.
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (action) action();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace hdrtrain
