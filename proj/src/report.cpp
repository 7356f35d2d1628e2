#include "hdrtrain/report.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hdrtrain/error.hpp"

namespace hdrtrain {
namespace {

using nlohmann::json;

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json matrix_json(const std::vector<std::vector<double>>& m) {
  json rows = json::array();
  for (const auto& r : m) {
    json row = json::array();
    for (double v : r) row.push_back(number_or_null(v));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string mark_name(Mark m) {
  switch (m) {
    case Mark::Best:
      return "best";
    case Mark::Second:
      return "second";
    case Mark::None:
      break;
  }
  return "";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

std::string file_safe(const std::string& name) {
  std::string out;
  for (char c : name) {
    out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_';
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

MetricReport analyze_metric(std::string name, ScoreMatrix scores, const GroupingOptions& options) {
  scores.validate();
  MetricReport r;
  r.name = std::move(name);
  r.higher_is_better = options.higher_is_better;
  r.medians = median_table(scores, options.higher_is_better);
  r.tests = pairwise_ttests(scores);
  r.groups = significance_groups(scores, options);
  r.scores = std::move(scores);
  return r;
}

json encoding_to_json(const EncodingKind& kind) {
  json j = {{"name", std::string(encoding_name(kind.tag))}};
  if (kind.tag == Encoding::MuLaw) j["mu"] = kind.mu;
  return j;
}

json condition_to_json(const Condition& c) {
  json loss = {{"name", loss_name(c.loss)}};
  if (const auto* e = std::get_if<EncodedL1Loss>(&c.loss)) {
    loss["encoding"] = encoding_to_json(e->encoding);
  } else if (const auto* s = std::get_if<SmapeLoss>(&c.loss)) {
    loss["epsilon"] = s->epsilon;
  }
  return {{"label", c.label}, {"encoding", encoding_to_json(c.encoding)}, {"loss", loss}};
}

json registry_to_json() {
  json arr = json::array();
  for (const auto& c : condition_registry()) arr.push_back(condition_to_json(c));
  return arr;
}

json report_to_json(const EvaluationReport& report) {
  json metrics = json::array();
  for (const auto& m : report.metrics) {
    json groups = json::array();
    for (const auto& g : m.groups.groups) {
      json members = json::array();
      for (std::size_t i = g.first; i <= g.last; ++i) members.push_back(m.groups.sorted_conditions[i]);
      groups.push_back(members);
    }
    json medians = json::object();
    json marks = json::object();
    json scores = json::object();
    for (std::size_t i = 0; i < m.scores.size(); ++i) {
      const auto& label = m.scores.conditions[i];
      medians[label] = number_or_null(m.medians.medians[i]);
      marks[label] = mark_name(m.medians.marks[i]);
      json col = json::array();
      for (double v : m.scores.samples[i]) col.push_back(number_or_null(v));
      scores[label] = std::move(col);
    }
    metrics.push_back({{"name", m.name},
                       {"higher_is_better", m.higher_is_better},
                       {"conditions", m.scores.conditions},
                       {"scores", scores},
                       {"medians", medians},
                       {"marks", marks},
                       {"t", matrix_json(m.tests.t)},
                       {"p", matrix_json(m.tests.p)},
                       {"sorted_conditions", m.groups.sorted_conditions},
                       {"alpha_used", m.groups.alpha_used},
                       {"groups", groups}});
  }
  return {{"format", "hdrtrain-evaluation-report"},
          {"version", 1},
          {"alpha", report.alpha},
          {"bonferroni", report.bonferroni},
          {"conditions", report.conditions},
          {"image_ids", report.image_ids},
          {"metrics", metrics}};
}

EvaluationReport report_from_json(const json& j) {
  if (j.value("format", "") != "hdrtrain-evaluation-report") {
    throw ContractError("not an evaluation report");
  }
  EvaluationReport r;
  r.alpha = j.at("alpha").get<double>();
  r.bonferroni = j.at("bonferroni").get<bool>();
  r.conditions = j.at("conditions").get<std::vector<std::string>>();
  r.image_ids = j.at("image_ids").get<std::vector<std::string>>();
  for (const auto& jm : j.at("metrics")) {
    ScoreMatrix s;
    s.conditions = jm.at("conditions").get<std::vector<std::string>>();
    for (const auto& label : s.conditions) {
      std::vector<double> col;
      for (const auto& v : jm.at("scores").at(label)) {
        col.push_back(v.is_null() ? std::nan("") : v.get<double>());
      }
      s.samples.push_back(std::move(col));
    }
    GroupingOptions opt{r.alpha, r.bonferroni, jm.value("higher_is_better", true)};
    r.metrics.push_back(analyze_metric(jm.at("name").get<std::string>(), std::move(s), opt));
  }
  return r;
}

std::string median_table_csv(const EvaluationReport& report) {
  std::ostringstream os;
  os << "metric";
  for (const auto& c : report.conditions) os << ',' << csv_field(c);
  os << '\n';
  for (const auto& m : report.metrics) {
    os << csv_field(m.name);
    for (const auto& c : report.conditions) {
      os << ',';
      for (std::size_t i = 0; i < m.scores.size(); ++i) {
        if (m.scores.conditions[i] == c) os << format_number(m.medians.medians[i]);
      }
    }
    os << '\n' << csv_field(m.name + " rank");
    for (const auto& c : report.conditions) {
      os << ',';
      for (std::size_t i = 0; i < m.scores.size(); ++i) {
        if (m.scores.conditions[i] == c) os << mark_name(m.medians.marks[i]);
      }
    }
    os << '\n';
  }
  return os.str();
}

std::string violin_csv(const MetricReport& metric, const std::vector<std::string>& image_ids) {
  std::ostringstream os;
  os << "image_id";
  for (const auto& c : metric.scores.conditions) os << ',' << csv_field(c);
  os << '\n';
  for (std::size_t k = 0; k < image_ids.size(); ++k) {
    os << csv_field(image_ids[k]);
    for (const auto& col : metric.scores.samples) os << ',' << format_number(col[k]);
    os << '\n';
  }
  return os.str();
}

std::string report_summary(const EvaluationReport& report) {
  std::ostringstream os;
  os << "N = " << report.image_ids.size() << " images, alpha = " << report.alpha
     << (report.bonferroni ? " (Bonferroni)" : "") << '\n';
  for (const auto& m : report.metrics) {
    os << '\n' << m.name << " medians (best first):\n";
    for (std::size_t pos = 0; pos < m.groups.order.size(); ++pos) {
      const std::size_t i = m.groups.order[pos];
      const std::string mark = mark_name(m.medians.marks[i]);
      os << "  " << m.scores.conditions[i] << "  " << format_number(m.medians.medians[i])
         << (mark.empty() ? "" : "  [" + mark + "]") << '\n';
    }
    os << "  groups (no significant difference within a group):\n";
    for (const auto& g : m.groups.groups) {
      os << "   ";
      for (std::size_t i = g.first; i <= g.last; ++i) os << ' ' << m.groups.sorted_conditions[i];
      os << '\n';
    }
  }
  return os.str();
}

void write_report(const EvaluationReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text(dir / "report.json", report_to_json(report).dump(2) + "\n");
  write_text(dir / "median_table.csv", median_table_csv(report));
  for (const auto& m : report.metrics) {
    write_text(dir / ("violin_" + file_safe(m.name) + ".csv"), violin_csv(m, report.image_ids));
  }
}

}  // namespace hdrtrain
