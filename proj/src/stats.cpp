#include "hdrtrain/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hdrtrain/error.hpp"

namespace hdrtrain {
namespace {

constexpr double kCfTolerance = 1e-15;
constexpr int kCfMaxIterations = 10000;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kCfMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kCfTolerance) return h;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("incomplete beta requires a > 0 and b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("incomplete beta requires 0 <= x <= 1");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // The fraction converges quickly for x < (a + 1) / (a + b + 2); use the
  // symmetry I_x(a, b) = 1 - I_{1-x}(b, a) otherwise.
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw DomainError("student_t_cdf requires df > 0");
  if (std::isnan(t)) return t;
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  // Tail mass P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2).
  const double x = df / (df + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);
  return t > 0 ? 1.0 - tail : tail;
}

TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw ContractError("paired_ttest: samples differ in length");
  }
  if (a.size() < 2) {
    throw ContractError("paired_ttest: needs at least 2 pairs");
  }
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  TTestResult r;
  r.df = static_cast<int>(n - 1);
  const bool all_zero = std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; });
  if (all_zero) {
    r.t = 0.0;
    r.p = 1.0;
    return r;
  }
  const bool constant = std::all_of(d.begin(), d.end(), [&](double v) { return v == d[0]; });
  if (constant || sd == 0.0) {
    r.t = std::copysign(std::numeric_limits<double>::infinity(), mean);
    r.p = 0.0;
    return r;
  }
  r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const double tail = student_t_cdf(-std::abs(r.t), static_cast<double>(r.df));
  r.p = std::min(1.0, 2.0 * tail);
  return r;
}

void ScoreMatrix::validate() const {
  if (conditions.size() != samples.size()) {
    throw ContractError("ScoreMatrix: label count does not match sample vectors");
  }
  if (samples.empty()) {
    throw ContractError("ScoreMatrix: no conditions");
  }
  const std::size_t n = samples.front().size();
  if (n == 0) throw ContractError("ScoreMatrix: empty sample vectors");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != n) {
      throw ContractError("ScoreMatrix: condition '" + conditions[i] + "' has " +
                          std::to_string(samples[i].size()) + " samples, expected " +
                          std::to_string(n));
    }
  }
}

double median(std::vector<double> values) {
  if (values.empty()) throw ContractError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

PairwiseTests pairwise_ttests(const ScoreMatrix& m) {
  m.validate();
  const std::size_t k = m.size();
  PairwiseTests out;
  out.t.assign(k, std::vector<double>(k, 0.0));
  out.p.assign(k, std::vector<double>(k, 1.0));
  if (m.samples.front().size() < 2) return out;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const TTestResult r = paired_ttest(m.samples[i], m.samples[j]);
      out.t[i][j] = r.t;
      out.t[j][i] = -r.t;
      out.p[i][j] = out.p[j][i] = r.p;
    }
  }
  return out;
}

std::vector<std::size_t> median_order(const ScoreMatrix& m, bool higher_is_better) {
  m.validate();
  std::vector<double> med(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) med[i] = median(m.samples[i]);
  std::vector<std::size_t> order(m.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return higher_is_better ? med[x] > med[y] : med[x] < med[y];
  });
  return order;
}

std::vector<GroupRange> maximal_runs(const std::vector<std::size_t>& order,
                                     const std::vector<std::vector<double>>& p, double alpha) {
  // The longest valid run starting at i ends at e(i), and e is
  // non-decreasing, so [i, e(i)] is maximal exactly when e(i) > e(i - 1).
  std::vector<GroupRange> groups;
  const std::size_t k = order.size();
  std::size_t end = 0;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = std::max(i, end);
    auto joins = [&](std::size_t cand) {
      for (std::size_t m = i; m < cand; ++m) {
        if (p[order[m]][order[cand]] < alpha) return false;
      }
      return true;
    };
    // Positions up to `end` are already known to be compatible with i.
    while (j + 1 < k && joins(j + 1)) ++j;
    if (groups.empty() || j > groups.back().last) groups.push_back({i, j});
    end = j;
  }
  return groups;
}

SignificanceGroups significance_groups(const ScoreMatrix& m, const GroupingOptions& options) {
  m.validate();
  SignificanceGroups g;
  g.order = median_order(m, options.higher_is_better);
  for (std::size_t i : g.order) g.sorted_conditions.push_back(m.conditions[i]);
  const std::size_t k = m.size();
  const std::size_t pairs = k * (k - 1) / 2;
  g.alpha_used = options.bonferroni && pairs > 0 ? options.alpha / static_cast<double>(pairs)
                                                 : options.alpha;
  const PairwiseTests tests = pairwise_ttests(m);
  g.groups = maximal_runs(g.order, tests.p, g.alpha_used);
  return g;
}

MedianRow median_table(const ScoreMatrix& m, bool higher_is_better) {
  m.validate();
  MedianRow row;
  for (const auto& s : m.samples) row.medians.push_back(median(s));
  row.marks.assign(m.size(), Mark::None);
  auto better = [&](double x, double y) { return higher_is_better ? x > y : x < y; };
  std::vector<double> distinct = row.medians;
  std::sort(distinct.begin(), distinct.end(), better);
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (row.medians[i] == distinct[0]) {
      row.marks[i] = Mark::Best;
    } else if (distinct.size() > 1 && row.medians[i] == distinct[1]) {
      row.marks[i] = Mark::Second;
    }
  }
  return row;
}

}  // namespace hdrtrain
