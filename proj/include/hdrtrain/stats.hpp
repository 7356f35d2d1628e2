#pragma once

#include <string>
#include <vector>

namespace hdrtrain {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with `df` degrees of freedom (df > 0).
double student_t_cdf(double t, double df);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;  // two-tailed
  int df = 0;
};

// Paired two-tailed t-test on d = a - b. Zero-variance differences give
// p = 1 when every difference is zero and p = 0 otherwise.
TTestResult paired_ttest(const std::vector<double>& a, const std::vector<double>& b);

// Per-condition score vectors, paired by position (same image order).
struct ScoreMatrix {
  std::vector<std::string> conditions;
  std::vector<std::vector<double>> samples;

  std::size_t size() const { return conditions.size(); }
  // Throws ContractError unless every vector has the same length >= 1.
  void validate() const;
};

double median(std::vector<double> values);

struct PairwiseTests {
  std::vector<std::vector<double>> t;  // t[i][j] for a = i, b = j
  std::vector<std::vector<double>> p;  // symmetric, p[i][i] = 1
};

PairwiseTests pairwise_ttests(const ScoreMatrix& m);

struct GroupRange {
  std::size_t first = 0;  // inclusive positions in sorted order
  std::size_t last = 0;
  bool operator==(const GroupRange&) const = default;
};

struct SignificanceGroups {
  std::vector<std::size_t> order;  // condition indices, best median first
  std::vector<std::string> sorted_conditions;
  std::vector<GroupRange> groups;
  double alpha_used = 0.05;
};

struct GroupingOptions {
  double alpha = 0.05;
  bool bonferroni = false;  // divide alpha by the number of pairs
  bool higher_is_better = true;
};

// Condition indices ordered by median, best first; ties keep input order.
std::vector<std::size_t> median_order(const ScoreMatrix& m, bool higher_is_better = true);

// All maximal contiguous runs (in median order) whose pairs are all
// non-significant, given a precomputed p-value matrix.
std::vector<GroupRange> maximal_runs(const std::vector<std::size_t>& order,
                                     const std::vector<std::vector<double>>& p, double alpha);

SignificanceGroups significance_groups(const ScoreMatrix& m, const GroupingOptions& options = {});

enum class Mark { None, Best, Second };

struct MedianRow {
  std::vector<double> medians;
  std::vector<Mark> marks;
};

// Best marks every condition sharing the top median; Second marks the next
// distinct value.
MedianRow median_table(const ScoreMatrix& m, bool higher_is_better = true);

}  // namespace hdrtrain
