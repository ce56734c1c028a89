#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace reseval {

// Sample Pearson correlation. Throws PreconditionError when lengths differ,
// fewer than 2 points are given, or either sequence is constant.
double pcc(std::span<const double> x, std::span<const double> y);

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> x);

// Spearman correlation: pcc of average ranks.
double srcc(std::span<const double> x, std::span<const double> y);

// Per-utterance records keyed by id; numeric cells may be missing.
struct ScoreTable {
  std::vector<std::string> columns;  // numeric column names, excluding id
  std::vector<std::string> ids;
  std::vector<std::vector<std::optional<double>>> rows;
  // Non-numeric columns (e.g. a group label) kept verbatim.
  std::vector<std::string> text_columns;
  std::vector<std::vector<std::string>> text_rows;

  int column(const std::string& name) const;
  int text_column(const std::string& name) const;
};

// Reads a CSV with a header. The first column named "id" (or, failing that,
// the first column) holds utterance ids, which must be unique. A column whose
// non-empty cells all parse as numbers is numeric; the rest are text.
ScoreTable read_score_table(const std::filesystem::path& path);
ScoreTable parse_score_table(const std::string& csv_text);

struct Correlation {
  double pcc = 0.0;
  double srcc = 0.0;
  std::size_t n = 0;
};

// Drops rows with a missing cell in either column. Throws PreconditionError
// naming the available columns when a column is unknown, and when fewer than
// two usable rows remain.
Correlation correlate_table(const ScoreTable& table, const std::string& metric_col,
                            const std::string& score_col);

// Same, restricted to rows whose `group_col` cell (numeric or text) equals
// `group`.
Correlation correlate_table(const ScoreTable& table, const std::string& metric_col,
                            const std::string& score_col,
                            const std::string& group_col, const std::string& group);

// Distinct values of a grouping column in first-appearance order.
std::vector<std::string> group_values(const ScoreTable& table,
                                      const std::string& group_col);

}  // namespace reseval
