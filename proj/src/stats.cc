#include "reseval/stats.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "reseval/csv.h"
#include "reseval/error.h"

namespace reseval {
namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("correlation: length mismatch");
  if (x.size() < 2) throw PreconditionError("correlation: need at least 2 points");
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string available_columns(const ScoreTable& t) {
  std::string out;
  for (const auto& c : t.columns) out += (out.empty() ? "" : ", ") + c;
  for (const auto& c : t.text_columns) out += (out.empty() ? "" : ", ") + c;
  return out;
}

std::string format_group(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

double pcc(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw PreconditionError("correlation undefined for a constant sequence");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&x](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    // Positions i..j (0-based) share rank mean(i+1 .. j+1).
    const double rank = (static_cast<double>(i + j) + 2.0) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double srcc(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pcc(rx, ry);
}

int ScoreTable::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

int ScoreTable::text_column(const std::string& name) const {
  auto it = std::find(text_columns.begin(), text_columns.end(), name);
  return it == text_columns.end() ? -1 : static_cast<int>(it - text_columns.begin());
}

ScoreTable parse_score_table(const std::string& csv_text) {
  const CsvTable csv = parse_csv(csv_text);
  if (csv.header.empty()) throw FormatError("score table: empty header");
  int id_col = csv.column("id");
  if (id_col < 0) id_col = 0;

  ScoreTable table;
  std::set<std::string> seen;
  for (const auto& row : csv.rows) {
    const std::string& id = row[static_cast<std::size_t>(id_col)];
    if (!seen.insert(id).second) {
      throw FormatError("score table: duplicate id '" + id + "'");
    }
    table.ids.push_back(id);
  }

  std::vector<std::size_t> numeric, text;
  for (std::size_t c = 0; c < csv.header.size(); ++c) {
    if (static_cast<int>(c) == id_col) continue;
    bool is_numeric = true;
    for (const auto& row : csv.rows) {
      if (!row[c].empty() && !parse_number(row[c])) {
        is_numeric = false;
        break;
      }
    }
    (is_numeric ? numeric : text).push_back(c);
  }
  for (std::size_t c : numeric) table.columns.push_back(csv.header[c]);
  for (std::size_t c : text) table.text_columns.push_back(csv.header[c]);
  for (const auto& row : csv.rows) {
    std::vector<std::optional<double>> values;
    for (std::size_t c : numeric) values.push_back(parse_number(row[c]));
    table.rows.push_back(std::move(values));
    std::vector<std::string> texts;
    for (std::size_t c : text) texts.push_back(row[c]);
    table.text_rows.push_back(std::move(texts));
  }
  return table;
}

ScoreTable read_score_table(const std::filesystem::path& path) {
  return parse_score_table(read_text(path));
}

namespace {

Correlation correlate_rows(const ScoreTable& table, const std::string& metric_col,
                           const std::string& score_col,
                           const std::vector<std::size_t>& rows) {
  const int mc = table.column(metric_col);
  const int sc = table.column(score_col);
  for (const auto* name : {&metric_col, &score_col}) {
    if (table.column(*name) < 0) {
      throw PreconditionError("column '" + *name +
                              "' not found among numeric columns; available: " +
                              available_columns(table));
    }
  }
  std::vector<double> xs, ys;
  for (std::size_t r : rows) {
    const auto& x = table.rows[r][static_cast<std::size_t>(mc)];
    const auto& y = table.rows[r][static_cast<std::size_t>(sc)];
    if (x && y) {
      xs.push_back(*x);
      ys.push_back(*y);
    }
  }
  if (xs.size() < 2) {
    throw PreconditionError("fewer than 2 complete rows for '" + metric_col +
                            "' vs '" + score_col + "'");
  }
  return {pcc(xs, ys), srcc(xs, ys), xs.size()};
}

std::string group_cell(const ScoreTable& table, const std::string& group_col,
                       std::size_t row) {
  if (int c = table.column(group_col); c >= 0) {
    return format_group(table.rows[row][static_cast<std::size_t>(c)]);
  }
  if (int c = table.text_column(group_col); c >= 0) {
    return table.text_rows[row][static_cast<std::size_t>(c)];
  }
  throw PreconditionError("group column '" + group_col +
                          "' not found; available: " + available_columns(table));
}

}  // namespace

Correlation correlate_table(const ScoreTable& table, const std::string& metric_col,
                            const std::string& score_col) {
  std::vector<std::size_t> rows(table.rows.size());
  std::iota(rows.begin(), rows.end(), 0);
  return correlate_rows(table, metric_col, score_col, rows);
}

Correlation correlate_table(const ScoreTable& table, const std::string& metric_col,
                            const std::string& score_col,
                            const std::string& group_col, const std::string& group) {
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (group_cell(table, group_col, r) == group) rows.push_back(r);
  }
  return correlate_rows(table, metric_col, score_col, rows);
}

std::vector<std::string> group_values(const ScoreTable& table,
                                      const std::string& group_col) {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::string v = group_cell(table, group_col, r);
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  }
  return out;
}

}  // namespace reseval
