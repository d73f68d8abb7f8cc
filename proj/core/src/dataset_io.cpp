#include "zodfo/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <string_view>
#include <system_error>

namespace zodfo {

namespace {

struct SparseEntry {
  int index;  // 1-based
  double value;
};

struct SparseRow {
  double label;
  std::vector<SparseEntry> entries;
};

// Strict double parse; allows one leading '+'. Returns nullopt on any
// trailing garbage.
std::optional<double> parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

std::optional<int> parse_index(std::string_view text) {
  if (text.empty()) return std::nullopt;
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::optional<int> dimension_hint,
                     std::vector<std::string>* warnings) {
  if (dimension_hint && *dimension_hint < 1) {
    throw std::invalid_argument("parse_libsvm: dimension hint must be positive");
  }
  std::vector<SparseRow> rows;
  int max_index = 0;
  std::string line;
  std::size_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);

    // Walk whitespace-separated tokens, tracking 1-based column offsets.
    std::size_t pos = 0;
    auto next_token = [&](std::size_t& token_column) -> std::string_view {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      token_column = pos + 1;
      const std::size_t start = pos;
      while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
      return std::string_view(line).substr(start, pos - start);
    };

    std::size_t column = 0;
    const std::string_view label_token = next_token(column);
    if (label_token.empty()) continue;  // blank or comment-only line

    SparseRow row;
    const auto label = parse_double(label_token);
    if (!label) throw ParseError(lineno, column, "malformed label");
    row.label = *label;

    int previous_index = 0;
    while (true) {
      const std::string_view token = next_token(column);
      if (token.empty()) break;
      const std::size_t colon = token.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(lineno, column, "expected index:value pair");
      }
      const auto index = parse_index(token.substr(0, colon));
      if (!index) throw ParseError(lineno, column, "malformed feature index");
      if (*index < 1) {
        throw ParseError(lineno, column, "feature indices are 1-based");
      }
      if (*index == previous_index) {
        throw ParseError(lineno, column, "duplicate feature index");
      }
      if (*index < previous_index) {
        throw ParseError(lineno, column,
                         "feature indices must be strictly increasing");
      }
      const auto value = parse_double(token.substr(colon + 1));
      if (!value) {
        throw ParseError(lineno, column + colon + 1, "malformed feature value");
      }
      row.entries.push_back(SparseEntry{*index, *value});
      previous_index = *index;
    }
    max_index = std::max(max_index, previous_index);
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw ParseError(lineno + 1, 1, "no examples in stream");
  if (dimension_hint && *dimension_hint < max_index) {
    throw std::invalid_argument(
        "parse_libsvm: dimension hint " + std::to_string(*dimension_hint) +
        " is smaller than observed index " + std::to_string(max_index));
  }
  const int d = dimension_hint ? *dimension_hint : max_index;
  if (d < 1) throw std::invalid_argument("parse_libsvm: no feature indices seen");

  Dataset data;
  data.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), d);
  data.labels.resize(static_cast<Eigen::Index>(rows.size()));
  bool all_01 = true;
  bool any_zero = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    data.labels[static_cast<Eigen::Index>(i)] = rows[i].label;
    all_01 = all_01 && (rows[i].label == 0.0 || rows[i].label == 1.0);
    any_zero = any_zero || rows[i].label == 0.0;
    for (const SparseEntry& e : rows[i].entries) {
      data.features(static_cast<Eigen::Index>(i), e.index - 1) = e.value;
    }
  }
  if (all_01 && any_zero) {
    for (Eigen::Index i = 0; i < data.labels.size(); ++i) {
      data.labels[i] = data.labels[i] == 0.0 ? -1.0 : 1.0;
    }
    if (warnings) {
      warnings->push_back("labels in {0,1} remapped to {-1,+1}");
    }
  }
  return data;
}

Dataset parse_dense_csv(std::istream& in, int label_column) {
  if (label_column < 0) {
    throw std::invalid_argument("parse_dense_csv: label column must be >= 0");
  }

  std::vector<std::vector<double>> numeric_rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  bool first_data_row = true;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string_view> cells;
    std::vector<std::size_t> cell_columns;
    std::size_t start = 0;
    const std::string_view view(line);
    while (true) {
      const std::size_t comma = view.find(',', start);
      std::string_view cell = comma == std::string_view::npos
                                  ? view.substr(start)
                                  : view.substr(start, comma - start);
      std::size_t column = start + 1;
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
        cell.remove_prefix(1);
        ++column;
      }
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) {
        cell.remove_suffix(1);
      }
      cells.push_back(cell);
      cell_columns.push_back(column);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }

    if (first_data_row) {
      // Header sniffing: any non-numeric cell marks a header row.
      bool numeric = true;
      for (const auto cell : cells) {
        if (!parse_double(cell)) {
          numeric = false;
          break;
        }
      }
      if (!numeric) continue;  // header, skip
    }

    std::vector<double> row;
    row.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_double(cells[c]);
      if (!v) throw ParseError(lineno, cell_columns[c], "non-numeric cell");
      row.push_back(*v);
    }
    if (first_data_row) {
      width = row.size();
      first_data_row = false;
      if (static_cast<std::size_t>(label_column) >= width) {
        throw std::invalid_argument("parse_dense_csv: label column " +
                                    std::to_string(label_column) +
                                    " outside row width " + std::to_string(width));
      }
      if (width < 2) {
        throw ParseError(lineno, 1, "rows need a label and at least one feature");
      }
    } else if (row.size() != width) {
      throw ParseError(lineno, 1,
                       "ragged row: expected " + std::to_string(width) +
                           " cells, got " + std::to_string(row.size()));
    }
    numeric_rows.push_back(std::move(row));
  }

  if (numeric_rows.empty()) throw ParseError(lineno + 1, 1, "no examples in stream");

  const Eigen::Index n = static_cast<Eigen::Index>(numeric_rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(width - 1);
  Dataset data;
  data.features.resize(n, d);
  data.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = numeric_rows[static_cast<std::size_t>(i)];
    data.labels[i] = row[static_cast<std::size_t>(label_column)];
    Eigen::Index k = 0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == static_cast<std::size_t>(label_column)) continue;
      data.features(i, k++) = row[c];
    }
  }
  return data;
}

}  // namespace zodfo
