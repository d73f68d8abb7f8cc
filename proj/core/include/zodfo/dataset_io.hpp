#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zodfo/problems.hpp"

namespace zodfo {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/*! Sparse text rows `<label> <index>:<value> ...` with 1-based, strictly
 *  increasing indices per row and `#` starting a comment. The result is
 *  densified; the dimension is the largest index seen unless dimension_hint
 *  raises it (a hint smaller than an observed index is an error).
 *
 *  Labels that are all in {0, 1} are remapped to {-1, +1}; the remap is
 *  reported through `warnings` when provided.
 */
Dataset parse_libsvm(std::istream& in,
                     std::optional<int> dimension_hint = std::nullopt,
                     std::vector<std::string>* warnings = nullptr);

/*! Dense comma-separated rows, one example per row, labels in the given
 *  0-based column and every other column a feature. A first row with any
 *  non-numeric cell is treated as a header and skipped. Rows must all have
 *  the same width.
 */
Dataset parse_dense_csv(std::istream& in, int label_column = 0);

}  // namespace zodfo
