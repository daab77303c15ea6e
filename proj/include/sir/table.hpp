#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace sir {

using RowId = std::size_t;
using ColumnIndex = std::size_t;

// One cell of an ingested table. Text payloads are trimmed and never empty;
// a cell that parses as a plain decimal is always a Number.
class CellValue {
 public:
  enum class Kind { Empty, Text, Number };

  CellValue() = default;
  static CellValue text(std::string value);
  static CellValue number(double value);

  // Classifies a raw field: blank -> Empty, decimal -> Number, else Text.
  static CellValue from_raw(std::string_view raw);

  Kind kind() const noexcept;
  bool is_empty() const noexcept { return kind() == Kind::Empty; }
  bool is_text() const noexcept { return kind() == Kind::Text; }
  bool is_number() const noexcept { return kind() == Kind::Number; }

  const std::string& as_text() const { return std::get<std::string>(value_); }
  double as_number() const { return std::get<double>(value_); }

  // Display form: the text, the shortest round-trip decimal, or "".
  std::string to_string() const;

  friend bool operator==(const CellValue&, const CellValue&) = default;

 private:
  std::variant<std::monostate, std::string, double> value_;
};

// Parses `[+-]?(digits[.digits] | .digits)`. No exponents, separators or units.
std::optional<double> parse_decimal(std::string_view text);
std::string format_decimal(double value);

enum class ColumnKind { Textual, Numeric };

std::string_view to_string(ColumnKind kind);

struct ColumnMeta {
  ColumnIndex index = 0;
  std::string display_name;
  std::string norm_key;
  ColumnKind kind = ColumnKind::Textual;

  friend bool operator==(const ColumnMeta&, const ColumnMeta&) = default;
};

struct LoadOptions {
  char delimiter = ',';
  bool has_header = true;
  std::string source_name;
};

// Immutable table: a header of uniquely-keyed columns and rows addressed by
// their 0-based ingestion ordinal.
class TableDocument {
 public:
  // Builds a table from already-split header and raw data fields, applying
  // cell classification and kind inference. Throws TableError.
  static TableDocument from_fields(const std::vector<std::string>& header,
                                   const std::vector<std::vector<std::string>>& rows,
                                   std::string source_name = {});

  const std::vector<ColumnMeta>& columns() const noexcept { return columns_; }
  const ColumnMeta& column(ColumnIndex index) const { return columns_.at(index); }
  std::size_t column_count() const noexcept { return columns_.size(); }

  std::size_t row_count() const noexcept { return rows_.size(); }
  std::span<const CellValue> row(RowId id) const { return rows_.at(id); }
  const CellValue& cell(RowId row, ColumnIndex column) const { return rows_.at(row).at(column); }

  const std::string& source_name() const noexcept { return source_name_; }

  std::optional<ColumnIndex> find_column(std::string_view norm_key) const;

  friend bool operator==(const TableDocument& a, const TableDocument& b) {
    return a.columns_ == b.columns_ && a.rows_ == b.rows_;
  }

 private:
  TableDocument() = default;

  std::vector<ColumnMeta> columns_;
  std::vector<std::vector<CellValue>> rows_;
  std::string source_name_;
};

// Reads delimiter-separated UTF-8 text (RFC 4180 quoting, LF or CRLF).
// Errors: HeaderRequired, EmptyTable, RaggedRow, DuplicateHeader, BlankHeader,
// UnterminatedQuote.
TableDocument load_table(std::istream& source, const LoadOptions& options = {});
TableDocument load_table(std::string_view text, const LoadOptions& options = {});
TableDocument load_table_file(const std::string& path, LoadOptions options = {});

// Writes the table back in the same format load_table reads.
void write_table(const TableDocument& table, std::ostream& out, char delimiter = ',');

// Values of one column in row order, optionally restricted to `filter_rows`.
// Throws TableError("BadColumn") / TableError("BadRow").
std::vector<CellValue> column_values(const TableDocument& table, ColumnIndex column,
                                     std::optional<std::span<const RowId>> filter_rows = std::nullopt);

struct ColumnHit {
  ColumnIndex column = 0;
  std::size_t occurrences = 0;

  friend bool operator==(const ColumnHit&, const ColumnHit&) = default;
};

// Normalized text value -> columns containing it. Only Text cells of Textual
// columns are indexed; numeric columns must be named explicitly in queries.
class ValueIndex {
 public:
  // Hits are sorted by column index. Unknown keys give an empty span.
  std::span<const ColumnHit> lookup(std::string_view norm_value) const;

  // Number of tokens in the longest indexed value, as an upper bound for
  // multi-word matching.
  std::size_t max_value_tokens() const noexcept { return max_value_tokens_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  friend ValueIndex build_value_index(const TableDocument& table);

  std::unordered_map<std::string, std::vector<ColumnHit>> entries_;
  std::size_t max_value_tokens_ = 0;
};

ValueIndex build_value_index(const TableDocument& table);

}  // namespace sir
