#include "sir/table.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "sir/error.hpp"
#include "sir/lexicon.hpp"

namespace sir {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// RFC 4180 record splitter. Records made of zero characters (blank lines)
// are skipped.
std::vector<std::vector<std::string>> split_records(std::string_view text, char delimiter) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool record_has_content = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    if (record_has_content) {
      end_field();
      records.push_back(std::move(record));
    }
    record.clear();
    field.clear();
    record_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      record_has_content = true;
    } else if (c == delimiter) {
      end_field();
      record_has_content = true;
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (i + 1 < text.size() && text[i + 1] == '\n') continue;
      end_record();
    } else {
      field.push_back(c);
      record_has_content = true;
    }
  }
  if (in_quotes) throw TableError("UnterminatedQuote", "quoted field is not terminated", records.size());
  end_record();
  return records;
}

bool needs_quotes(std::string_view s, char delimiter) {
  if (s.empty()) return false;
  if (is_space(s.front()) || is_space(s.back())) return true;
  return s.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string_view::npos;
}

}  // namespace

CellValue CellValue::text(std::string value) {
  CellValue v;
  v.value_ = std::move(value);
  return v;
}

CellValue CellValue::number(double value) {
  CellValue v;
  v.value_ = value;
  return v;
}

CellValue CellValue::from_raw(std::string_view raw) {
  const auto trimmed = trim(raw);
  if (trimmed.empty()) return CellValue{};
  if (auto n = parse_decimal(trimmed)) return number(*n);
  return text(std::string(trimmed));
}

CellValue::Kind CellValue::kind() const noexcept {
  switch (value_.index()) {
    case 1:
      return Kind::Text;
    case 2:
      return Kind::Number;
    default:
      return Kind::Empty;
  }
}

std::string CellValue::to_string() const {
  switch (kind()) {
    case Kind::Text:
      return as_text();
    case Kind::Number:
      return format_decimal(as_number());
    case Kind::Empty:
      break;
  }
  return {};
}

std::optional<double> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::size_t digits = 0;
  std::size_t dots = 0;
  for (char c : text) {
    if (c >= '0' && c <= '9') {
      ++digits;
    } else if (c == '.') {
      ++dots;
    } else {
      return std::nullopt;
    }
  }
  if (digits == 0 || dots > 1 || text.back() == '.') return std::nullopt;

  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return negative ? -value : value;
}

std::string format_decimal(double value) {
  if (value == 0) return "0";  // also folds -0
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::Numeric ? "numeric" : "textual";
}

TableDocument TableDocument::from_fields(const std::vector<std::string>& header,
                                         const std::vector<std::vector<std::string>>& rows,
                                         std::string source_name) {
  if (header.empty()) throw TableError("EmptyTable", "table has no header");
  if (rows.empty()) throw TableError("EmptyTable", "table has a header but no data rows");

  TableDocument doc;
  doc.source_name_ = std::move(source_name);

  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < header.size(); ++i) {
    ColumnMeta meta;
    meta.index = i;
    meta.display_name = std::string(trim(header[i]));
    meta.norm_key = normalize_key(meta.display_name);
    if (meta.norm_key.empty()) {
      throw TableError("BlankHeader", "header cell " + std::to_string(i + 1) + " has no name", std::nullopt,
                       meta.display_name);
    }
    if (!seen.insert(meta.norm_key).second) {
      throw TableError("DuplicateHeader", "duplicate column name '" + meta.norm_key + "'", std::nullopt,
                       meta.norm_key);
    }
    doc.columns_.push_back(std::move(meta));
  }

  doc.rows_.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw TableError("RaggedRow",
                       "row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                           " cells, expected " + std::to_string(header.size()),
                       r);
    }
    std::vector<CellValue> cells;
    cells.reserve(header.size());
    for (const auto& raw : rows[r]) cells.push_back(CellValue::from_raw(raw));
    doc.rows_.push_back(std::move(cells));
  }

  for (auto& col : doc.columns_) {
    bool all_numeric = true;
    for (const auto& row : doc.rows_) {
      if (row[col.index].is_text()) {
        all_numeric = false;
        break;
      }
    }
    col.kind = all_numeric ? ColumnKind::Numeric : ColumnKind::Textual;
  }
  return doc;
}

std::optional<ColumnIndex> TableDocument::find_column(std::string_view norm_key) const {
  for (const auto& c : columns_) {
    if (c.norm_key == norm_key) return c.index;
  }
  return std::nullopt;
}

TableDocument load_table(std::string_view text, const LoadOptions& options) {
  if (!options.has_header) {
    throw TableError("HeaderRequired", "the first record must name the columns");
  }
  auto records = split_records(text, options.delimiter);
  if (records.empty()) throw TableError("EmptyTable", "input is empty");
  std::vector<std::string> header = std::move(records.front());
  records.erase(records.begin());
  return TableDocument::from_fields(header, records, options.source_name);
}

TableDocument load_table(std::istream& source, const LoadOptions& options) {
  std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  return load_table(std::string_view(text), options);
}

TableDocument load_table_file(const std::string& path, LoadOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TableError("IoError", "cannot open '" + path + "'");
  if (options.source_name.empty()) options.source_name = path;
  return load_table(in, options);
}

void write_table(const TableDocument& table, std::ostream& out, char delimiter) {
  auto put = [&](std::string_view s) {
    if (needs_quotes(s, delimiter)) {
      out << '"';
      for (char c : s) {
        if (c == '"') out << '"';
        out << c;
      }
      out << '"';
    } else {
      out << s;
    }
  };
  for (std::size_t i = 0; i < table.column_count(); ++i) {
    if (i) out << delimiter;
    put(table.column(i).display_name);
  }
  out << '\n';
  for (RowId r = 0; r < table.row_count(); ++r) {
    const auto row = table.row(r);
    if (row.size() == 1 && row[0].is_empty()) {
      out << "\"\"\n";  // a bare empty line would read back as no record
      continue;
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << delimiter;
      put(row[i].to_string());
    }
    out << '\n';
  }
}

std::vector<CellValue> column_values(const TableDocument& table, ColumnIndex column,
                                     std::optional<std::span<const RowId>> filter_rows) {
  if (column >= table.column_count()) {
    throw TableError("BadColumn", "no column with index " + std::to_string(column));
  }
  std::vector<CellValue> out;
  if (!filter_rows) {
    out.reserve(table.row_count());
    for (RowId r = 0; r < table.row_count(); ++r) out.push_back(table.cell(r, column));
    return out;
  }
  std::vector<RowId> ids(filter_rows->begin(), filter_rows->end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (RowId r : ids) {
    if (r >= table.row_count()) throw TableError("BadRow", "no row with id " + std::to_string(r), r);
    out.push_back(table.cell(r, column));
  }
  return out;
}

std::span<const ColumnHit> ValueIndex::lookup(std::string_view norm_value) const {
  const auto it = entries_.find(std::string(norm_value));
  if (it == entries_.end()) return {};
  return it->second;
}

ValueIndex build_value_index(const TableDocument& table) {
  ValueIndex index;
  for (const auto& col : table.columns()) {
    if (col.kind != ColumnKind::Textual) continue;
    for (RowId r = 0; r < table.row_count(); ++r) {
      const auto& cell = table.cell(r, col.index);
      if (!cell.is_text()) continue;
      const auto key = normalize_key(cell.as_text());
      if (key.empty()) continue;
      auto& hits = index.entries_[key];
      if (hits.empty() || hits.back().column != col.index) {
        hits.push_back({col.index, 0});
        index.max_value_tokens_ = std::max(index.max_value_tokens_, tokenize(cell.as_text()).size());
      }
      ++hits.back().occurrences;
    }
  }
  return index;
}

}  // namespace sir
