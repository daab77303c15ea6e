#pragma once

#include <span>
#include <variant>
#include <vector>

#include "sir/intent.hpp"
#include "sir/table.hpp"

namespace sir {

// Matching rows, projected. `row_ids` is the provenance of the whole set and
// `cells[i]` holds the projected cells of `row_ids[i]`.
struct RowSetResult {
  std::vector<ColumnIndex> columns;
  std::vector<RowId> row_ids;
  std::vector<std::vector<CellValue>> cells;

  friend bool operator==(const RowSetResult&, const RowSetResult&) = default;
};

struct CountResult {
  std::size_t count = 0;
  std::vector<RowId> rows;

  friend bool operator==(const CountResult&, const CountResult&) = default;
};

// Most/least frequent value of `column`; `rows` are the matching rows that
// hold it, so count == rows.size().
struct ValueResult {
  ColumnIndex column = 0;
  CellValue value;
  std::size_t count = 0;
  std::vector<RowId> rows;

  friend bool operator==(const ValueResult&, const ValueResult&) = default;
};

struct GroupEntry {
  std::vector<CellValue> key;
  std::size_t count = 0;
  std::vector<RowId> rows;

  friend bool operator==(const GroupEntry&, const GroupEntry&) = default;
};

// Groups appear in first-occurrence order. Matching rows with an Empty cell
// in any group column are left out and listed in `excluded_rows`.
struct GroupTableResult {
  std::vector<ColumnIndex> columns;
  std::vector<GroupEntry> groups;
  std::vector<RowId> excluded_rows;

  friend bool operator==(const GroupTableResult&, const GroupTableResult&) = default;
};

using QueryResult = std::variant<RowSetResult, CountResult, ValueResult, GroupTableResult>;

// All row ids that contributed to the result, ascending and duplicate-free.
std::vector<RowId> provenance(const QueryResult& result);

bool eval_predicate(std::span<const CellValue> row, const Predicate& predicate);

// Row ids satisfying `predicate`, ascending.
std::vector<RowId> select_rows(const TableDocument& table, const Predicate& predicate);

// Throws QueryError("EmptySelection") for most/least frequent over no
// non-empty values, QueryError("MalformedIntent") when check_shape fails.
QueryResult execute(const QueryIntent& intent, const TableDocument& table);

}  // namespace sir
