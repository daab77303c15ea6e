#include "sir/engine.hpp"

#include <algorithm>
#include <map>

#include "sir/error.hpp"
#include "sir/lexicon.hpp"

namespace sir {

namespace {

bool compare_number(double cell, CompareOp op, double rhs) {
  switch (op) {
    case CompareOp::Eq:
      return cell == rhs;
    case CompareOp::Gt:
      return cell > rhs;
    case CompareOp::Lt:
      return cell < rhs;
    case CompareOp::Ge:
      return cell >= rhs;
    case CompareOp::Le:
      return cell <= rhs;
  }
  return false;
}

// Cells compared the way criteria match them: 18 and 18.0 are one group, and
// so are "Flat" and "flat ".
struct CellKeyLess {
  bool operator()(const std::vector<CellValue>& a, const std::vector<CellValue>& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const CellValue& x, const CellValue& y) {
      if (x.kind() != y.kind()) return x.kind() < y.kind();
      if (x.is_number()) return x.as_number() < y.as_number();
      if (x.is_text()) return normalize_key(x.as_text()) < normalize_key(y.as_text());
      return false;
    });
  }
};

}  // namespace

bool eval_predicate(std::span<const CellValue> row, const Predicate& predicate) {
  using K = Predicate::Kind;
  switch (predicate.kind) {
    case K::True:
      return true;
    case K::ValueMatch: {
      const auto& cell = row[predicate.column];
      if (cell.is_empty()) return false;
      return normalize_key(cell.to_string()) == predicate.value;
    }
    case K::NumCompare: {
      const auto& cell = row[predicate.column];
      return cell.is_number() && compare_number(cell.as_number(), predicate.op, predicate.number);
    }
    case K::Not:
      return !eval_predicate(row, predicate.children.front());
    case K::And:
      return std::all_of(predicate.children.begin(), predicate.children.end(),
                         [&](const Predicate& c) { return eval_predicate(row, c); });
    case K::Or:
      return std::any_of(predicate.children.begin(), predicate.children.end(),
                         [&](const Predicate& c) { return eval_predicate(row, c); });
  }
  return false;
}

std::vector<RowId> select_rows(const TableDocument& table, const Predicate& predicate) {
  std::vector<RowId> out;
  for (RowId r = 0; r < table.row_count(); ++r) {
    if (eval_predicate(table.row(r), predicate)) out.push_back(r);
  }
  return out;
}

std::vector<RowId> provenance(const QueryResult& result) {
  std::vector<RowId> out = std::visit(
      [](const auto& r) -> std::vector<RowId> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, RowSetResult>) {
          return r.row_ids;
        } else if constexpr (std::is_same_v<T, GroupTableResult>) {
          std::vector<RowId> all;
          for (const auto& g : r.groups) all.insert(all.end(), g.rows.begin(), g.rows.end());
          return all;
        } else {
          return r.rows;
        }
      },
      result);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

QueryResult run_filter(const QueryIntent& intent, const TableDocument& table, std::vector<RowId> rows) {
  RowSetResult out;
  if (intent.projection) {
    out.columns = *intent.projection;
  } else {
    for (ColumnIndex c = 0; c < table.column_count(); ++c) out.columns.push_back(c);
  }
  for (RowId r : rows) {
    std::vector<CellValue> cells;
    cells.reserve(out.columns.size());
    for (auto c : out.columns) cells.push_back(table.cell(r, c));
    out.cells.push_back(std::move(cells));
  }
  out.row_ids = std::move(rows);
  return out;
}

QueryResult run_frequency(const QueryIntent& intent, const TableDocument& table, const std::vector<RowId>& rows) {
  const auto column = *intent.target_column;
  // Buckets in first-occurrence order.
  std::vector<GroupEntry> buckets;
  std::map<std::vector<CellValue>, std::size_t, CellKeyLess> slot;
  for (RowId r : rows) {
    const auto& cell = table.cell(r, column);
    if (cell.is_empty()) continue;
    std::vector<CellValue> key{cell};
    auto [it, inserted] = slot.emplace(key, buckets.size());
    if (inserted) buckets.push_back({std::move(key), 0, {}});
    auto& b = buckets[it->second];
    ++b.count;
    b.rows.push_back(r);
  }
  if (buckets.empty()) {
    throw QueryError("EmptySelection", "no rows with a value in column " + table.column(column).display_name +
                                           " match the criteria");
  }
  const bool most = intent.kind == IntentKind::MostFrequent;
  const GroupEntry* best = &buckets.front();
  for (const auto& b : buckets) {
    // Strict comparison keeps the earliest bucket on ties.
    if (most ? b.count > best->count : b.count < best->count) best = &b;
  }
  return ValueResult{column, best->key.front(), best->count, best->rows};
}

QueryResult run_group_count(const QueryIntent& intent, const TableDocument& table, const std::vector<RowId>& rows) {
  GroupTableResult out;
  out.columns = intent.group_columns;
  std::map<std::vector<CellValue>, std::size_t, CellKeyLess> slot;
  for (RowId r : rows) {
    std::vector<CellValue> key;
    bool has_empty = false;
    for (auto c : out.columns) {
      key.push_back(table.cell(r, c));
      has_empty = has_empty || key.back().is_empty();
    }
    if (has_empty) {
      out.excluded_rows.push_back(r);
      continue;
    }
    auto [it, inserted] = slot.emplace(key, out.groups.size());
    if (inserted) out.groups.push_back({std::move(key), 0, {}});
    auto& g = out.groups[it->second];
    ++g.count;
    g.rows.push_back(r);
  }
  return out;
}

}  // namespace

QueryResult execute(const QueryIntent& intent, const TableDocument& table) {
  if (auto err = check_shape(intent, table)) throw QueryError("MalformedIntent", *err);
  auto rows = select_rows(table, intent.predicate);
  switch (intent.kind) {
    case IntentKind::Filter:
      return run_filter(intent, table, std::move(rows));
    case IntentKind::Count: {
      const auto n = rows.size();
      return CountResult{n, std::move(rows)};
    }
    case IntentKind::MostFrequent:
    case IntentKind::LeastFrequent:
      return run_frequency(intent, table, rows);
    case IntentKind::GroupCount:
      return run_group_count(intent, table, rows);
  }
  throw QueryError("MalformedIntent", "unknown intent kind");
}

}  // namespace sir
