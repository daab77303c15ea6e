#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "sir/lexicon.hpp"
#include "sir/table.hpp"

namespace sir {

// Boolean criterion tree over row cells.
//
// Leaves: ValueMatch (textual column equals a normalized value) and
// NumCompare (numeric column compared with a constant). And/Or carry two or
// more children, Not exactly one.
struct Predicate {
  enum class Kind { True, ValueMatch, NumCompare, Not, And, Or };

  Kind kind = Kind::True;
  ColumnIndex column = 0;
  std::string value;  // ValueMatch, normalized
  CompareOp op = CompareOp::Eq;
  double number = 0;  // NumCompare
  std::vector<Predicate> children;

  static Predicate always();
  static Predicate match(ColumnIndex column, std::string norm_value);
  static Predicate compare(ColumnIndex column, CompareOp op, double number);
  static Predicate negate(Predicate child);
  static Predicate all_of(std::vector<Predicate> children);
  static Predicate any_of(std::vector<Predicate> children);

  bool is_leaf() const noexcept { return kind == Kind::ValueMatch || kind == Kind::NumCompare; }

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

// Total order used to sort connective children: by smallest column index in
// the subtree, then node kind, then payload.
std::strong_ordering compare_predicates(const Predicate& a, const Predicate& b);

enum class IntentKind { Filter, Count, MostFrequent, LeastFrequent, GroupCount };

std::string_view to_string(IntentKind kind);

struct QueryIntent {
  IntentKind kind = IntentKind::Filter;
  Predicate predicate;
  std::optional<std::vector<ColumnIndex>> projection;  // Filter only
  std::optional<ColumnIndex> target_column;            // Most/LeastFrequent only
  std::vector<ColumnIndex> group_columns;              // GroupCount only, non-empty

  friend bool operator==(const QueryIntent&, const QueryIntent&) = default;
};

// Empty when the intent has exactly the kind-specific fields it needs and
// the predicate respects the column-kind and arity invariants for `table`;
// otherwise a description of the first violation.
std::optional<std::string> check_shape(const QueryIntent& intent, const TableDocument& table);

// Flattens nested same-kind connectives, drops duplicate children and
// redundant True terms, collapses single-child connectives and sorts
// children. Idempotent.
Predicate canonicalize(Predicate predicate);
QueryIntent canonicalize(QueryIntent intent);

// Stable s-expression form of an intent, e.g.
//   (count (or (= [Terrain] "hilly") (= [Difficulty] "hard")))
//   (group-count true ([Difficulty]))
//   (filter (> [Holes] 9) (project [City] [County]))
//   (most true [Terrain])
std::string to_ir(const QueryIntent& intent, const TableDocument& table);
std::string to_ir(const Predicate& predicate, const TableDocument& table);

}  // namespace sir
