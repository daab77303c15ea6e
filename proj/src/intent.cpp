#include "sir/intent.hpp"

#include <algorithm>
#include <limits>

namespace sir {

Predicate Predicate::always() { return Predicate{}; }

Predicate Predicate::match(ColumnIndex column, std::string norm_value) {
  Predicate p;
  p.kind = Kind::ValueMatch;
  p.column = column;
  p.value = std::move(norm_value);
  return p;
}

Predicate Predicate::compare(ColumnIndex column, CompareOp op, double number) {
  Predicate p;
  p.kind = Kind::NumCompare;
  p.column = column;
  p.op = op;
  p.number = number;
  return p;
}

Predicate Predicate::negate(Predicate child) {
  Predicate p;
  p.kind = Kind::Not;
  p.children.push_back(std::move(child));
  return p;
}

Predicate Predicate::all_of(std::vector<Predicate> children) {
  Predicate p;
  p.kind = Kind::And;
  p.children = std::move(children);
  return p;
}

Predicate Predicate::any_of(std::vector<Predicate> children) {
  Predicate p;
  p.kind = Kind::Or;
  p.children = std::move(children);
  return p;
}

namespace {

ColumnIndex min_column(const Predicate& p) {
  if (p.is_leaf()) return p.column;
  ColumnIndex best = std::numeric_limits<ColumnIndex>::max();
  for (const auto& c : p.children) best = std::min(best, min_column(c));
  return best;
}

std::strong_ordering compare_doubles(double a, double b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

std::strong_ordering compare_predicates(const Predicate& a, const Predicate& b) {
  if (auto c = min_column(a) <=> min_column(b); c != 0) return c;
  if (auto c = a.kind <=> b.kind; c != 0) return c;
  switch (a.kind) {
    case Predicate::Kind::True:
      return std::strong_ordering::equal;
    case Predicate::Kind::ValueMatch:
      return a.value <=> b.value;
    case Predicate::Kind::NumCompare:
      if (auto c = a.op <=> b.op; c != 0) return c;
      return compare_doubles(a.number, b.number);
    default:
      break;
  }
  const auto n = std::min(a.children.size(), b.children.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare_predicates(a.children[i], b.children[i]); c != 0) return c;
  }
  return a.children.size() <=> b.children.size();
}

std::string_view to_string(IntentKind kind) {
  switch (kind) {
    case IntentKind::Filter:
      return "filter";
    case IntentKind::Count:
      return "count";
    case IntentKind::MostFrequent:
      return "most";
    case IntentKind::LeastFrequent:
      return "least";
    case IntentKind::GroupCount:
      return "group-count";
  }
  return "?";
}

namespace {

std::optional<std::string> check_predicate(const Predicate& p, const TableDocument& table) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::True:
      if (!p.children.empty()) return "True has children";
      return std::nullopt;
    case K::ValueMatch:
    case K::NumCompare: {
      if (p.column >= table.column_count()) return "predicate references a missing column";
      const auto kind = table.column(p.column).kind;
      if (p.kind == K::ValueMatch && kind != ColumnKind::Textual) {
        return "value match on numeric column " + table.column(p.column).display_name;
      }
      if (p.kind == K::NumCompare && kind != ColumnKind::Numeric) {
        return "numeric comparison on textual column " + table.column(p.column).display_name;
      }
      return std::nullopt;
    }
    case K::Not:
      if (p.children.size() != 1) return "Not must have exactly one child";
      break;
    case K::And:
    case K::Or:
      if (p.children.size() < 2) return "And/Or must have at least two children";
      break;
  }
  for (const auto& c : p.children) {
    if (auto err = check_predicate(c, table)) return err;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_shape(const QueryIntent& intent, const TableDocument& table) {
  const bool wants_projection = intent.kind == IntentKind::Filter;
  const bool wants_target = intent.kind == IntentKind::MostFrequent || intent.kind == IntentKind::LeastFrequent;
  const bool wants_groups = intent.kind == IntentKind::GroupCount;

  if (!wants_projection && intent.projection) return "projection is only valid for filter";
  if (wants_target != intent.target_column.has_value()) {
    return wants_target ? "most/least frequent needs a target column" : "target column is only valid for most/least";
  }
  if (wants_groups == intent.group_columns.empty()) {
    return wants_groups ? "group-count needs at least one group column" : "group columns are only valid for group-count";
  }
  auto valid = [&](ColumnIndex c) { return c < table.column_count(); };
  if (intent.projection) {
    if (intent.projection->empty()) return "projection is empty";
    for (auto c : *intent.projection) {
      if (!valid(c)) return "projection references a missing column";
    }
  }
  if (intent.target_column && !valid(*intent.target_column)) return "target column is missing";
  for (auto c : intent.group_columns) {
    if (!valid(c)) return "group column is missing";
  }
  return check_predicate(intent.predicate, table);
}

Predicate canonicalize(Predicate p) {
  using K = Predicate::Kind;
  if (p.kind == K::True || p.is_leaf()) {
    p.children.clear();
    return p;
  }
  if (p.kind == K::Not) {
    p.children.front() = canonicalize(std::move(p.children.front()));
    p.children.resize(1);
    return p;
  }

  std::vector<Predicate> flat;
  for (auto& c : p.children) {
    auto cc = canonicalize(std::move(c));
    if (cc.kind == p.kind) {
      for (auto& g : cc.children) flat.push_back(std::move(g));
    } else {
      flat.push_back(std::move(cc));
    }
  }

  const bool any_true = std::any_of(flat.begin(), flat.end(), [](const Predicate& c) { return c.kind == K::True; });
  if (any_true && p.kind == K::Or) return Predicate::always();
  std::erase_if(flat, [](const Predicate& c) { return c.kind == K::True; });

  std::sort(flat.begin(), flat.end(), [](const Predicate& a, const Predicate& b) { return compare_predicates(a, b) < 0; });
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());

  if (flat.empty()) return Predicate::always();
  if (flat.size() == 1) return std::move(flat.front());
  p.children = std::move(flat);
  return p;
}

QueryIntent canonicalize(QueryIntent intent) {
  intent.predicate = canonicalize(std::move(intent.predicate));
  return intent;
}

namespace {

void write_string(std::string& out, std::string_view s) {
  out += '"';
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

void write_column(std::string& out, const TableDocument& table, ColumnIndex c) {
  out += '[';
  out += c < table.column_count() ? table.column(c).display_name : "#" + std::to_string(c);
  out += ']';
}

void write_predicate(std::string& out, const Predicate& p, const TableDocument& table) {
  using K = Predicate::Kind;
  switch (p.kind) {
    case K::True:
      out += "true";
      return;
    case K::ValueMatch:
      out += "(= ";
      write_column(out, table, p.column);
      out += ' ';
      write_string(out, p.value);
      out += ')';
      return;
    case K::NumCompare:
      out += '(';
      out += to_symbol(p.op);
      out += ' ';
      write_column(out, table, p.column);
      out += ' ';
      out += format_decimal(p.number);
      out += ')';
      return;
    case K::Not:
      out += "(not";
      break;
    case K::And:
      out += "(and";
      break;
    case K::Or:
      out += "(or";
      break;
  }
  for (const auto& c : p.children) {
    out += ' ';
    write_predicate(out, c, table);
  }
  out += ')';
}

}  // namespace

std::string to_ir(const Predicate& predicate, const TableDocument& table) {
  std::string out;
  write_predicate(out, predicate, table);
  return out;
}

std::string to_ir(const QueryIntent& intent, const TableDocument& table) {
  std::string out = "(";
  out += to_string(intent.kind);
  out += ' ';
  write_predicate(out, intent.predicate, table);
  switch (intent.kind) {
    case IntentKind::Filter:
      if (intent.projection) {
        out += " (project";
        for (auto c : *intent.projection) {
          out += ' ';
          write_column(out, table, c);
        }
        out += ')';
      }
      break;
    case IntentKind::MostFrequent:
    case IntentKind::LeastFrequent:
      out += ' ';
      if (intent.target_column) write_column(out, table, *intent.target_column);
      break;
    case IntentKind::GroupCount:
      out += " (";
      for (std::size_t i = 0; i < intent.group_columns.size(); ++i) {
        if (i) out += ' ';
        write_column(out, table, intent.group_columns[i]);
      }
      out += ')';
      break;
    case IntentKind::Count:
      break;
  }
  out += ')';
  return out;
}

}  // namespace sir
