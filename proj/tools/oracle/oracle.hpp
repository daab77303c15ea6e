#pragma once

// Brute-force reference evaluator. Deliberately shares no code with the
// sir library: its own CSV reader, its own key folding, its own query
// language. Used to produce gold answers and to cross-check the engine.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace oracle {

struct Sheet {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // trimmed raw cells
  std::vector<bool> numeric;                   // per column
};

Sheet read_csv(const std::string& text);
Sheet read_csv_file(const std::string& path);

// Lowercase ASCII letters and digits plus every non-ASCII byte; a '.' survives
// between digits.
std::string fold(const std::string& s);

struct Expr {
  enum class Op { Eq, NumEq, Gt, Lt, Ge, Le, Not, And, Or, True };
  Op op = Op::True;
  std::size_t column = 0;
  std::string text;  // folded, for Eq
  double number = 0;
  std::vector<std::shared_ptr<Expr>> kids;
};

struct Query {
  enum class Verb { Filter, Count, Most, Least, GroupCount };
  Verb verb = Verb::Filter;
  std::vector<std::size_t> columns;  // target for most/least, keys for group-count
  std::shared_ptr<Expr> where;       // null means every row
};

class SyntaxError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// query := verb [where expr]
// verb  := filter | count | most [Col] | least [Col] | group-count [Col] {[Col]}
// expr  := and {'|' and};  and := unary {'&' unary};  unary := '!' unary | '(' expr ')' | cmp
// cmp   := [Col] ('=' word | '==' num | '>' num | '<' num | '>=' num | '<=' num)
Query parse_query(const std::string& text, const Sheet& sheet);

bool holds(const Expr& e, const std::vector<std::string>& row, const Sheet& sheet);
std::vector<std::size_t> matching(const Query& q, const Sheet& sheet);

// {"rows":[...]} | {"count":n,"rows":[...]} | {"value":v,"count":n,"rows":[...]} |
// {"groups":[[key..., n], ...]}; most/least over nothing gives {"outcome":"error"}.
nlohmann::ordered_json answer(const Query& q, const Sheet& sheet);

}  // namespace oracle
