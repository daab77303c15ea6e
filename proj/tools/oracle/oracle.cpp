#include "oracle.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace oracle {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return s.substr(b, e - b);
}

std::optional<double> as_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '+') return std::nullopt;
  }
  return v;
}

}  // namespace

Sheet read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, any = false;
  std::size_t i = 0;
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) i = 3;
  auto end_record = [&] {
    record.push_back(field);
    field.clear();
    bool blank = record.size() == 1 && record[0].empty() && !any;
    if (!blank) records.push_back(record);
    record.clear();
    any = false;
  };
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
    } else {
      field += c;
    }
  }
  if (!field.empty() || !record.empty() || any) end_record();
  if (records.empty()) throw std::runtime_error("no header");

  Sheet sheet;
  for (auto& h : records[0]) sheet.header.push_back(trim(h));
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != sheet.header.size()) throw std::runtime_error("ragged row " + std::to_string(r));
    std::vector<std::string> row;
    for (auto& c : records[r]) row.push_back(trim(c));
    sheet.rows.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < sheet.header.size(); ++c) {
    bool numeric = true;
    for (auto& row : sheet.rows) {
      if (!row[c].empty() && !as_number(row[c])) numeric = false;
    }
    sheet.numeric.push_back(numeric);
  }
  return sheet;
}

Sheet read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_csv(ss.str());
}

std::string fold(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isalnum(c)) {
      out += static_cast<char>(std::tolower(c));
    } else if (c >= 0x80) {
      out += static_cast<char>(c);
    } else if (c == '.' && i > 0 && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
               std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
      out += '.';
    }
  }
  return out;
}

namespace {

class Reader {
 public:
  Reader(const std::string& text, const Sheet& sheet) : s_(text), sheet_(sheet) {}

  Query query() {
    Query q;
    std::string verb = word();
    if (verb == "filter") {
      q.verb = Query::Verb::Filter;
    } else if (verb == "count") {
      q.verb = Query::Verb::Count;
    } else if (verb == "most" || verb == "least") {
      q.verb = verb == "most" ? Query::Verb::Most : Query::Verb::Least;
      q.columns.push_back(column());
    } else if (verb == "group-count") {
      q.verb = Query::Verb::GroupCount;
      q.columns.push_back(column());
      while (peek() == '[') q.columns.push_back(column());
    } else {
      fail("unknown verb '" + verb + "'");
    }
    if (peek() != 0) {
      if (word() != "where") fail("expected 'where'");
      q.where = expr();
    }
    if (peek() != 0) fail("trailing input");
    return q;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw SyntaxError(what + " at " + std::to_string(pos_) + " in: " + s_);
  }

  char peek() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return pos_ < s_.size() ? s_[pos_] : 0;
  }

  std::string word() {
    peek();
    if (pos_ < s_.size() && s_[pos_] == '"') {
      auto close = s_.find('"', pos_ + 1);
      if (close == std::string::npos) fail("unterminated quote");
      auto w = s_.substr(pos_ + 1, close - pos_ - 1);
      pos_ = close + 1;
      return w;
    }
    std::size_t b = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           std::string("()&|!=<>[]").find(s_[pos_]) == std::string::npos) {
      ++pos_;
    }
    if (b == pos_) fail("expected a word");
    return s_.substr(b, pos_ - b);
  }

  std::size_t column() {
    if (peek() != '[') fail("expected [Column]");
    auto close = s_.find(']', pos_);
    if (close == std::string::npos) fail("unterminated column");
    auto name = s_.substr(pos_ + 1, close - pos_ - 1);
    pos_ = close + 1;
    for (std::size_t c = 0; c < sheet_.header.size(); ++c) {
      if (sheet_.header[c] == name) return c;
    }
    fail("unknown column '" + name + "'");
  }

  std::shared_ptr<Expr> expr() {
    auto left = conj();
    if (peek() != '|') return left;
    auto node = std::make_shared<Expr>();
    node->op = Expr::Op::Or;
    node->kids.push_back(left);
    while (peek() == '|') {
      ++pos_;
      node->kids.push_back(conj());
    }
    return node;
  }

  std::shared_ptr<Expr> conj() {
    auto left = unary();
    if (peek() != '&') return left;
    auto node = std::make_shared<Expr>();
    node->op = Expr::Op::And;
    node->kids.push_back(left);
    while (peek() == '&') {
      ++pos_;
      node->kids.push_back(unary());
    }
    return node;
  }

  std::shared_ptr<Expr> unary() {
    char c = peek();
    if (c == '!') {
      ++pos_;
      auto node = std::make_shared<Expr>();
      node->op = Expr::Op::Not;
      node->kids.push_back(unary());
      return node;
    }
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    auto node = std::make_shared<Expr>();
    node->column = column();
    peek();
    std::string op;
    while (pos_ < s_.size() && std::string("=<>").find(s_[pos_]) != std::string::npos) op += s_[pos_++];
    if (op == "=") {
      node->op = Expr::Op::Eq;
      node->text = fold(word());
      return node;
    }
    if (op == "==") node->op = Expr::Op::NumEq;
    else if (op == ">") node->op = Expr::Op::Gt;
    else if (op == "<") node->op = Expr::Op::Lt;
    else if (op == ">=") node->op = Expr::Op::Ge;
    else if (op == "<=") node->op = Expr::Op::Le;
    else fail("bad operator '" + op + "'");
    auto n = as_number(word());
    if (!n) fail("expected a number");
    node->number = *n;
    return node;
  }

  const std::string& s_;
  const Sheet& sheet_;
  std::size_t pos_ = 0;
};

}  // namespace

Query parse_query(const std::string& text, const Sheet& sheet) { return Reader(text, sheet).query(); }

bool holds(const Expr& e, const std::vector<std::string>& row, const Sheet& sheet) {
  switch (e.op) {
    case Expr::Op::True:
      return true;
    case Expr::Op::Not:
      return !holds(*e.kids[0], row, sheet);
    case Expr::Op::And:
      for (auto& k : e.kids) {
        if (!holds(*k, row, sheet)) return false;
      }
      return true;
    case Expr::Op::Or:
      for (auto& k : e.kids) {
        if (holds(*k, row, sheet)) return true;
      }
      return false;
    case Expr::Op::Eq:
      return !row[e.column].empty() && fold(row[e.column]) == e.text;
    default:
      break;
  }
  auto v = as_number(row[e.column]);
  if (!v) return false;
  switch (e.op) {
    case Expr::Op::NumEq:
      return *v == e.number;
    case Expr::Op::Gt:
      return *v > e.number;
    case Expr::Op::Lt:
      return *v < e.number;
    case Expr::Op::Ge:
      return *v >= e.number;
    case Expr::Op::Le:
      return *v <= e.number;
    default:
      return false;
  }
}

std::vector<std::size_t> matching(const Query& q, const Sheet& sheet) {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < sheet.rows.size(); ++r) {
    if (!q.where || holds(*q.where, sheet.rows[r], sheet)) out.push_back(r);
  }
  return out;
}

namespace {

nlohmann::ordered_json cell_json(const Sheet& sheet, std::size_t col, const std::string& raw) {
  if (sheet.numeric[col]) {
    double v = *as_number(raw);
    if (v == static_cast<double>(static_cast<long long>(v))) return static_cast<long long>(v);
    return v;
  }
  return raw;
}

std::string group_key(const Sheet& sheet, std::size_t col, const std::string& raw) {
  if (sheet.numeric[col]) {
    std::ostringstream ss;
    ss << *as_number(raw);
    return ss.str();
  }
  return fold(raw);
}

}  // namespace

nlohmann::ordered_json answer(const Query& q, const Sheet& sheet) {
  using J = nlohmann::ordered_json;
  const auto rows = matching(q, sheet);
  J out;
  switch (q.verb) {
    case Query::Verb::Filter:
      out["rows"] = rows;
      return out;
    case Query::Verb::Count:
      out["count"] = rows.size();
      out["rows"] = rows;
      return out;
    case Query::Verb::Most:
    case Query::Verb::Least: {
      const auto col = q.columns[0];
      std::vector<std::string> order;
      std::map<std::string, std::vector<std::size_t>> seen;
      std::map<std::string, std::string> raw_of;
      for (auto r : rows) {
        const auto& raw = sheet.rows[r][col];
        if (raw.empty()) continue;
        auto k = group_key(sheet, col, raw);
        if (!seen.count(k)) {
          order.push_back(k);
          raw_of[k] = raw;
        }
        seen[k].push_back(r);
      }
      if (order.empty()) return J{{"outcome", "error"}};
      std::string best = order[0];
      for (auto& k : order) {
        bool better = q.verb == Query::Verb::Most ? seen[k].size() > seen[best].size()
                                                  : seen[k].size() < seen[best].size();
        if (better) best = k;
      }
      out["value"] = cell_json(sheet, col, raw_of[best]);
      out["count"] = seen[best].size();
      out["rows"] = seen[best];
      return out;
    }
    case Query::Verb::GroupCount: {
      std::vector<std::string> order;
      std::map<std::string, std::vector<std::string>> raws;
      std::map<std::string, std::size_t> counts;
      for (auto r : rows) {
        std::string key;
        std::vector<std::string> raw;
        bool blank = false;
        for (auto c : q.columns) {
          if (sheet.rows[r][c].empty()) blank = true;
          key += group_key(sheet, c, sheet.rows[r][c]) + '\x1f';
          raw.push_back(sheet.rows[r][c]);
        }
        if (blank) continue;
        if (!counts.count(key)) {
          order.push_back(key);
          raws[key] = raw;
        }
        ++counts[key];
      }
      J groups = J::array();
      for (auto& k : order) {
        J entry = J::array();
        for (std::size_t i = 0; i < q.columns.size(); ++i) entry.push_back(cell_json(sheet, q.columns[i], raws[k][i]));
        entry.push_back(counts[k]);
        groups.push_back(entry);
      }
      out["groups"] = groups;
      return out;
    }
  }
  return out;
}

}  // namespace oracle
