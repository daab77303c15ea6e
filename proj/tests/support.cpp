#include "support.hpp"

#include <fstream>
#include <sstream>

namespace sir::fixture {

std::string data_path(const std::string& name) { return std::string(SIR_DATA_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TableHandle mini6() {
  static const auto t = std::make_shared<const IndexedTable>(load_table_file(data_path("mini6.csv")));
  return t;
}

TableHandle golf127() {
  static const auto t = std::make_shared<const IndexedTable>(load_table_file(data_path("golf127.csv")));
  return t;
}

LexiconHandle default_lexicon() {
  static const auto l = std::make_shared<const Lexicon>(Lexicon::defaults());
  return l;
}

LexiconHandle strict_lexicon() {
  static const auto l = std::make_shared<const Lexicon>(Lexicon::strict_paper());
  return l;
}

std::string describe(const ParseOutcome& outcome, const TableDocument& table) {
  if (const auto* p = std::get_if<Parsed>(&outcome)) return to_ir(p->intent, table);
  if (const auto* c = std::get_if<NeedsClarification>(&outcome)) {
    std::string out = "clarify " + c->request.ambiguous_value + ":";
    for (std::size_t i = 0; i < c->request.candidates.size(); ++i) {
      out += (i ? "," : " ") + c->request.candidates[i].display_name;
    }
    return out;
  }
  return "not_understood";
}

std::string describe(std::string_view utterance, const IndexedTable& table, const Lexicon& lexicon) {
  return describe(parse(utterance, table.table, table.index, lexicon), table.table);
}

namespace {

const char* const kWords[] = {"red", "green", "Blue", "red oak", "Green", "amber", "slate", "Teal"};

std::size_t below(std::mt19937& rng, std::size_t n) { return rng() % n; }

}  // namespace

std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    if (row.size() == 1 && row[0].empty()) {
      out += "\"\"\n";
      continue;
    }
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

RandomCase random_case(std::mt19937& rng, std::size_t max_rows) {
  RandomCase c;
  const auto textual = 1 + below(rng, 4);
  const auto numeric = below(rng, 3);
  for (std::size_t i = 0; i < textual; ++i) c.header.push_back("T" + std::to_string(i));
  for (std::size_t i = 0; i < numeric; ++i) c.header.push_back("N" + std::to_string(i));
  const auto n = 1 + below(rng, max_rows);
  // Narrow per-column vocabularies make both hits and misses common.
  std::vector<std::size_t> vocab(textual);
  for (auto& v : vocab) v = 2 + below(rng, 5);
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::string> row;
    for (std::size_t i = 0; i < textual; ++i) {
      row.push_back(below(rng, 10) == 0 ? "" : kWords[below(rng, vocab[i])]);
    }
    for (std::size_t i = 0; i < numeric; ++i) {
      row.push_back(below(rng, 10) == 0 ? "" : std::to_string(static_cast<int>(below(rng, 21)) - 5));
    }
    c.rows.push_back(std::move(row));
  }
  c.table = std::make_shared<const IndexedTable>(TableDocument::from_fields(c.header, c.rows, "random"));
  c.sheet = oracle::read_csv(to_csv(c.header, c.rows));
  return c;
}

Predicate random_predicate(std::mt19937& rng, const RandomCase& c, int depth) {
  const auto& table = c.table->table;
  const auto leaf = [&] {
    const auto col = below(rng, table.column_count());
    if (table.column(col).kind == ColumnKind::Numeric) {
      const auto op = static_cast<CompareOp>(below(rng, 5));
      return Predicate::compare(col, op, static_cast<double>(static_cast<int>(below(rng, 21)) - 5));
    }
    return Predicate::match(col, normalize_key(kWords[below(rng, std::size(kWords))]));
  };
  if (depth <= 0) return leaf();
  switch (below(rng, 6)) {
    case 0:
    case 1:
      return leaf();
    case 2:
      return Predicate::negate(random_predicate(rng, c, depth - 1));
    case 3:
    case 4: {
      std::vector<Predicate> kids;
      const auto k = 2 + below(rng, 2);
      for (std::size_t i = 0; i < k; ++i) kids.push_back(random_predicate(rng, c, depth - 1));
      return below(rng, 2) ? Predicate::all_of(std::move(kids)) : Predicate::any_of(std::move(kids));
    }
    default:
      return Predicate::always();
  }
}

std::shared_ptr<oracle::Expr> to_oracle(const Predicate& p) {
  auto e = std::make_shared<oracle::Expr>();
  using K = Predicate::Kind;
  using O = oracle::Expr::Op;
  switch (p.kind) {
    case K::True:
      e->op = O::True;
      break;
    case K::ValueMatch:
      e->op = O::Eq;
      e->column = p.column;
      e->text = oracle::fold(p.value);
      break;
    case K::NumCompare:
      e->column = p.column;
      e->number = p.number;
      switch (p.op) {
        case CompareOp::Eq: e->op = O::NumEq; break;
        case CompareOp::Gt: e->op = O::Gt; break;
        case CompareOp::Lt: e->op = O::Lt; break;
        case CompareOp::Ge: e->op = O::Ge; break;
        case CompareOp::Le: e->op = O::Le; break;
      }
      break;
    case K::Not:
    case K::And:
    case K::Or:
      e->op = p.kind == K::Not ? O::Not : p.kind == K::And ? O::And : O::Or;
      for (const auto& k : p.children) e->kids.push_back(to_oracle(k));
      break;
  }
  return e;
}

}  // namespace sir::fixture
