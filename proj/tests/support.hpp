#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "sir/intent.hpp"
#include "sir/lexicon.hpp"
#include "sir/parser.hpp"
#include "sir/session.hpp"
#include "sir/table.hpp"

namespace sir::fixture {

std::string data_path(const std::string& name);
std::string read_file(const std::string& path);

TableHandle mini6();
TableHandle golf127();
LexiconHandle default_lexicon();
LexiconHandle strict_lexicon();

// Compact description of a parse outcome:
//   the canonical IR when parsed,
//   "clarify <value>: <Col>,<Col>" when a value is ambiguous,
//   "not_understood" otherwise.
std::string describe(const ParseOutcome& outcome, const TableDocument& table);
std::string describe(std::string_view utterance, const IndexedTable& table, const Lexicon& lexicon);

// Random tables and predicate trees for property tests. Cells are drawn
// from a small vocabulary so values collide across rows and columns.
struct RandomCase {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::shared_ptr<const IndexedTable> table;
  oracle::Sheet sheet;  // the same data read back through the oracle's CSV reader
};

RandomCase random_case(std::mt19937& rng, std::size_t max_rows = 50);
Predicate random_predicate(std::mt19937& rng, const RandomCase& c, int depth);
// Structural translation; no evaluation happens here.
std::shared_ptr<oracle::Expr> to_oracle(const Predicate& p);
std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace sir::fixture
