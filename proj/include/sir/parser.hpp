#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sir/intent.hpp"
#include "sir/lexicon.hpp"
#include "sir/table.hpp"

namespace sir {

// A run of utterance tokens classified by the first parsing stage.
struct LexItem {
  enum class Kind { Cue, Column, Value, Number, Stop, Unmatched };

  Kind kind = Kind::Unmatched;
  std::size_t first_token = 0;
  std::size_t end_token = 0;  // exclusive

  CueRole role = CueRole::List;     // Cue
  std::optional<CompareOp> op;      // Cue (comparator)
  ColumnIndex column = 0;           // Column
  std::string value;                // Value: normalized key
  std::vector<ColumnHit> hits;      // Value: columns holding it
  bool quoted = false;              // Value from a quoted literal
  bool value_alternative = false;   // Stop that is also an indexed value
  double number = 0;                // Number

  friend bool operator==(const LexItem&, const LexItem&) = default;
};

// Everything needed to finish a parse once ambiguous values are resolved.
struct ParseState {
  std::string utterance;
  std::vector<Token> tokens;
  std::vector<LexItem> items;
  std::map<std::size_t, ColumnIndex> resolved;  // item index -> chosen column

  friend bool operator==(const ParseState&, const ParseState&) = default;
};

struct ClarificationCandidate {
  ColumnIndex column = 0;
  std::string display_name;
  std::size_t occurrences = 0;

  friend bool operator==(const ClarificationCandidate&, const ClarificationCandidate&) = default;
};

struct ClarificationRequest {
  std::uint64_t request_id = 0;  // assigned by the session; 0 from bare parse()
  std::string ambiguous_value;   // normalized
  std::string surface;           // the words as typed
  std::vector<ClarificationCandidate> candidates;
  std::size_t item = 0;          // index into pending.items
  ParseState pending;
};

struct TokenDiagnostic {
  std::string token;
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const TokenDiagnostic&, const TokenDiagnostic&) = default;
};

struct Parsed {
  QueryIntent intent;  // canonical
  std::vector<TokenDiagnostic> ignored;  // content words that matched nothing
};

struct NeedsClarification {
  ClarificationRequest request;
};

struct NotUnderstood {
  std::string reason;
  std::vector<TokenDiagnostic> unmatched;
};

using ParseOutcome = std::variant<Parsed, NeedsClarification, NotUnderstood>;

// Stage one: tokenize and classify every token run as a cue, column name,
// indexed value, number, stopword or unmatched word. Longest match wins;
// cues are tried first, and a column name beats a value of equal length.
ParseState analyze(std::string_view utterance, const TableDocument& table, const ValueIndex& index,
                   const Lexicon& lexicon);

// Stage two: bind criteria, build the predicate and resolve the intent kind.
ParseOutcome assemble(const ParseState& state, const TableDocument& table, const Lexicon& lexicon);

// analyze + assemble. Pure: the same inputs always give the same outcome.
ParseOutcome parse(std::string_view utterance, const TableDocument& table, const ValueIndex& index,
                   const Lexicon& lexicon);

// Binds the pending ambiguous value to `chosen` and finishes the parse,
// which may surface the next ambiguity. Throws SessionError("InvalidChoice")
// when `chosen` is not a candidate.
ParseOutcome resume(const ClarificationRequest& request, ColumnIndex chosen, const TableDocument& table,
                    const Lexicon& lexicon);

// Reads one numeric criterion ("more than 9 holes", "holes 9", "9 or more
// holes") from a token span. A number never infers its column: without an
// adjacent numeric column name the result is empty.
std::optional<Predicate> parse_numeric_criterion(std::span<const Token> tokens, const TableDocument& table,
                                                 const Lexicon& lexicon);

}  // namespace sir
