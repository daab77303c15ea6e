#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sir/engine.hpp"
#include "sir/error.hpp"
#include "sir/lexicon.hpp"
#include "sir/parser.hpp"
#include "sir/table.hpp"

namespace sir {

// A loaded table with its value index; shared read-only between sessions.
struct IndexedTable {
  explicit IndexedTable(TableDocument doc) : table(std::move(doc)), index(build_value_index(table)) {}

  TableDocument table;
  ValueIndex index;
};

using TableHandle = std::shared_ptr<const IndexedTable>;
using LexiconHandle = std::shared_ptr<const Lexicon>;

// Outcome of one dialog step: the parse outcome, plus the executed result
// when it parsed, or the engine error when execution was refused.
struct Reply {
  ParseOutcome outcome;
  std::optional<QueryResult> result;
  std::optional<QueryError> error;
};

enum class SessionState { Idle, AwaitingClarification };

struct HistoryEntry {
  std::string input;  // the utterance, or "clarify <request> <column>"
  std::string outcome;  // parsed | clarify | not_understood | error
  std::string ir;  // canonical IR when parsed
  std::optional<std::uint64_t> abandoned_request;  // pending request this input discarded
};

// Dialog over one table. All operations on a session are serialized; the
// table and lexicon are shared immutable data.
class Session {
 public:
  Session(std::string id, TableHandle table, LexiconHandle lexicon);

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const noexcept { return id_; }
  const TableHandle& table() const noexcept { return table_; }
  const Lexicon& lexicon() const noexcept { return *lexicon_; }

  SessionState state() const;
  std::optional<ClarificationRequest> pending() const;
  std::vector<HistoryEntry> history() const;

  // Parses and, when parsed, executes. A pending clarification is abandoned.
  Reply submit(const std::string& utterance);

  // Resolves the pending clarification. Throws SessionError with code
  // NoPendingClarification, StaleRequest or InvalidChoice.
  Reply clarify(std::uint64_t request_id, ColumnIndex column);

 private:
  Reply finish(ParseOutcome outcome, std::string input, bool input_resolves_pending);

  mutable std::mutex mutex_;
  std::string id_;
  TableHandle table_;
  LexiconHandle lexicon_;
  std::optional<ClarificationRequest> pending_;
  std::uint64_t next_request_id_ = 1;
  std::vector<HistoryEntry> history_;
};

// Creates an Idle session with a process-unique id.
std::shared_ptr<Session> open_session(TableHandle table, LexiconHandle lexicon);

}  // namespace sir
