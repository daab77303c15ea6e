#include "sir/session.hpp"

#include <atomic>

#include "sir/error.hpp"

namespace sir {

Session::Session(std::string id, TableHandle table, LexiconHandle lexicon)
    : id_(std::move(id)), table_(std::move(table)), lexicon_(std::move(lexicon)) {}

SessionState Session::state() const {
  std::lock_guard lock(mutex_);
  return pending_ ? SessionState::AwaitingClarification : SessionState::Idle;
}

std::optional<ClarificationRequest> Session::pending() const {
  std::lock_guard lock(mutex_);
  return pending_;
}

std::vector<HistoryEntry> Session::history() const {
  std::lock_guard lock(mutex_);
  return history_;
}

Reply Session::finish(ParseOutcome outcome, std::string input, bool input_resolves_pending) {
  Reply reply{std::move(outcome), std::nullopt, std::nullopt};
  HistoryEntry entry{std::move(input), {}, {}, {}};
  if (pending_ && !input_resolves_pending) entry.abandoned_request = pending_->request_id;
  pending_.reset();

  if (auto* parsed = std::get_if<Parsed>(&reply.outcome)) {
    entry.ir = to_ir(parsed->intent, table_->table);
    try {
      reply.result = execute(parsed->intent, table_->table);
      entry.outcome = "parsed";
    } catch (const QueryError& e) {
      reply.error = e;
      entry.outcome = "error";
    }
  } else if (auto* clarify = std::get_if<NeedsClarification>(&reply.outcome)) {
    clarify->request.request_id = next_request_id_++;
    pending_ = clarify->request;
    entry.outcome = "clarify";
  } else {
    entry.outcome = "not_understood";
  }
  history_.push_back(std::move(entry));
  return reply;
}

Reply Session::submit(const std::string& utterance) {
  std::lock_guard lock(mutex_);
  return finish(parse(utterance, table_->table, table_->index, *lexicon_), utterance, false);
}

Reply Session::clarify(std::uint64_t request_id, ColumnIndex column) {
  std::lock_guard lock(mutex_);
  if (!pending_) throw SessionError("NoPendingClarification", "there is no question waiting for an answer");
  if (pending_->request_id != request_id) {
    throw SessionError("StaleRequest", "request " + std::to_string(request_id) + " is no longer pending");
  }
  auto outcome = resume(*pending_, column, table_->table, *lexicon_);
  return finish(std::move(outcome), "clarify " + std::to_string(request_id) + " " + std::to_string(column), true);
}

std::shared_ptr<Session> open_session(TableHandle table, LexiconHandle lexicon) {
  static std::atomic<std::uint64_t> counter{0};
  return std::make_shared<Session>("s" + std::to_string(++counter), std::move(table), std::move(lexicon));
}

}  // namespace sir
