#include <gtest/gtest.h>

#include <thread>

#include "sir/error.hpp"
#include "sir/session.hpp"
#include "support.hpp"

using namespace sir;

namespace {

std::string session_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const SessionError& e) {
    return e.code();
  }
  return "none";
}

Session mini_session() { return Session("t", fixture::mini6(), fixture::default_lexicon()); }

}  // namespace

TEST(Session, ParsedReplyCarriesResult) {
  auto s = mini_session();
  const auto r = s.submit("How many easy courses?");
  ASSERT_TRUE(std::holds_alternative<Parsed>(r.outcome));
  ASSERT_TRUE(r.result);
  EXPECT_EQ(std::get<CountResult>(*r.result).count, 3u);
  EXPECT_EQ(s.state(), SessionState::Idle);
  ASSERT_EQ(s.history().size(), 1u);
  EXPECT_EQ(s.history()[0].outcome, "parsed");
  EXPECT_EQ(s.history()[0].ir, "(count (= [Difficulty] \"easy\"))");
}

TEST(Session, ClarificationStateMachine) {
  auto s = mini_session();
  EXPECT_EQ(session_error([&] { s.clarify(1, 0); }), "NoPendingClarification");

  const auto asked = s.submit("how many marion courses");
  ASSERT_TRUE(std::holds_alternative<NeedsClarification>(asked.outcome));
  EXPECT_FALSE(asked.result);
  EXPECT_EQ(s.state(), SessionState::AwaitingClarification);
  const auto id = std::get<NeedsClarification>(asked.outcome).request.request_id;
  EXPECT_EQ(s.pending()->request_id, id);

  EXPECT_EQ(session_error([&] { s.clarify(id + 1, 1); }), "StaleRequest");
  EXPECT_EQ(session_error([&] { s.clarify(id, 6); }), "InvalidChoice");
  EXPECT_EQ(s.state(), SessionState::AwaitingClarification);

  const auto done = s.clarify(id, 1);
  ASSERT_TRUE(done.result);
  EXPECT_EQ(std::get<CountResult>(*done.result).rows, (std::vector<RowId>{2, 3, 5}));
  EXPECT_EQ(s.state(), SessionState::Idle);
  EXPECT_EQ(session_error([&] { s.clarify(id, 1); }), "NoPendingClarification");

  const auto h = s.history();
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0].outcome, "clarify");
  EXPECT_EQ(h[1].input, "clarify " + std::to_string(id) + " 1");
  EXPECT_EQ(h[1].ir, "(count (= [County] \"marion\"))");
  EXPECT_FALSE(h[1].abandoned_request);
}

TEST(Session, NewUtteranceAbandonsPendingQuestion) {
  auto s = mini_session();
  const auto first = std::get<NeedsClarification>(s.submit("marion courses").outcome).request.request_id;
  const auto second = std::get<NeedsClarification>(s.submit("marion hard courses").outcome).request.request_id;
  EXPECT_GT(second, first);
  EXPECT_EQ(session_error([&] { s.clarify(first, 0); }), "StaleRequest");
  s.submit("How many easy courses?");
  EXPECT_EQ(s.state(), SessionState::Idle);
  const auto h = s.history();
  ASSERT_EQ(h.size(), 3u);
  EXPECT_EQ(h[1].abandoned_request, first);
  EXPECT_EQ(h[2].abandoned_request, second);
}

TEST(Session, ChainedClarifications) {
  const auto t = std::make_shared<const IndexedTable>(load_table("Name,Kind,Tone\nOr,red,blue\nAnd,blue,red\nMost,red,red\n"));
  Session s("t", t, fixture::default_lexicon());
  const auto r1 = s.submit("red blue");
  const auto& q1 = std::get<NeedsClarification>(r1.outcome).request;
  EXPECT_EQ(q1.ambiguous_value, "red");
  const auto r2 = s.clarify(q1.request_id, 1);
  const auto& q2 = std::get<NeedsClarification>(r2.outcome).request;
  EXPECT_EQ(q2.ambiguous_value, "blue");
  EXPECT_NE(q2.request_id, q1.request_id);
  const auto r3 = s.clarify(q2.request_id, 2);
  ASSERT_TRUE(r3.result);
  EXPECT_EQ(std::get<RowSetResult>(*r3.result).row_ids, (std::vector<RowId>{0}));
  EXPECT_EQ(s.history().back().ir, "(filter (and (= [Kind] \"red\") (= [Tone] \"blue\")))");
}

TEST(Session, EngineErrorIsReportedNotThrown) {
  auto s = mini_session();
  const auto r = s.submit("most common terrain of hard courses in boone");
  ASSERT_TRUE(std::holds_alternative<Parsed>(r.outcome)) << fixture::describe(r.outcome, s.table()->table);
  ASSERT_TRUE(r.error);
  EXPECT_EQ(r.error->code(), "EmptySelection");
  EXPECT_EQ(s.history().back().outcome, "error");
}

TEST(Session, NotUnderstoodLeavesSessionIdle) {
  auto s = mini_session();
  const auto r = s.submit("blah");
  EXPECT_TRUE(std::holds_alternative<NotUnderstood>(r.outcome));
  EXPECT_EQ(s.state(), SessionState::Idle);
  EXPECT_EQ(s.history().back().outcome, "not_understood");
}

TEST(Session, ConcurrentSubmitsAreSerialized) {
  auto s = mini_session();
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      for (int k = 0; k < 50; ++k) {
        const auto r = s.submit(k % 2 ? "How many easy courses?" : "marion courses");
        if (r.result) {
          ASSERT_EQ(std::get<CountResult>(*r.result).count, 3u);
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(s.history().size(), 400u);
}

TEST(Session, OpenSessionIdsAreUnique) {
  const auto a = open_session(fixture::mini6(), fixture::default_lexicon());
  const auto b = open_session(fixture::mini6(), fixture::default_lexicon());
  EXPECT_NE(a->id(), b->id());
  EXPECT_EQ(a->state(), SessionState::Idle);
}
