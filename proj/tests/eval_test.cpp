#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "oracle.hpp"
#include "sir/dataset.hpp"
#include "sir/error.hpp"
#include "sir/eval.hpp"
#include "sir/render.hpp"
#include "support.hpp"

using namespace sir;
using Json = nlohmann::ordered_json;

namespace {

std::string corpus_error(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_corpus(in);
  } catch (const CorpusError& e) {
    return e.what();
  }
  return "none";
}

Reply reply_to(std::string_view utterance) {
  Session s("e", fixture::mini6(), fixture::default_lexicon());
  return s.submit(std::string(utterance));
}

Json oracle_answer(const std::string& query, const oracle::Sheet& sheet) {
  return oracle::answer(oracle::parse_query(query, sheet), sheet);
}

}  // namespace

TEST(Oracle, Mini6HandValues) {
  const auto sheet = oracle::read_csv_file(fixture::data_path("mini6.csv"));
  EXPECT_EQ(oracle_answer("count where [Difficulty] = easy", sheet).dump(), R"({"count":3,"rows":[1,2,4]})");
  EXPECT_EQ(oracle_answer("count where [Terrain] = hilly | [Difficulty] = hard", sheet)["count"], 2);
  EXPECT_EQ(oracle_answer("count where ![Terrain] = varied", sheet)["count"], 4);
  EXPECT_EQ(oracle_answer("group-count [Difficulty]", sheet).dump(), R"({"groups":[["Moderate",1],["Easy",3],["Hard",2]]})");
  EXPECT_EQ(oracle_answer("most [Terrain]", sheet).dump(), R"({"value":"Varied","count":2,"rows":[0,1]})");
  EXPECT_EQ(oracle_answer("filter where [Holes] < 18", sheet).dump(), R"({"rows":[2]})");
  EXPECT_EQ(oracle_answer("most [Terrain] where [City] = nowhere", sheet).dump(), R"({"outcome":"error"})");
  EXPECT_THROW(oracle::parse_query("count where [Nope] = x", sheet), oracle::SyntaxError);
  EXPECT_THROW(oracle::parse_query("count where [Holes] > many", sheet), oracle::SyntaxError);
}

TEST(Corpus, ParsesTaskBlocks) {
  std::istringstream in(
      "sir-tasks 1\n"
      "# comment\n"
      "dataset: data.csv\n"
      "task A1\n"
      "category: Complex\n"
      "description: d\n"
      "phrase terse: t\n"
      "phrase full: f\n"
      "gold-query: count\n"
      "gold: {\"count\":1}\n"
      "choose: County\n"
      "end\n");
  const auto c = parse_corpus(in, "/base");
  EXPECT_EQ(c.dataset, "/base/data.csv");
  ASSERT_EQ(c.tasks.size(), 1u);
  const auto& t = c.tasks[0];
  EXPECT_EQ(t.id, "A1");
  EXPECT_EQ(t.category, TaskCategory::Complex);
  ASSERT_EQ(t.phrasings.size(), 2u);
  EXPECT_EQ(t.phrasings[1].style, "full");
  EXPECT_EQ(t.gold["count"], 1);
  EXPECT_EQ(t.choices, (std::vector<std::string>{"County"}));
  EXPECT_EQ(t.line, 4u);
}

TEST(Corpus, EmptyCorpusIsValid) {
  std::istringstream in("sir-tasks 1\n");
  const auto c = parse_corpus(in);
  EXPECT_TRUE(c.tasks.empty());
  EXPECT_TRUE(c.dataset.empty());
  const auto report = run_eval(c, fixture::mini6(), fixture::default_lexicon());
  EXPECT_EQ(report.total.tasks, 0u);
  EXPECT_NE(report_text(report).find("total"), std::string::npos);
}

TEST(Corpus, FormatErrorsCarryLineNumbers) {
  const std::string head = "sir-tasks 1\ntask X\ncategory: Easy\nphrase full: a\n";
  EXPECT_NE(corpus_error("").find("line"), std::string::npos);
  EXPECT_NE(corpus_error("sir-tasks 9\n").find("line 1"), std::string::npos);
  EXPECT_NE(corpus_error(head + "gold: {\"count\":1}\n").find("line"), std::string::npos);  // missing end
  EXPECT_NE(corpus_error(head + "gold: {bad\nend\n").find("line 5"), std::string::npos);
  EXPECT_NE(corpus_error(head + "end\n").find("line"), std::string::npos);  // no gold
  EXPECT_NE(corpus_error("sir-tasks 1\ntask X\ncategory: Hard\n").find("line 3"), std::string::npos);
  EXPECT_NE(corpus_error("sir-tasks 1\ntask X\nphrase loud: a\n").find("line 3"), std::string::npos);
  EXPECT_NE(corpus_error("sir-tasks 1\ntask X\ncategory: Easy\ngold: {\"count\":1}\nend\n").find("line"),
            std::string::npos);  // no phrasing
  EXPECT_NE(corpus_error("sir-tasks 1\nwhatever\n").find("line 2"), std::string::npos);
  EXPECT_THROW(load_corpus_file("/nonexistent.tasks"), CorpusError);
}

TEST(Judge, ComparesAgainstGold) {
  const auto easy = reply_to("How many easy courses?");
  EXPECT_FALSE(judge(Json::parse(R"({"count":3})"), easy));
  EXPECT_FALSE(judge(Json::parse(R"({"count":3,"rows":[4,2,1]})"), easy));
  EXPECT_TRUE(judge(Json::parse(R"({"count":3,"rows":[1,2]})"), easy));
  EXPECT_TRUE(judge(Json::parse(R"({"count":4})"), easy));
  EXPECT_TRUE(judge(Json::parse(R"({"rows":[1,2,4]})"), easy));

  const auto groups = reply_to("each difficulty");
  EXPECT_FALSE(judge(Json::parse(R"({"groups":[["Hard",2],["easy",3],["Moderate",1]]})"), groups));
  EXPECT_TRUE(judge(Json::parse(R"({"groups":[["Hard",2],["Easy",3]]})"), groups));

  const auto most = reply_to("most common terrain");
  EXPECT_FALSE(judge(Json::parse(R"({"value":"varied","count":2})"), most));
  EXPECT_TRUE(judge(Json::parse(R"({"value":"Flat","count":2})"), most));

  EXPECT_FALSE(judge(Json::parse(R"({"outcome":"clarify"})"), reply_to("marion courses")));
  EXPECT_FALSE(judge(Json::parse(R"({"outcome":"not_understood"})"), reply_to("blah")));
  EXPECT_FALSE(judge(Json::parse(R"({"outcome":"error"})"), reply_to("most common terrain of hard courses in boone")));
  EXPECT_TRUE(judge(Json::parse(R"({"count":3})"), reply_to("marion courses")));
}

TEST(Eval, Golf10AllTasksPass) {
  const auto report = run_eval(fixture::data_path("tasks/golf10.tasks"), fixture::default_lexicon());
  EXPECT_EQ(report.total.tasks, 10u);
  EXPECT_EQ(report.total.tasks_passed, 10u);
  EXPECT_EQ(report.total.phrasings_passed, 30u);
  EXPECT_EQ(report.categories.at("Easy").tasks, 4u);
  EXPECT_EQ(report.categories.at("Intermediate").tasks, 3u);
  EXPECT_EQ(report.categories.at("Complex").tasks, 3u);
  for (const auto& t : report.tasks) {
    EXPECT_TRUE(t.canonical_passed) << t.id;
    EXPECT_EQ(t.utterances_needed, 1u) << t.id;
  }
  const auto j = report_json(report);
  EXPECT_EQ(j["total"]["phrasings_passed"], 30);
  EXPECT_EQ(j["tasks"].size(), 10u);
}

TEST(Eval, StrictPaperLosesThreePhrasings) {
  const auto report = run_eval(fixture::data_path("tasks/golf10.tasks"), fixture::strict_lexicon());
  EXPECT_EQ(report.total.tasks_passed, 10u);
  EXPECT_EQ(report.total.phrasings_passed, 27u);
  std::vector<std::string> missed;
  for (const auto& t : report.tasks) {
    for (const auto& p : t.phrasings) {
      if (!p.passed) missed.push_back(t.id + "/" + p.phrasing.style);
    }
  }
  EXPECT_EQ(missed, (std::vector<std::string>{"T05/full", "T07/full", "T10/paraphrase"}));
  const auto& t05 = report.tasks[4];
  EXPECT_FALSE(t05.canonical_passed);
  EXPECT_EQ(t05.utterances_needed, 2u);
}

TEST(Eval, RephrasingRecovers) {
  const auto report = run_eval(fixture::data_path("tasks/rephrase.tasks"), fixture::default_lexicon());
  ASSERT_EQ(report.tasks.size(), 1u);
  const auto& t = report.tasks[0];
  EXPECT_TRUE(t.passed);
  EXPECT_EQ(t.utterances_needed, 2u);
  EXPECT_EQ(t.phrasings[0].status, "not_understood");
  EXPECT_FALSE(t.phrasings[0].detail.empty());
}

TEST(Eval, ChoicesAnswerClarifications) {
  std::istringstream in(
      "sir-tasks 1\n"
      "task M\ncategory: Easy\nphrase full: how many marion courses\ngold: {\"count\":3}\nchoose: County\nend\n"
      "task N\ncategory: Easy\nphrase full: how many marion courses\ngold: {\"outcome\":\"clarify\"}\nend\n");
  const auto report = run_eval(parse_corpus(in), fixture::mini6(), fixture::default_lexicon());
  EXPECT_TRUE(report.tasks[0].passed);
  EXPECT_EQ(report.tasks[0].phrasings[0].ir, "(count (= [County] \"marion\"))");
  EXPECT_TRUE(report.tasks[1].passed);
}

// Gold answers in the shipped corpora are reproduced by the oracle from
// their gold-query lines.
TEST(Eval, FrozenGoldMatchesOracle) {
  for (const auto* name : {"tasks/golf10.tasks", "tasks/rephrase.tasks"}) {
    const auto corpus = load_corpus_file(fixture::data_path(name));
    const auto sheet = oracle::read_csv_file(corpus.dataset);
    for (const auto& t : corpus.tasks) {
      ASSERT_FALSE(t.gold_query.empty()) << t.id;
      EXPECT_EQ(oracle_answer(t.gold_query, sheet), t.gold) << t.id;
    }
  }
}

TEST(Dataset, DeterministicAndLoadable) {
  EXPECT_EQ(generate_dataset(5, 127), fixture::read_file(fixture::data_path("golf127.csv")));
  EXPECT_EQ(generate_dataset(3, 40), generate_dataset(3, 40));
  EXPECT_NE(generate_dataset(3, 40), generate_dataset(4, 40));
  EXPECT_THROW(generate_dataset(1, 0), std::invalid_argument);
  const auto seed1 = load_table(generate_dataset(1, 127));
  EXPECT_EQ(seed1.row_count(), 127u);
  const std::map<ColumnIndex, std::set<std::string>> pools{
      {5, {"Low", "Moderate", "Premium"}},
      {6, {"9", "18", "36"}},
      {7, {"Easy", "Moderate", "Hard", "Executive"}},
      {8, {"Varied", "Flat", "Rolling", "Hilly"}},
  };
  for (const auto& [col, pool] : pools) {
    for (const auto& cell : column_values(seed1, col)) EXPECT_TRUE(pool.contains(cell.to_string())) << cell.to_string();
  }
  const auto one = load_table(generate_dataset(1, 1));
  EXPECT_EQ(one.row_count(), 1u);
  const auto big = load_table(generate_dataset(9, 500));
  ASSERT_EQ(big.column_count(), 10u);
  std::vector<std::string> names;
  for (const auto& c : big.columns()) names.push_back(c.display_name);
  EXPECT_EQ(names, (std::vector<std::string>{"Address", "City", "County", "Phone", "Course Type", "Price", "Holes",
                                             "Difficulty", "Terrain", "Web page"}));
  EXPECT_EQ(big.column(6).kind, ColumnKind::Numeric);
  EXPECT_EQ(big.column(3).kind, ColumnKind::Textual);
}

TEST(Render, ResultsAndPrompts) {
  const auto& t = fixture::mini6()->table;
  EXPECT_EQ(render_result(*reply_to("How many easy courses?").result, t), "3\n");
  EXPECT_EQ(render_result(*reply_to("most common terrain").result, t), "Varied (2)\n");
  EXPECT_EQ(render_result(*reply_to("city of flat courses").result, t),
            "row  City\n"
            "-----------\n"
            "2    Marion\n"
            "(1 row)\n");
  const auto groups = render_result(*reply_to("each difficulty").result, t);
  EXPECT_NE(groups.find("Moderate"), std::string::npos);
  EXPECT_NE(groups.find("Easy        3"), std::string::npos) << groups;

  const auto asked = reply_to("marion courses");
  EXPECT_EQ(render_clarification(std::get<NeedsClarification>(asked.outcome).request),
            "\"marion\" appears in more than one column. Which one did you mean?\n"
            "  1) City (3 rows)\n"
            "  2) County (3 rows)\n");
  const auto text = render_not_understood(std::get<NotUnderstood>(reply_to("blah").outcome));
  EXPECT_NE(text.find("Unrecognised: 'blah'"), std::string::npos) << text;
}
