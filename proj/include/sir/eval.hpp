#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sir/lexicon.hpp"
#include "sir/session.hpp"
#include "sir/table.hpp"

namespace sir {

enum class TaskCategory { Easy, Intermediate, Complex };

std::string_view to_string(TaskCategory category);

struct Phrasing {
  std::string style;  // full | terse | paraphrase | other
  std::string utterance;
};

// One corpus task. `gold` is one of
//   {"rows":[ids]}                      filter, order-insensitive
//   {"count":n[,"rows":[ids]]}          count
//   {"value":v,"count":n[,"rows":...]}  most/least frequent
//   {"groups":[[key..., n], ...]}       group count, order-insensitive
//   {"outcome":"clarify"|"not_understood"|"error"}
// `choices` answer clarification prompts in order, by column name.
struct TaskSpec {
  std::string id;
  TaskCategory category = TaskCategory::Easy;
  std::string description;
  std::vector<Phrasing> phrasings;
  std::string gold_query;
  nlohmann::ordered_json gold;
  std::vector<std::string> choices;
  std::size_t line = 0;
};

struct Corpus {
  std::string dataset;  // resolved path, empty when the corpus names none
  std::vector<TaskSpec> tasks;
};

// Plain-text task blocks:
//
//   sir-tasks 1
//   dataset: golf127.csv          (relative to the corpus file)
//   task T01
//   category: Easy
//   description: free text
//   phrase full: ...              (also terse:, paraphrase:, other:)
//   gold-query: count where [Terrain] = flat
//   gold: {"count":3}
//   choose: County
//   end
//
// '#' starts a comment line. Throws CorpusError with the line number.
Corpus parse_corpus(std::istream& in, const std::string& base_dir = ".");
Corpus load_corpus_file(const std::string& path);

struct PhrasingResult {
  Phrasing phrasing;
  bool passed = false;
  std::string status;  // ok | clarify | not_understood | error
  std::string ir;
  std::string detail;  // why it failed
};

struct TaskResult {
  std::string id;
  TaskCategory category = TaskCategory::Easy;
  std::string description;
  std::vector<PhrasingResult> phrasings;
  bool passed = false;            // any phrasing passed
  bool canonical_passed = false;  // the first "full" phrasing, else the first one
  std::optional<std::size_t> utterances_needed;  // phrasings tried up to the first pass
};

struct CategoryStats {
  std::size_t tasks = 0;
  std::size_t tasks_passed = 0;
  std::size_t phrasings = 0;
  std::size_t phrasings_passed = 0;
};

struct EvalReport {
  std::vector<TaskResult> tasks;
  std::map<std::string, CategoryStats> categories;  // keyed by category name
  CategoryStats total;
};

// Empty when the reply matches the gold answer, else a short reason.
std::optional<std::string> judge(const nlohmann::ordered_json& gold, const Reply& reply);

EvalReport run_eval(const Corpus& corpus, const TableHandle& table, const LexiconHandle& lexicon);
// Loads the corpus and its dataset. Throws CorpusError or TableError.
EvalReport run_eval(const std::string& corpus_path, const LexiconHandle& lexicon);

std::string report_text(const EvalReport& report);
nlohmann::ordered_json report_json(const EvalReport& report);

}  // namespace sir
