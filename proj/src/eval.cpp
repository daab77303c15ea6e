#include "sir/eval.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "sir/error.hpp"

namespace sir {

using Json = nlohmann::ordered_json;

constexpr TaskCategory kCategories[] = {TaskCategory::Easy, TaskCategory::Intermediate, TaskCategory::Complex};

std::string_view to_string(TaskCategory category) {
  switch (category) {
    case TaskCategory::Easy:
      return "Easy";
    case TaskCategory::Intermediate:
      return "Intermediate";
    case TaskCategory::Complex:
      return "Complex";
  }
  return "?";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void corpus_fail(std::size_t line, const std::string& what) {
  throw CorpusError("CorpusFormat", "line " + std::to_string(line) + ": " + what);
}

std::string status_of(const Reply& reply) {
  if (reply.error) return "error";
  if (std::holds_alternative<Parsed>(reply.outcome)) return "ok";
  if (std::holds_alternative<NeedsClarification>(reply.outcome)) return "clarify";
  return "not_understood";
}

// Comparable text for a gold JSON scalar or an engine cell.
std::string key_of(const Json& j) {
  if (j.is_string()) return normalize_key(j.get<std::string>());
  if (j.is_number()) return format_decimal(j.get<double>());
  return "";
}

std::string key_of(const CellValue& cell) {
  return cell.is_number() ? format_decimal(cell.as_number()) : normalize_key(cell.to_string());
}

std::set<RowId> id_set(const Json& j) {
  std::set<RowId> out;
  for (const auto& v : j) out.insert(v.get<RowId>());
  return out;
}

std::string ids_text(const std::set<RowId>& ids) {
  std::string out = "{";
  for (auto id : ids) out += (out.size() > 1 ? "," : "") + std::to_string(id);
  return out + "}";
}

}  // namespace

Corpus parse_corpus(std::istream& in, const std::string& base_dir) {
  Corpus corpus;
  std::optional<TaskSpec> task;
  bool header = false;
  std::size_t n = 0;
  std::set<std::string> ids;
  for (std::string raw; std::getline(in, raw);) {
    ++n;
    const auto line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "sir-tasks 1") corpus_fail(n, "expected 'sir-tasks 1' header");
      header = true;
      continue;
    }
    if (!task) {
      if (line.rfind("dataset:", 0) == 0) {
        corpus.dataset = (std::filesystem::path(base_dir) / trim(line.substr(8))).string();
      } else if (line.rfind("task ", 0) == 0) {
        task.emplace();
        task->id = trim(line.substr(5));
        task->line = n;
        if (!ids.insert(task->id).second) corpus_fail(n, "duplicate task id '" + task->id + "'");
      } else {
        corpus_fail(n, "expected 'task <id>' or 'dataset:'");
      }
      continue;
    }
    if (line == "end") {
      if (task->phrasings.empty()) corpus_fail(n, "task " + task->id + " has no phrasings");
      if (task->gold.is_null()) corpus_fail(n, "task " + task->id + " has no gold answer");
      corpus.tasks.push_back(std::move(*task));
      task.reset();
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) corpus_fail(n, "expected 'key: value'");
    const auto key = trim(std::string_view(line).substr(0, colon));
    const auto value = trim(std::string_view(line).substr(colon + 1));
    if (key == "category") {
      if (value == "Easy") task->category = TaskCategory::Easy;
      else if (value == "Intermediate") task->category = TaskCategory::Intermediate;
      else if (value == "Complex") task->category = TaskCategory::Complex;
      else corpus_fail(n, "unknown category '" + value + "'");
    } else if (key == "description") {
      task->description = value;
    } else if (key.rfind("phrase", 0) == 0) {
      auto style = trim(std::string_view(key).substr(6));
      if (style.empty()) style = "other";
      if (style != "full" && style != "terse" && style != "paraphrase" && style != "other") {
        corpus_fail(n, "unknown phrasing style '" + style + "'");
      }
      task->phrasings.push_back({style, value});
    } else if (key == "gold-query") {
      task->gold_query = value;
    } else if (key == "gold") {
      try {
        task->gold = Json::parse(value);
      } catch (const nlohmann::json::exception& e) {
        corpus_fail(n, std::string("bad gold JSON: ") + e.what());
      }
      if (!task->gold.is_object()) corpus_fail(n, "gold must be a JSON object");
    } else if (key == "choose") {
      task->choices.push_back(value);
    } else {
      corpus_fail(n, "unknown key '" + key + "'");
    }
  }
  if (task) corpus_fail(n, "task " + task->id + " is missing 'end'");
  if (!header) corpus_fail(std::max<std::size_t>(n, 1), "expected 'sir-tasks 1' header");
  return corpus;
}

Corpus load_corpus_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("IoError", "cannot open " + path);
  return parse_corpus(in, std::filesystem::path(path).parent_path().string());
}

std::optional<std::string> judge(const Json& gold, const Reply& reply) {
  const auto status = status_of(reply);
  if (gold.contains("outcome")) {
    const auto want = gold.at("outcome").get<std::string>();
    if (status == want) return std::nullopt;
    return "expected outcome " + want + ", got " + status;
  }
  if (status != "ok" || !reply.result) return "expected a result, got " + status;
  const auto& result = *reply.result;

  if (gold.contains("groups")) {
    const auto* g = std::get_if<GroupTableResult>(&result);
    if (!g) return std::string("expected a group table");
    std::multiset<std::pair<std::vector<std::string>, std::size_t>> want, got;
    for (const auto& entry : gold.at("groups")) {
      std::vector<std::string> key;
      for (std::size_t i = 0; i + 1 < entry.size(); ++i) key.push_back(key_of(entry[i]));
      want.insert({key, entry.back().get<std::size_t>()});
    }
    for (const auto& entry : g->groups) {
      std::vector<std::string> key;
      for (const auto& k : entry.key) key.push_back(key_of(k));
      got.insert({key, entry.count});
    }
    if (want != got) return std::string("group table differs");
    return std::nullopt;
  }
  if (gold.contains("value")) {
    const auto* v = std::get_if<ValueResult>(&result);
    if (!v) return std::string("expected a single value");
    if (key_of(gold.at("value")) != key_of(v->value)) return "expected value " + gold.at("value").dump() + ", got " + v->value.to_string();
    if (gold.contains("count") && gold.at("count").get<std::size_t>() != v->count) {
      return "expected count " + gold.at("count").dump() + ", got " + std::to_string(v->count);
    }
    return std::nullopt;
  }
  if (gold.contains("count")) {
    const auto* c = std::get_if<CountResult>(&result);
    if (!c) return std::string("expected a count");
    if (gold.at("count").get<std::size_t>() != c->count) {
      return "expected count " + gold.at("count").dump() + ", got " + std::to_string(c->count);
    }
    if (gold.contains("rows")) {
      const auto want = id_set(gold.at("rows"));
      const std::set<RowId> got(c->rows.begin(), c->rows.end());
      if (want != got) return "expected rows " + ids_text(want) + ", got " + ids_text(got);
    }
    return std::nullopt;
  }
  if (gold.contains("rows")) {
    const auto* r = std::get_if<RowSetResult>(&result);
    if (!r) return std::string("expected a row set");
    const auto want = id_set(gold.at("rows"));
    const std::set<RowId> got(r->row_ids.begin(), r->row_ids.end());
    if (want != got) return "expected rows " + ids_text(want) + ", got " + ids_text(got);
    return std::nullopt;
  }
  return std::string("gold answer has no recognised field");
}

EvalReport run_eval(const Corpus& corpus, const TableHandle& table, const LexiconHandle& lexicon) {
  EvalReport report;
  for (auto category : kCategories) {
    report.categories[std::string(to_string(category))];
  }
  for (const auto& task : corpus.tasks) {
    TaskResult tr{task.id, task.category, task.description, {}, false, false, std::nullopt};
    std::size_t canonical = 0;
    for (std::size_t i = 0; i < task.phrasings.size(); ++i) {
      if (task.phrasings[i].style == "full") {
        canonical = i;
        break;
      }
    }
    for (std::size_t i = 0; i < task.phrasings.size(); ++i) {
      const auto& phrasing = task.phrasings[i];
      Session session("eval", table, lexicon);
      Reply reply = session.submit(phrasing.utterance);
      for (const auto& choice : task.choices) {
        const auto* clarify = std::get_if<NeedsClarification>(&reply.outcome);
        if (!clarify) break;
        const auto column = table->table.find_column(normalize_key(choice));
        if (!column) break;
        try {
          reply = session.clarify(clarify->request.request_id, *column);
        } catch (const SessionError&) {
          break;
        }
      }
      PhrasingResult pr{phrasing, false, status_of(reply), {}, {}};
      if (const auto* parsed = std::get_if<Parsed>(&reply.outcome)) pr.ir = to_ir(parsed->intent, table->table);
      const auto failure = judge(task.gold, reply);
      pr.passed = !failure;
      if (failure) pr.detail = *failure;
      if (pr.passed && !tr.passed) {
        tr.passed = true;
        tr.utterances_needed = i + 1;
      }
      if (i == canonical) tr.canonical_passed = pr.passed;
      tr.phrasings.push_back(std::move(pr));
    }
    auto& stats = report.categories[std::string(to_string(task.category))];
    for (auto* s : {&stats, &report.total}) {
      s->tasks += 1;
      s->tasks_passed += tr.passed ? 1 : 0;
      s->phrasings += tr.phrasings.size();
      s->phrasings_passed += static_cast<std::size_t>(
          std::count_if(tr.phrasings.begin(), tr.phrasings.end(), [](const auto& p) { return p.passed; }));
    }
    report.tasks.push_back(std::move(tr));
  }
  return report;
}

EvalReport run_eval(const std::string& corpus_path, const LexiconHandle& lexicon) {
  const auto corpus = load_corpus_file(corpus_path);
  if (corpus.dataset.empty()) {
    if (corpus.tasks.empty()) return run_eval(corpus, nullptr, lexicon);
    throw CorpusError("CorpusFormat", corpus_path + ": no dataset given");
  }
  auto table = std::make_shared<const IndexedTable>(load_table_file(corpus.dataset));
  return run_eval(corpus, table, lexicon);
}

namespace {

std::string ratio(std::size_t a, std::size_t b) {
  std::ostringstream out;
  out << a << "/" << b;
  if (b) out << " (" << std::fixed << std::setprecision(1) << 100.0 * static_cast<double>(a) / static_cast<double>(b) << "%)";
  return out.str();
}

Json stats_json(const CategoryStats& s) {
  Json j;
  j["tasks"] = s.tasks;
  j["tasks_passed"] = s.tasks_passed;
  j["phrasings"] = s.phrasings;
  j["phrasings_passed"] = s.phrasings_passed;
  j["task_accuracy"] = s.tasks ? static_cast<double>(s.tasks_passed) / static_cast<double>(s.tasks) : 0.0;
  j["phrasing_accuracy"] = s.phrasings ? static_cast<double>(s.phrasings_passed) / static_cast<double>(s.phrasings) : 0.0;
  return j;
}

}  // namespace

std::string report_text(const EvalReport& report) {
  std::ostringstream out;
  for (const auto& t : report.tasks) {
    out << (t.passed ? "PASS " : "FAIL ") << t.id << " [" << to_string(t.category) << "] " << t.description << "\n";
    for (const auto& p : t.phrasings) {
      out << "  " << (p.passed ? "ok   " : "miss ") << std::left << std::setw(11) << p.phrasing.style << p.phrasing.utterance;
      if (!p.passed) out << "  -- " << p.detail;
      out << "\n";
    }
  }
  out << "\n" << std::left << std::setw(14) << "category" << std::setw(20) << "tasks" << "phrasings\n";
  for (auto category : kCategories) {
    const auto name = std::string(to_string(category));
    const auto& s = report.categories.at(name);
    out << std::setw(14) << name << std::setw(20) << ratio(s.tasks_passed, s.tasks) << ratio(s.phrasings_passed, s.phrasings)
        << "\n";
  }
  out << std::setw(14) << "total" << std::setw(20) << ratio(report.total.tasks_passed, report.total.tasks)
      << ratio(report.total.phrasings_passed, report.total.phrasings) << "\n";
  return out.str();
}

Json report_json(const EvalReport& report) {
  Json tasks = Json::array();
  for (const auto& t : report.tasks) {
    Json phrasings = Json::array();
    for (const auto& p : t.phrasings) {
      Json pj;
      pj["style"] = p.phrasing.style;
      pj["utterance"] = p.phrasing.utterance;
      pj["passed"] = p.passed;
      pj["status"] = p.status;
      pj["ir"] = p.ir;
      pj["detail"] = p.detail;
      phrasings.push_back(std::move(pj));
    }
    Json tj;
    tj["id"] = t.id;
    tj["category"] = to_string(t.category);
    tj["description"] = t.description;
    tj["passed"] = t.passed;
    tj["canonical_passed"] = t.canonical_passed;
    tj["utterances_needed"] = t.utterances_needed ? Json(*t.utterances_needed) : Json(nullptr);
    tj["phrasings"] = std::move(phrasings);
    tasks.push_back(std::move(tj));
  }
  Json categories = Json::object();
  for (auto category : kCategories) {
    const auto name = std::string(to_string(category));
    categories[name] = stats_json(report.categories.at(name));
  }
  Json j;
  j["tasks"] = std::move(tasks);
  j["categories"] = std::move(categories);
  j["total"] = stats_json(report.total);
  return j;
}

}  // namespace sir
