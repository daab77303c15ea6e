// One PASS/FAIL line per acceptance criterion; exit status 1 if any fail.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>

#include "oracle.hpp"
#include "sir/engine.hpp"
#include "sir/eval.hpp"
#include "sir/service.hpp"
#include "sir/wire.hpp"
#include "support.hpp"

using namespace sir;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string outcome_of(std::string_view utterance, const IndexedTable& t, const Lexicon& lx) {
  return fixture::describe(utterance, t, lx);
}

Verdict task_suite() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const auto path = fixture::data_path("tasks/golf10.tasks");
  const auto corpus = load_corpus_file(path);
  const auto report = run_eval(path, fixture::default_lexicon());
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::size_t canonical = 0;
  for (const auto& t : report.tasks) canonical += t.canonical_passed;
  const auto sheet = oracle::read_csv_file(corpus.dataset);
  std::size_t gold_ok = 0;
  for (const auto& t : corpus.tasks) {
    gold_ok += oracle::answer(oracle::parse_query(t.gold_query, sheet), sheet) == t.gold;
  }
  const auto split = std::to_string(report.categories.at("Easy").tasks) + "/" +
                     std::to_string(report.categories.at("Intermediate").tasks) + "/" +
                     std::to_string(report.categories.at("Complex").tasks);
  if (load_table_file(corpus.dataset).row_count() != 127) v.fail("dataset is not 127 rows");
  if (split != "4/3/3") v.fail("category split " + split);
  if (gold_ok != corpus.tasks.size()) v.fail("gold differs from oracle on some task");
  if (canonical != 10) v.fail(std::to_string(canonical) + "/10 canonical phrasings");
  if (seconds >= 5.0) v.fail("took " + std::to_string(seconds) + " s");
  if (v.pass) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", seconds);
    v.detail = std::to_string(canonical) + "/10 canonical, split " + split + ", gold re-derived, " + buf + " s";
  }
  return v;
}

Verdict phrasing_robustness() {
  Verdict v;
  const auto report = run_eval(fixture::data_path("tasks/golf10.tasks"), fixture::default_lexicon());
  for (const auto& t : report.tasks) {
    bool terse = false;
    for (const auto& p : t.phrasings) terse |= p.phrasing.style == "terse" && p.passed;
    if (!terse) v.fail(t.id + " has no passing terse phrasing");
  }
  const auto passed = report.total.phrasings_passed;
  if (report.total.phrasings != 30) v.fail("corpus has " + std::to_string(report.total.phrasings) + " phrasings");
  if (passed < 25) v.fail(std::to_string(passed) + "/30 phrasings");
  if (v.pass) v.detail = std::to_string(passed) + "/30 phrasings, terse pass on every task";
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  std::mt19937 rng(20240501);
  std::size_t cases = 0;
  for (; cases < 1000 && v.pass; ++cases) {
    const auto c = fixture::random_case(rng, 50);
    const auto& t = c.table->table;
    const auto p = fixture::random_predicate(rng, c, 3);
    const auto tag = "case " + std::to_string(cases) + " " + to_ir(p, t);
    oracle::Query q;
    q.where = fixture::to_oracle(p);

    const auto rows = select_rows(t, p);
    if (rows != oracle::matching(q, c.sheet)) v.fail("selection differs, " + tag);
    const auto count = std::get<CountResult>(execute(QueryIntent{IntentKind::Count, p, {}, {}, {}}, t));
    q.verb = oracle::Query::Verb::Count;
    if (count.count != oracle::answer(q, c.sheet).at("count").get<std::size_t>()) v.fail("count differs, " + tag);
    const auto filter = std::get<RowSetResult>(execute(QueryIntent{IntentKind::Filter, p, {}, {}, {}}, t));
    if (filter.row_ids != rows) v.fail("filter differs, " + tag);

    std::vector<ColumnIndex> keys{static_cast<ColumnIndex>(rng() % t.column_count())};
    if (rng() % 3 == 0) keys.push_back(static_cast<ColumnIndex>(rng() % t.column_count()));
    const auto groups = std::get<GroupTableResult>(execute(QueryIntent{IntentKind::GroupCount, p, {}, {}, keys}, t));
    q.verb = oracle::Query::Verb::GroupCount;
    q.columns.assign(keys.begin(), keys.end());
    const auto want = oracle::answer(q, c.sheet).at("groups");
    if (want.size() != groups.groups.size()) {
      v.fail("group count differs, " + tag);
    } else {
      for (std::size_t g = 0; g < want.size(); ++g) {
        if (groups.groups[g].count != want[g].back().get<std::size_t>()) v.fail("group size differs, " + tag);
      }
    }

    std::size_t covered = groups.excluded_rows.size();
    std::set<RowId> seen(groups.excluded_rows.begin(), groups.excluded_rows.end());
    for (const auto& g : groups.groups) {
      covered += g.count;
      seen.insert(g.rows.begin(), g.rows.end());
    }
    if (covered != rows.size() || seen != std::set<RowId>(rows.begin(), rows.end())) v.fail("partition law, " + tag);
    if (select_rows(t, Predicate::negate(p)).size() != t.row_count() - rows.size()) v.fail("complement law, " + tag);
    const auto p2 = fixture::random_predicate(rng, c, 3);
    const auto both = select_rows(t, Predicate::all_of({p, p2})).size();
    const auto either = select_rows(t, Predicate::any_of({p, p2})).size();
    if (either != rows.size() + select_rows(t, p2).size() - both) v.fail("inclusion-exclusion law, " + tag);
  }
  if (v.pass) v.detail = std::to_string(cases) + " cases, partition/complement/inclusion-exclusion hold";
  return v;
}

// Values present in two or more textual columns must prompt with exactly
// those columns; answering gives the IR of the qualified utterance.
Verdict clarification() {
  Verdict v;
  const auto& lx = *fixture::default_lexicon();
  std::mt19937 rng(77);
  std::size_t checked = 0;
  const auto check = [&](const IndexedTable& t, const std::string& value, const std::string& tag) {
    const auto key = normalize_key(value);
    std::set<ColumnIndex> holders;
    for (const auto& col : t.table.columns()) {
      if (col.kind != ColumnKind::Textual) continue;
      for (RowId r = 0; r < t.table.row_count(); ++r) {
        const auto& cell = t.table.cell(r, col.index);
        if (cell.is_text() && normalize_key(cell.as_text()) == key) holders.insert(col.index);
      }
    }
    if (holders.size() < 2) return;
    ++checked;
    const auto utterance = "how many " + value;
    const auto outcome = parse(utterance, t.table, t.index, lx);
    const auto* asked = std::get_if<NeedsClarification>(&outcome);
    if (!asked) return v.fail(tag + ": '" + utterance + "' gave " + fixture::describe(outcome, t.table));
    std::set<ColumnIndex> offered;
    for (const auto& c : asked->request.candidates) offered.insert(c.column);
    if (offered != holders) return v.fail(tag + ": wrong candidate columns for '" + value + "'");
    for (auto col : holders) {
      const auto resolved = fixture::describe(resume(asked->request, col, t.table, lx), t.table);
      const auto qualified = outcome_of(utterance + " " + t.table.column(col).display_name, t, lx);
      if (resolved != qualified) return v.fail(tag + ": " + resolved + " vs " + qualified);
    }
  };
  check(*fixture::mini6(), "Marion", "mini6");
  check(*fixture::golf127(), "Marion", "golf127");
  const std::vector<std::string> words{"red", "green", "Blue", "red oak", "amber", "slate", "Teal"};
  for (int i = 0; i < 300 && v.pass; ++i) {
    const auto c = fixture::random_case(rng, 30);
    for (const auto& w : words) check(*c.table, w, "random " + std::to_string(i));
  }
  if (v.pass) v.detail = std::to_string(checked) + " ambiguous values prompted and resolved";
  return v;
}

Verdict strict_paper_regression() {
  Verdict v;
  const auto& golf = *fixture::golf127();
  const auto& strict = *fixture::strict_lexicon();
  const auto& dflt = *fixture::default_lexicon();
  const std::string each = "How many courses are there in each of the counties?";
  if (outcome_of("Most used terrain", golf, strict) != "not_understood") v.fail("strict: 'Most used terrain' parsed");
  if (outcome_of(each, golf, strict) == "(group-count true ([County]))") v.fail("strict: 'each of the counties' parsed");
  if (outcome_of("Most popular terrain", golf, dflt) != "(most true [Terrain])") v.fail("default: 'Most popular terrain'");
  if (outcome_of(each, golf, dflt) != "(group-count true ([County]))") v.fail("default: 'each of the counties'");
  if (v.pass) v.detail = "strict lexicon fails both documented phrasings, default parses them";
  return v;
}

Verdict normalization() {
  Verdict v;
  const auto& lx = *fixture::default_lexicon();
  for (const auto& [table, name] : {std::pair{fixture::mini6(), "CourseType"}, std::pair{fixture::golf127(), "Course Type"}}) {
    const auto want = "(filter (= [" + std::string(name) + "] \"private\"))";
    for (const auto* spelling : {"CourseType", "course type", "Course Type"}) {
      const auto got = outcome_of(std::string("private ") + spelling, *table, lx);
      if (got != want) v.fail(std::string("'") + spelling + "' gave " + got);
    }
  }
  for (const auto* u : {"courses with 9", "how many courses with more than 9", "at least 18", "18"}) {
    if (outcome_of(u, *fixture::golf127(), lx) != "not_understood") v.fail(std::string("'") + u + "' was accepted");
  }
  if (outcome_of("courses with more than 9 holes", *fixture::golf127(), lx) != "(filter (> [Holes] 9))") {
    v.fail("explicit numeric column rejected");
  }
  if (v.pass) v.detail = "3 spellings agree on both tables, bare numbers rejected";
  return v;
}

std::string run_cli(const std::string& args) {
  std::string out;
  FILE* pipe = popen((std::string(SIR_CLI) + " " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return out;
  char buf[4096];
  while (auto n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  pclose(pipe);
  return out;
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Verdict wire_parity() {
  Verdict v;
  const auto path = fixture::data_path("golf127.csv");
  Service service;
  const auto tid = wire::Json::parse(service.upload_table(fixture::read_file(path)).body)["payload"]["table_id"];
  const std::vector<std::string> golden{
      "Can you provide me with a list of easy courses in Hancock with a varied terrain?",
      "Boone flat Golf Course",
      "What is the most common type of terrain?",
      "How many courses are there in each of the counties?",
      "number of executive courses in each county",
      "How many courses either have a hilly terrain or have a difficulty level of hard?",
      "count Marion county executive or 9 holes",
      "marion courses",
      "Most used terrain",
      "most common terrain of hard courses in Boone with 36 holes",
  };
  std::size_t same = 0;
  for (const auto& u : golden) {
    const auto sid = wire::Json::parse(service.create_session(tid).body)["payload"]["session_id"].get<std::string>();
    const auto want = service.query(sid, wire::Json{{"utterance", u}}.dump()).body;
    const auto got = run_cli("-t " + quote(path) + " --format json " + quote(u));
    if (got == want) {
      ++same;
    } else {
      v.fail("differs for '" + u + "'");
    }
  }
  if (v.pass) v.detail = std::to_string(same) + "/10 golden queries byte-identical";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Verdict (*)()>> criteria{
      {"task-suite", task_suite},
      {"phrasing-robustness", phrasing_robustness},
      {"oracle-equivalence", oracle_equivalence},
      {"clarification", clarification},
      {"strict-paper-regression", strict_paper_regression},
      {"normalization", normalization},
      {"wire-cli-parity", wire_parity},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << "\n";
    failed += !v.pass;
  }
  return failed ? 1 : 0;
}
