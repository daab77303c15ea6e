// sir: ask questions about a CSV table in plain English.
//
// Exit codes
//   0  answered (or REPL / server / generator finished normally)
//   1  I/O, table, lexicon or usage error
//   2  utterance not understood
//   3  clarification needed (the candidates are printed)
//   4  the query was understood but could not be answered
//   5  eval: at least one task failed

#include <unistd.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "sir/dataset.hpp"
#include "sir/error.hpp"
#include "sir/eval.hpp"
#include "sir/render.hpp"
#include "sir/service.hpp"
#include "sir/session.hpp"
#include "sir/wire.hpp"

namespace {

enum Exit { kOk = 0, kIoError = 1, kNotUnderstood = 2, kClarify = 3, kQueryError = 4, kEvalFailed = 5 };

struct Options {
  std::string table;
  std::string query;
  std::string format = "text";
  std::string lexicon;
  bool strict_paper = false;
  bool repl = false;
  bool serve = false;
  std::string bind;
  int port = -1;
  std::string static_dir;
  std::string eval;
  std::optional<std::size_t> generate;
  std::uint32_t seed = 1;
};

sir::LexiconHandle load_lexicon(const Options& opt) {
  if (!opt.lexicon.empty()) return std::make_shared<const sir::Lexicon>(sir::load_lexicon_file(opt.lexicon));
  if (opt.strict_paper) return std::make_shared<const sir::Lexicon>(sir::Lexicon::strict_paper());
  return std::make_shared<const sir::Lexicon>(sir::Lexicon::defaults());
}

sir::TableHandle load(const std::string& path) {
  return std::make_shared<const sir::IndexedTable>(sir::load_table_file(path));
}

int exit_code(const sir::Reply& reply) {
  if (reply.error) return kQueryError;
  if (std::holds_alternative<sir::NeedsClarification>(reply.outcome)) return kClarify;
  if (std::holds_alternative<sir::NotUnderstood>(reply.outcome)) return kNotUnderstood;
  return kOk;
}

std::string render_text(const sir::Reply& reply, const sir::TableDocument& table) {
  if (reply.error) return "error: " + reply.error->code() + ": " + reply.error->what() + "\n";
  if (const auto* c = std::get_if<sir::NeedsClarification>(&reply.outcome)) return sir::render_clarification(c->request);
  if (const auto* n = std::get_if<sir::NotUnderstood>(&reply.outcome)) return sir::render_not_understood(*n);
  return reply.result ? sir::render_result(*reply.result, table) : std::string();
}

int oneshot(const Options& opt) {
  auto table = load(opt.table);
  sir::Session session("cli", table, load_lexicon(opt));
  const auto reply = session.submit(opt.query);
  if (opt.format == "json") {
    std::cout << sir::wire::to_body(sir::wire::envelope(reply, table->table));
  } else if (opt.format == "ir" && std::holds_alternative<sir::Parsed>(reply.outcome)) {
    std::cout << sir::to_ir(std::get<sir::Parsed>(reply.outcome).intent, table->table) << "\n";
  } else {
    std::cout << render_text(reply, table->table);
  }
  return exit_code(reply);
}

// A numbered menu answer or a column name picks a candidate; anything else
// is a fresh utterance.
std::optional<sir::ColumnIndex> menu_choice(const std::string& line, const sir::ClarificationRequest& request,
                                            const sir::TableDocument& table) {
  try {
    std::size_t used = 0;
    const auto n = std::stoul(line, &used);
    if (used == line.size() && n >= 1 && n <= request.candidates.size()) return request.candidates[n - 1].column;
  } catch (const std::exception&) {
  }
  const auto column = table.find_column(sir::normalize_key(line));
  if (!column) return std::nullopt;
  for (const auto& c : request.candidates) {
    if (c.column == *column) return column;
  }
  return std::nullopt;
}

int repl(const Options& opt) {
  auto table = load(opt.table);
  auto session = sir::open_session(table, load_lexicon(opt));
  const bool interactive = isatty(STDIN_FILENO);
  bool echo_ir = false;
  const auto& doc = table->table;
  std::cout << "Loaded " << doc.source_name() << ": " << doc.row_count() << " rows, " << doc.column_count()
            << " columns. Type \\quit to leave, \\ir to show what was understood.\n";
  for (std::string line;;) {
    if (interactive) std::cout << (session->pending() ? "choose> " : "> ") << std::flush;
    if (!std::getline(std::cin, line)) break;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    if (line == "\\quit" || line == "\\q") break;
    if (line == "\\ir") {
      echo_ir = !echo_ir;
      std::cout << "IR echo " << (echo_ir ? "on" : "off") << "\n";
      continue;
    }
    sir::Reply reply;
    const auto pending = session->pending();
    if (pending) {
      if (const auto choice = menu_choice(line, *pending, doc)) {
        reply = session->clarify(pending->request_id, *choice);
      } else {
        reply = session->submit(line);
      }
    } else {
      reply = session->submit(line);
    }
    if (echo_ir) {
      if (const auto* p = std::get_if<sir::Parsed>(&reply.outcome)) std::cout << "understood: " << sir::to_ir(p->intent, doc) << "\n";
    }
    std::cout << render_text(reply, doc);
  }
  return kOk;
}

int serve(const Options& opt) {
  sir::ServiceConfig config;
  config.lexicon = load_lexicon(opt);
  config.static_dir = opt.static_dir;
  sir::Service service(config);
  if (!opt.table.empty()) {
    const auto id = service.add_table(load(opt.table));
    std::cerr << "preloaded " << opt.table << " as " << id << "\n";
  }
  sir::HttpServer server(service);
  const auto host = opt.bind.empty() ? sir::default_bind_host() : opt.bind;
  const auto port = opt.port < 0 ? sir::default_port() : opt.port;
  std::cerr << "listening on http://" << host << ":" << port << "\n";
  server.run(host, port);
  return kOk;
}

int eval(const Options& opt) {
  const auto report = sir::run_eval(opt.eval, load_lexicon(opt));
  if (opt.format == "json") {
    std::cout << sir::report_json(report).dump(2) << "\n";
  } else {
    std::cout << sir::report_text(report);
  }
  return report.total.tasks_passed == report.total.tasks ? kOk : kEvalFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ask questions about a CSV table in plain English."};
  app.set_version_flag("--version", std::string(sir::wire::kApiVersion));
  Options opt;
  std::string positional;
  bool emit_ir = false;
  app.add_option("-t,--table", opt.table, "CSV file to query (header row required)");
  app.add_option("-q,--query", opt.query, "Utterance to answer");
  app.add_option("utterance", positional, "Utterance to answer (same as -q)");
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json", "ir"}));
  app.add_flag("--emit-ir", emit_ir, "Print only the canonical IR (same as --format ir)");
  auto* lexicon = app.add_option("--lexicon", opt.lexicon, "Lexicon file overriding the built-in vocabulary");
  app.add_flag("--strict-paper", opt.strict_paper, "Use the literal lexicon: no 'of the' stripping, no plural folding")
      ->excludes(lexicon);
  auto* repl_flag = app.add_flag("--repl", opt.repl, "Interactive question loop");
  auto* serve_flag = app.add_flag("--serve", opt.serve, "Run the HTTP service");
  app.add_option("--bind", opt.bind, "Service bind address (default $SIR_BIND or 127.0.0.1)");
  app.add_option("--port", opt.port, "Service port (default $SIR_PORT or 8080)")->check(CLI::Range(0, 65535));
  app.add_option("--static", opt.static_dir, "Directory of static files served at /")->check(CLI::ExistingDirectory);
  auto* eval_opt = app.add_option("--eval", opt.eval, "Run a task corpus and report accuracy");
  auto* gen_opt = app.add_option("--generate", opt.generate, "Write a synthetic golf table with N rows to stdout")
                      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "Seed for --generate");
  repl_flag->excludes(serve_flag)->excludes(eval_opt)->excludes(gen_opt);
  serve_flag->excludes(eval_opt)->excludes(gen_opt);
  eval_opt->excludes(gen_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kIoError;
  }
  if (emit_ir) opt.format = "ir";
  if (!positional.empty()) {
    if (!opt.query.empty()) {
      std::cerr << "sir: give the utterance either with -q or as an argument, not both\n";
      return kIoError;
    }
    opt.query = positional;
  }

  try {
    if (opt.generate) {
      std::cout << sir::generate_dataset(opt.seed, *opt.generate);
      return kOk;
    }
    if (!opt.eval.empty()) return eval(opt);
    if (opt.serve) return serve(opt);
    if (opt.table.empty()) {
      std::cerr << "sir: --table is required\n" << app.help();
      return kIoError;
    }
    if (opt.repl) return repl(opt);
    if (opt.query.empty()) {
      std::cerr << "sir: nothing to ask; give an utterance or use --repl\n";
      return kIoError;
    }
    return oneshot(opt);
  } catch (const sir::TableError& e) {
    std::cerr << "sir: " << e.code() << ": " << e.what();
    if (e.row()) std::cerr << " (row " << *e.row() << ")";
    if (e.column()) std::cerr << " (column " << *e.column() << ")";
    std::cerr << "\n";
  } catch (const sir::Error& e) {
    std::cerr << "sir: " << e.code() << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "sir: " << e.what() << "\n";
  }
  return kIoError;
}
