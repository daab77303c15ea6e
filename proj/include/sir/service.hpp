#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "sir/session.hpp"

namespace httplib {
class Server;
}

namespace sir {

struct ServiceConfig {
  std::size_t max_tables = 16;
  std::chrono::seconds session_idle_timeout{30 * 60};
  LexiconHandle lexicon;   // defaults when null
  std::string static_dir;  // served at / when set
  std::function<std::chrono::steady_clock::time_point()> clock;  // steady_clock::now when empty
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Request handlers, independent of the HTTP transport so they can be tested
// directly. Every body is produced by wire::to_body.
//
//   POST /tables                    text/csv           -> 201 | 400
//   POST /tables/{id}/sessions                         -> 201 | 404
//   POST /sessions/{id}/query       {"utterance"}      -> 200 | 400 | 404
//   POST /sessions/{id}/clarify     {"request_id","column"} -> 200 | 400 | 404 | 409
//   GET  /tables/{id}/rows?ids=1,2  (or offset/limit)  -> 200 | 400 | 404
//   GET  /health                                       -> 200
class Service {
 public:
  explicit Service(ServiceConfig config = {});

  HttpResponse upload_table(std::string_view csv, const std::string& source_name = "upload");
  HttpResponse create_session(const std::string& table_id);
  HttpResponse query(const std::string& session_id, std::string_view body);
  HttpResponse clarify(const std::string& session_id, std::string_view body);
  HttpResponse rows(const std::string& table_id, const std::optional<std::string>& ids,
                    std::size_t offset = 0, std::size_t limit = 100);
  HttpResponse health();

  // Registers an already loaded table (e.g. --table preload); returns its id.
  std::string add_table(TableHandle table);

  std::size_t table_count() const;
  std::size_t session_count() const;

  void bind(httplib::Server& server);

 private:
  struct TableSlot {
    TableHandle table;
    std::list<std::string>::iterator lru;
  };
  struct SessionSlot {
    std::shared_ptr<Session> session;
    std::chrono::steady_clock::time_point last_used;
  };

  std::chrono::steady_clock::time_point now() const;
  TableHandle find_table(const std::string& id);
  std::shared_ptr<Session> find_session(const std::string& id);
  void expire_sessions_locked();

  ServiceConfig config_;
  mutable std::mutex tables_mutex_;
  std::map<std::string, TableSlot> tables_;
  std::list<std::string> lru_;  // most recent first
  std::uint64_t next_table_ = 1;

  mutable std::mutex sessions_mutex_;
  std::map<std::string, SessionSlot> sessions_;
};

// Blocking HTTP server over a Service. Reads SIR_BIND / SIR_PORT when host is
// empty or port is negative.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  // Binds and serves on a background thread; returns the bound port
  // (port 0 picks a free one). Throws std::runtime_error on bind failure.
  int start(const std::string& host, int port);
  // Binds and serves on the calling thread until stop().
  void run(const std::string& host, int port);
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
  struct Worker;
  std::unique_ptr<Worker> worker_;
};

std::string default_bind_host();
int default_port();

}  // namespace sir
