#include "sir/service.hpp"

#include <charconv>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include <httplib.h>

#include "sir/error.hpp"
#include "sir/wire.hpp"

namespace sir {

using wire::Json;

namespace {

HttpResponse json_response(int status, const Json& body) { return {status, wire::to_body(body), "application/json"}; }

HttpResponse error_response(int status, std::string_view code, std::string_view message) {
  return json_response(status, wire::error_envelope(code, message));
}

Json ok_envelope(Json payload) {
  Json j;
  j["api_version"] = wire::kApiVersion;
  j["status"] = "ok";
  j["payload"] = std::move(payload);
  return j;
}

std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<Json> parse_body(std::string_view body) {
  try {
    auto j = Json::parse(body);
    if (j.is_object()) return j;
  } catch (const nlohmann::json::exception&) {
  }
  return std::nullopt;
}

}  // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)) {
  if (!config_.lexicon) config_.lexicon = std::make_shared<const Lexicon>(Lexicon::defaults());
  if (config_.max_tables == 0) config_.max_tables = 1;
}

std::chrono::steady_clock::time_point Service::now() const {
  return config_.clock ? config_.clock() : std::chrono::steady_clock::now();
}

std::string Service::add_table(TableHandle table) {
  std::lock_guard lock(tables_mutex_);
  auto id = "t" + std::to_string(next_table_++);
  lru_.push_front(id);
  tables_[id] = TableSlot{std::move(table), lru_.begin()};
  while (tables_.size() > config_.max_tables) {
    tables_.erase(lru_.back());
    lru_.pop_back();
  }
  return id;
}

TableHandle Service::find_table(const std::string& id) {
  std::lock_guard lock(tables_mutex_);
  auto it = tables_.find(id);
  if (it == tables_.end()) return nullptr;
  lru_.splice(lru_.begin(), lru_, it->second.lru);
  return it->second.table;
}

void Service::expire_sessions_locked() {
  const auto t = now();
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (t - it->second.last_used > config_.session_idle_timeout) {
      it = sessions_.erase(it);
    } else {
      ++it;
    }
  }
}

std::shared_ptr<Session> Service::find_session(const std::string& id) {
  std::lock_guard lock(sessions_mutex_);
  expire_sessions_locked();
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return nullptr;
  it->second.last_used = now();
  return it->second.session;
}

std::size_t Service::table_count() const {
  std::lock_guard lock(tables_mutex_);
  return tables_.size();
}

std::size_t Service::session_count() const {
  std::lock_guard lock(sessions_mutex_);
  return sessions_.size();
}

HttpResponse Service::upload_table(std::string_view csv, const std::string& source_name) {
  TableHandle table;
  try {
    LoadOptions options;
    options.source_name = source_name;
    table = std::make_shared<const IndexedTable>(load_table(csv, options));
  } catch (const TableError& e) {
    return json_response(400, wire::error_envelope(e));
  }
  auto id = add_table(table);
  Json payload;
  payload["table_id"] = id;
  const auto schema = wire::table_schema_to_json(table->table);
  for (const auto& [k, v] : schema.items()) payload[k] = v;
  return json_response(201, ok_envelope(std::move(payload)));
}

HttpResponse Service::create_session(const std::string& table_id) {
  auto table = find_table(table_id);
  if (!table) return error_response(404, "UnknownTable", "no table '" + table_id + "'");
  auto session = open_session(table, config_.lexicon);
  {
    std::lock_guard lock(sessions_mutex_);
    expire_sessions_locked();
    sessions_[session->id()] = SessionSlot{session, now()};
  }
  return json_response(201, ok_envelope(Json{{"session_id", session->id()}, {"table_id", table_id}}));
}

HttpResponse Service::query(const std::string& session_id, std::string_view body) {
  auto session = find_session(session_id);
  if (!session) return error_response(404, "UnknownSession", "no session '" + session_id + "'");
  const auto request = parse_body(body);
  if (!request || !request->contains("utterance") || !request->at("utterance").is_string()) {
    return error_response(400, "BadRequest", "expected {\"utterance\": string}");
  }
  const auto reply = session->submit(request->at("utterance").get<std::string>());
  return json_response(200, wire::envelope(reply, session->table()->table));
}

HttpResponse Service::clarify(const std::string& session_id, std::string_view body) {
  auto session = find_session(session_id);
  if (!session) return error_response(404, "UnknownSession", "no session '" + session_id + "'");
  const auto request = parse_body(body);
  if (!request || !request->contains("request_id") || !request->at("request_id").is_number_unsigned() ||
      !request->contains("column")) {
    return error_response(400, "BadRequest", "expected {\"request_id\": integer, \"column\": index or name}");
  }
  const auto& table = session->table()->table;
  const auto& column = request->at("column");
  std::optional<ColumnIndex> chosen;
  if (column.is_number_unsigned()) {
    chosen = column.get<ColumnIndex>();
  } else if (column.is_string()) {
    chosen = table.find_column(normalize_key(column.get<std::string>()));
  }
  if (!chosen) return error_response(400, "InvalidChoice", "column is not one of the offered candidates");
  try {
    const auto reply = session->clarify(request->at("request_id").get<std::uint64_t>(), *chosen);
    return json_response(200, wire::envelope(reply, table));
  } catch (const SessionError& e) {
    return json_response(e.code() == "InvalidChoice" ? 400 : 409, wire::error_envelope(e));
  }
}

HttpResponse Service::rows(const std::string& table_id, const std::optional<std::string>& ids, std::size_t offset,
                           std::size_t limit) {
  auto table = find_table(table_id);
  if (!table) return error_response(404, "UnknownTable", "no table '" + table_id + "'");
  const auto& doc = table->table;
  std::vector<RowId> wanted;
  if (ids) {
    std::string_view rest = *ids;
    while (!ids->empty()) {
      const auto comma = rest.find(',');
      const auto piece = rest.substr(0, comma);
      const auto id = parse_index(piece);
      if (!id || *id >= doc.row_count()) {
        return error_response(400, "InvalidRowId", "row id '" + std::string(piece) + "' is not in the table");
      }
      wanted.push_back(*id);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  } else {
    for (auto id = offset; id < doc.row_count() && id - offset < limit; ++id) wanted.push_back(id);
  }
  Json payload;
  payload["table_id"] = table_id;
  payload["row_count"] = doc.row_count();
  payload["rows"] = wire::rows_to_json(doc, wanted);
  return json_response(200, ok_envelope(std::move(payload)));
}

HttpResponse Service::health() {
  return json_response(200, ok_envelope(Json{{"tables", table_count()}, {"sessions", session_count()}}));
}

void Service::bind(httplib::Server& server) {
  auto send = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Post("/tables", [this, send](const httplib::Request& req, httplib::Response& res) {
    const auto name = req.has_param("name") ? req.get_param_value("name") : std::string("upload");
    send(res, upload_table(req.body, name));
  });
  server.Post("/tables/:id/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, create_session(req.path_params.at("id")));
  });
  server.Get("/tables/:id/rows", [this, send](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> ids;
    if (req.has_param("ids")) ids = req.get_param_value("ids");
    const auto offset = req.has_param("offset") ? parse_index(req.get_param_value("offset")) : std::size_t{0};
    const auto limit = req.has_param("limit") ? parse_index(req.get_param_value("limit")) : std::size_t{100};
    if (!offset || !limit) {
      send(res, error_response(400, "BadRequest", "offset and limit must be non-negative integers"));
      return;
    }
    send(res, rows(req.path_params.at("id"), ids, *offset, *limit));
  });
  server.Post("/sessions/:id/query", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, query(req.path_params.at("id"), req.body));
  });
  server.Post("/sessions/:id/clarify", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, clarify(req.path_params.at("id"), req.body));
  });
  server.Get("/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  if (!config_.static_dir.empty()) server.set_mount_point("/", config_.static_dir);
}

std::string default_bind_host() {
  const char* v = std::getenv("SIR_BIND");
  return v && *v ? v : "127.0.0.1";
}

int default_port() {
  const char* v = std::getenv("SIR_PORT");
  if (v && *v) {
    if (auto p = parse_index(v); p && *p <= 65535) return static_cast<int>(*p);
  }
  return 8080;
}

struct HttpServer::Worker {
  std::thread thread;
};

HttpServer::HttpServer(Service& service) : server_(std::make_unique<httplib::Server>()) { service.bind(*server_); }

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  const auto h = host.empty() ? default_bind_host() : host;
  const auto p = port < 0 ? default_port() : port;
  int bound = p == 0 ? server_->bind_to_any_port(h) : (server_->bind_to_port(h, p) ? p : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + h + ":" + std::to_string(p));
  worker_ = std::make_unique<Worker>();
  worker_->thread = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void HttpServer::run(const std::string& host, int port) {
  const auto h = host.empty() ? default_bind_host() : host;
  const auto p = port < 0 ? default_port() : port;
  if (!server_->listen(h, p)) throw std::runtime_error("cannot bind " + h + ":" + std::to_string(p));
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (worker_ && worker_->thread.joinable()) worker_->thread.join();
  worker_.reset();
}

}  // namespace sir
