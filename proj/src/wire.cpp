#include "sir/wire.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sir::wire {

namespace {

Json ids_to_json(const std::vector<RowId>& ids) {
  Json out = Json::array();
  for (auto id : ids) out.push_back(id);
  return out;
}

std::vector<RowId> ids_from_json(const Json& j) {
  std::vector<RowId> out;
  for (const auto& v : j) out.push_back(v.get<RowId>());
  return out;
}

Json columns_to_json(const std::vector<ColumnIndex>& cols) {
  Json out = Json::array();
  for (auto c : cols) out.push_back(c);
  return out;
}

Json column_names(const std::vector<ColumnIndex>& cols, const TableDocument& table) {
  Json out = Json::array();
  for (auto c : cols) out.push_back(table.column(c).display_name);
  return out;
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw std::invalid_argument(std::string("missing field '") + name + "'");
  return j.at(name);
}

}  // namespace

Json cell_to_json(const CellValue& cell) {
  switch (cell.kind()) {
    case CellValue::Kind::Text:
      return cell.as_text();
    case CellValue::Kind::Number: {
      const double v = cell.as_number();
      if (std::trunc(v) == v && std::fabs(v) < 9.0e15) return static_cast<std::int64_t>(v);
      return v;
    }
    case CellValue::Kind::Empty:
      break;
  }
  return nullptr;
}

CellValue cell_from_json(const Json& j) {
  if (j.is_null()) return CellValue{};
  if (j.is_string()) return CellValue::text(j.get<std::string>());
  if (j.is_number()) return CellValue::number(j.get<double>());
  throw std::invalid_argument("cell must be a string, number or null");
}

Json result_to_json(const QueryResult& result, const TableDocument& table) {
  return std::visit(
      [&](const auto& r) -> Json {
        using T = std::decay_t<decltype(r)>;
        Json j;
        if constexpr (std::is_same_v<T, RowSetResult>) {
          j["kind"] = "row_set";
          j["columns"] = columns_to_json(r.columns);
          j["column_names"] = column_names(r.columns, table);
          Json rows = Json::array();
          for (const auto& cells : r.cells) {
            Json row = Json::array();
            for (const auto& c : cells) row.push_back(cell_to_json(c));
            rows.push_back(std::move(row));
          }
          j["rows"] = std::move(rows);
          j["provenance"] = ids_to_json(r.row_ids);
        } else if constexpr (std::is_same_v<T, CountResult>) {
          j["kind"] = "count";
          j["count"] = r.count;
          j["provenance"] = ids_to_json(r.rows);
        } else if constexpr (std::is_same_v<T, ValueResult>) {
          j["kind"] = "value";
          j["column"] = r.column;
          j["column_name"] = table.column(r.column).display_name;
          j["value"] = cell_to_json(r.value);
          j["count"] = r.count;
          j["provenance"] = ids_to_json(r.rows);
        } else {
          j["kind"] = "group_table";
          j["columns"] = columns_to_json(r.columns);
          j["column_names"] = column_names(r.columns, table);
          Json groups = Json::array();
          Json prov = Json::array();
          for (const auto& g : r.groups) {
            Json entry = Json::array();
            for (const auto& k : g.key) entry.push_back(cell_to_json(k));
            entry.push_back(g.count);
            groups.push_back(std::move(entry));
            prov.push_back(ids_to_json(g.rows));
          }
          j["group_table"] = std::move(groups);
          j["provenance"] = std::move(prov);
          j["excluded_rows"] = ids_to_json(r.excluded_rows);
        }
        return j;
      },
      result);
}

QueryResult result_from_json(const Json& j) {
  const auto kind = field(j, "kind").get<std::string>();
  if (kind == "row_set") {
    RowSetResult r;
    for (const auto& c : field(j, "columns")) r.columns.push_back(c.get<ColumnIndex>());
    r.row_ids = ids_from_json(field(j, "provenance"));
    for (const auto& row : field(j, "rows")) {
      std::vector<CellValue> cells;
      for (const auto& c : row) cells.push_back(cell_from_json(c));
      r.cells.push_back(std::move(cells));
    }
    if (r.cells.size() != r.row_ids.size()) throw std::invalid_argument("rows and provenance differ in length");
    return r;
  }
  if (kind == "count") {
    return CountResult{field(j, "count").get<std::size_t>(), ids_from_json(field(j, "provenance"))};
  }
  if (kind == "value") {
    return ValueResult{field(j, "column").get<ColumnIndex>(), cell_from_json(field(j, "value")),
                       field(j, "count").get<std::size_t>(), ids_from_json(field(j, "provenance"))};
  }
  if (kind == "group_table") {
    GroupTableResult r;
    for (const auto& c : field(j, "columns")) r.columns.push_back(c.get<ColumnIndex>());
    const auto& groups = field(j, "group_table");
    const auto& prov = field(j, "provenance");
    if (groups.size() != prov.size()) throw std::invalid_argument("group_table and provenance differ in length");
    for (std::size_t i = 0; i < groups.size(); ++i) {
      const auto& entry = groups[i];
      if (!entry.is_array() || entry.size() != r.columns.size() + 1) {
        throw std::invalid_argument("group entry must hold one key per column plus a count");
      }
      GroupEntry g;
      for (std::size_t k = 0; k < r.columns.size(); ++k) g.key.push_back(cell_from_json(entry[k]));
      g.count = entry.back().get<std::size_t>();
      g.rows = ids_from_json(prov[i]);
      r.groups.push_back(std::move(g));
    }
    r.excluded_rows = ids_from_json(field(j, "excluded_rows"));
    return r;
  }
  throw std::invalid_argument("unknown result kind '" + kind + "'");
}

Json clarification_to_json(const ClarificationRequest& request) {
  Json j;
  j["request_id"] = request.request_id;
  j["value"] = request.ambiguous_value;
  j["surface"] = request.surface;
  Json cands = Json::array();
  for (const auto& c : request.candidates) {
    cands.push_back(Json{{"column", c.column}, {"name", c.display_name}, {"occurrences", c.occurrences}});
  }
  j["candidates"] = std::move(cands);
  return j;
}

Json diagnostics_to_json(const std::vector<TokenDiagnostic>& tokens) {
  Json out = Json::array();
  for (const auto& t : tokens) out.push_back(Json{{"token", t.token}, {"begin", t.begin}, {"end", t.end}});
  return out;
}

Json table_schema_to_json(const TableDocument& table) {
  Json cols = Json::array();
  for (const auto& c : table.columns()) {
    cols.push_back(Json{{"index", c.index}, {"name", c.display_name}, {"key", c.norm_key}, {"kind", to_string(c.kind)}});
  }
  return Json{{"source_name", table.source_name()}, {"row_count", table.row_count()}, {"columns", std::move(cols)}};
}

Json rows_to_json(const TableDocument& table, const std::vector<RowId>& ids) {
  Json rows = Json::array();
  for (auto id : ids) {
    Json cells = Json::array();
    for (const auto& c : table.row(id)) cells.push_back(cell_to_json(c));
    rows.push_back(Json{{"id", id}, {"cells", std::move(cells)}});
  }
  return rows;
}

Json envelope(const Reply& reply, const TableDocument& table) {
  Json j;
  j["api_version"] = kApiVersion;
  if (reply.error) {
    const auto e = error_envelope(*reply.error);
    j["status"] = "error";
    j["payload"] = e.at("payload");
    return j;
  }
  if (const auto* parsed = std::get_if<Parsed>(&reply.outcome)) {
    j["status"] = "ok";
    Json payload;
    payload["ir"] = to_ir(parsed->intent, table);
    payload["result"] = reply.result ? result_to_json(*reply.result, table) : Json(nullptr);
    payload["ignored"] = diagnostics_to_json(parsed->ignored);
    j["payload"] = std::move(payload);
  } else if (const auto* clarify = std::get_if<NeedsClarification>(&reply.outcome)) {
    j["status"] = "clarify";
    j["payload"] = clarification_to_json(clarify->request);
  } else {
    const auto& nu = std::get<NotUnderstood>(reply.outcome);
    j["status"] = "not_understood";
    j["payload"] = Json{{"reason", nu.reason}, {"unmatched", diagnostics_to_json(nu.unmatched)}};
  }
  return j;
}

Json error_envelope(std::string_view code, std::string_view message) {
  Json j;
  j["api_version"] = kApiVersion;
  j["status"] = "error";
  j["payload"] = Json{{"code", code}, {"message", message}};
  return j;
}

Json error_envelope(const Error& error) {
  Json j = error_envelope(error.code(), error.what());
  if (const auto* te = dynamic_cast<const TableError*>(&error)) {
    if (te->row()) j["payload"]["row"] = *te->row();
    if (te->column()) j["payload"]["column"] = *te->column();
  }
  return j;
}

std::string to_body(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace) + "\n"; }

}  // namespace sir::wire
