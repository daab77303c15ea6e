#pragma once

#include <string>

#include <json.hpp>

#include "sir/engine.hpp"
#include "sir/error.hpp"
#include "sir/parser.hpp"
#include "sir/session.hpp"
#include "sir/table.hpp"

namespace sir::wire {

using Json = nlohmann::ordered_json;

inline constexpr const char* kApiVersion = "1.0.0";

// Text cells become strings, numbers become JSON numbers (integral values
// without a fraction), Empty becomes null.
Json cell_to_json(const CellValue& cell);
CellValue cell_from_json(const Json& j);

Json result_to_json(const QueryResult& result, const TableDocument& table);
// Inverse of result_to_json; display names are ignored. Throws
// std::invalid_argument on malformed input.
QueryResult result_from_json(const Json& j);

Json clarification_to_json(const ClarificationRequest& request);
Json diagnostics_to_json(const std::vector<TokenDiagnostic>& tokens);

Json table_schema_to_json(const TableDocument& table);
Json rows_to_json(const TableDocument& table, const std::vector<RowId>& ids);

// {"api_version", "status", "payload"} with status one of ok, clarify,
// not_understood, error.
Json envelope(const Reply& reply, const TableDocument& table);
Json error_envelope(const Error& error);
Json error_envelope(std::string_view code, std::string_view message);

// Compact serialization plus a trailing newline; every HTTP body and every
// CLI JSON line goes through here.
std::string to_body(const Json& j);

}  // namespace sir::wire
