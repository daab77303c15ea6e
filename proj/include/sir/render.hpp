#pragma once

#include <string>

#include "sir/engine.hpp"
#include "sir/parser.hpp"
#include "sir/table.hpp"

namespace sir {

// Plain-text rendering used by the CLI and REPL.
//   count        -> "3"
//   value        -> "Varied (2)"
//   row set      -> aligned table with a leading row-id column
//   group table  -> one line per group: key tuple, count
std::string render_result(const QueryResult& result, const TableDocument& table);

// Numbered column menu for a pending clarification.
std::string render_clarification(const ClarificationRequest& request);

std::string render_not_understood(const NotUnderstood& outcome);

}  // namespace sir
