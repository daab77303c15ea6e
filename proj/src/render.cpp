#include "sir/render.hpp"

#include <algorithm>
#include <sstream>

namespace sir {

namespace {

std::string rows_label(std::size_t n) { return std::to_string(n) + (n == 1 ? " row" : " rows"); }

// Display width in code points; good enough for aligned terminal output.
std::size_t width(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::string aligned(const std::vector<std::vector<std::string>>& grid) {
  std::vector<std::size_t> widths;
  for (const auto& row : grid) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], width(row[i]));
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    std::string line;
    for (std::size_t i = 0; i < grid[r].size(); ++i) {
      if (i) line += "  ";
      line += grid[r][i];
      if (i + 1 < grid[r].size()) line.append(widths[i] - width(grid[r][i]), ' ');
    }
    out << line << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < widths.size(); ++i) total += widths[i] + (i ? 2 : 0);
      out << std::string(total, '-') << '\n';
    }
  }
  return out.str();
}

}  // namespace

std::string render_result(const QueryResult& result, const TableDocument& table) {
  return std::visit(
      [&](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CountResult>) {
          return std::to_string(r.count) + "\n";
        } else if constexpr (std::is_same_v<T, ValueResult>) {
          return r.value.to_string() + " (" + std::to_string(r.count) + ")\n";
        } else if constexpr (std::is_same_v<T, RowSetResult>) {
          std::vector<std::vector<std::string>> grid;
          std::vector<std::string> header{"row"};
          for (auto c : r.columns) header.push_back(table.column(c).display_name);
          grid.push_back(std::move(header));
          for (std::size_t i = 0; i < r.row_ids.size(); ++i) {
            std::vector<std::string> line{std::to_string(r.row_ids[i])};
            for (const auto& cell : r.cells[i]) line.push_back(cell.to_string());
            grid.push_back(std::move(line));
          }
          return aligned(grid) + "(" + rows_label(r.row_ids.size()) + ")\n";
        } else {
          std::vector<std::vector<std::string>> grid;
          std::string key_header;
          for (auto c : r.columns) {
            if (!key_header.empty()) key_header += ", ";
            key_header += table.column(c).display_name;
          }
          grid.push_back({key_header, "count"});
          for (const auto& g : r.groups) {
            std::string key;
            for (const auto& k : g.key) {
              if (!key.empty()) key += ", ";
              key += k.to_string();
            }
            grid.push_back({key, std::to_string(g.count)});
          }
          std::string out = aligned(grid);
          if (!r.excluded_rows.empty()) {
            out += "(" + std::to_string(r.excluded_rows.size()) + " rows with a blank group value left out)\n";
          }
          return out;
        }
      },
      result);
}

std::string render_clarification(const ClarificationRequest& request) {
  std::ostringstream out;
  out << "\"" << request.surface << "\" appears in more than one column. Which one did you mean?\n";
  for (std::size_t i = 0; i < request.candidates.size(); ++i) {
    const auto& c = request.candidates[i];
    out << "  " << (i + 1) << ") " << c.display_name << " (" << rows_label(c.occurrences) << ")\n";
  }
  return out.str();
}

std::string render_not_understood(const NotUnderstood& outcome) {
  std::string out = "Sorry, I did not understand that: " + outcome.reason + ".";
  if (!outcome.unmatched.empty()) {
    out += " Unrecognised:";
    for (const auto& t : outcome.unmatched) out += " '" + t.token + "'";
  }
  return out + "\n";
}

}  // namespace sir
