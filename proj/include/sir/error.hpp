#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace sir {

// Base for every error the library reports. `code()` is a stable identifier
// that surfaces unchanged on the wire and in CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class TableError : public Error {
 public:
  TableError(std::string code, const std::string& message,
             std::optional<std::size_t> row = std::nullopt,
             std::optional<std::string> column = std::nullopt)
      : Error(std::move(code), message), row_(row), column_(std::move(column)) {}

  // Data-row ordinal (0-based, header excluded) when the error concerns a row.
  const std::optional<std::size_t>& row() const noexcept { return row_; }
  const std::optional<std::string>& column() const noexcept { return column_; }

 private:
  std::optional<std::size_t> row_;
  std::optional<std::string> column_;
};

class LexiconError : public Error {
 public:
  using Error::Error;
};

class QueryError : public Error {
 public:
  using Error::Error;
};

class SessionError : public Error {
 public:
  using Error::Error;
};

class CorpusError : public Error {
 public:
  using Error::Error;
};

}  // namespace sir
