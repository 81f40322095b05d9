#pragma once

#include "tracebound/program.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace tb {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Program parse_program(std::string_view text);
BExpr parse_bexpr(std::string_view text);
Expr parse_expr(std::string_view text);

/// pre <bexpr>; prog { ... } post <bexpr>; [bound <decimal>;]
VerificationTask parse_task(std::string_view text);

/// Reads and parses a task file; throws std::runtime_error if unreadable.
VerificationTask load_task(const std::string& path);

}  // namespace tb
