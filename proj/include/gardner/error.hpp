#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gardner {

enum class ErrorCode {
  Jet,
  Cycle,
  Unbound,
  Domain,
  Syntax,
  BadDeriv,
  Order,
  NotExact,
  Residue,
  Param,
  NoMatch,
  NonPoly,
  NotSelfAdjoint,
  NotAssociated,
  ExplicitS,
  Blowup,
  Dt,
  Input,
};

std::string_view code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }
  // message without the code prefix
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::vector<std::string> expected, const std::string& found);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  int line_;
  int column_;
  std::vector<std::string> expected_;
};

}  // namespace gardner
