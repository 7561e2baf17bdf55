#include "gardner/error.hpp"

namespace gardner {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Jet: return "E_JET";
    case ErrorCode::Cycle: return "E_CYCLE";
    case ErrorCode::Unbound: return "E_UNBOUND";
    case ErrorCode::Domain: return "E_DOMAIN";
    case ErrorCode::Syntax: return "E_SYNTAX";
    case ErrorCode::BadDeriv: return "E_BADDERIV";
    case ErrorCode::Order: return "E_ORDER";
    case ErrorCode::NotExact: return "E_NOTEXACT";
    case ErrorCode::Residue: return "E_RESIDUE";
    case ErrorCode::Param: return "E_PARAM";
    case ErrorCode::NoMatch: return "E_NOMATCH";
    case ErrorCode::NonPoly: return "E_NONPOLY";
    case ErrorCode::NotSelfAdjoint: return "E_NOTSELFADJ";
    case ErrorCode::NotAssociated: return "E_NOTASSOC";
    case ErrorCode::ExplicitS: return "E_EXPLICIT_S";
    case ErrorCode::Blowup: return "E_BLOWUP";
    case ErrorCode::Dt: return "E_DT";
    case ErrorCode::Input: return "E_INPUT";
  }
  return "E_UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(code_name(code)) + ": " + message), code_(code), detail_(message) {}

static std::string syntax_message(int line, int column, const std::vector<std::string>& expected,
                                  const std::string& found) {
  std::string msg = "line " + std::to_string(line) + ", column " + std::to_string(column) + ": found " + found +
                    ", expected one of {";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) msg += ", ";
    msg += expected[i];
  }
  msg += "}";
  return msg;
}

SyntaxError::SyntaxError(int line, int column, std::vector<std::string> expected, const std::string& found)
    : Error(ErrorCode::Syntax, syntax_message(line, column, expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

}  // namespace gardner
