#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gardner/expr.hpp"

namespace gardner {

// Variable naming for the expression grammar. Independent variables are
// single letters so that derivative suffixes (u_xxt) stay unambiguous.
struct GrammarConfig {
  std::vector<std::string> dependents{"u", "v"};
  char x_name = 'x';
  char t_name = 't';
  // identifiers that denote functions, with their argument sets
  std::map<std::string, unsigned> functions{{"A", kArgT}, {"B", kArgT}, {"C", kArgT}, {"Q", kArgT}};

  static GrammarConfig gardner();
  // reduction frame: w(r), with s playing the role of t
  static GrammarConfig frame();
  GrammarConfig& with_function(const std::string& name, unsigned args = kArgT);
};

Expr parse(std::string_view src, const GrammarConfig& config = GrammarConfig::gardner());
std::string render(const Expr& e, const GrammarConfig& config = GrammarConfig::gardner());

// "a;b;c" -> {"a","b","c"} with surrounding blanks trimmed
std::vector<std::string> split_list(std::string_view src, char sep = ';');

}  // namespace gardner
