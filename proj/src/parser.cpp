#include "gardner/parser.hpp"

#include <cctype>

namespace gardner {

GrammarConfig GrammarConfig::gardner() { return GrammarConfig{}; }

GrammarConfig GrammarConfig::frame() {
  GrammarConfig c;
  c.dependents = {"w", "v"};
  c.x_name = 'r';
  c.t_name = 's';
  c.functions.clear();
  return c;
}

GrammarConfig& GrammarConfig::with_function(const std::string& name, unsigned args) {
  functions[name] = args;
  return *this;
}

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;    // identifier head or number literal
  std::string suffix;  // derivative letters after '_'
  bool has_suffix = false;
  int line = 1;
  int column = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Number: return "number '" + t.text + "'";
    case Tok::Ident: return "identifier '" + t.text + (t.has_suffix ? "_" + t.suffix : "") + "'";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() &&
                                                        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      t.kind = Tok::Number;
      while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
        t.text += take();
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t save = pos_;
        int scol = col_;
        std::string ex(1, take());
        if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ex += take();
        if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ex += take();
          t.text += ex;
        } else {
          pos_ = save;
          col_ = scol;
        }
      }
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      t.kind = Tok::Ident;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) t.text += take();
      if (pos_ < src_.size() && src_[pos_] == '_') {
        take();
        t.has_suffix = true;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) t.suffix += take();
        if (t.suffix.empty())
          throw Error(ErrorCode::BadDeriv, "empty derivative suffix after '" + t.text + "_' at line " +
                                               std::to_string(t.line) + ", column " + std::to_string(t.column));
      }
      return t;
    }
    take();
    t.text = std::string(1, c);
    switch (c) {
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      case '^': t.kind = Tok::Caret; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      default:
        throw SyntaxError(t.line, t.column, {"number", "identifier", "(", "-"}, "character '" + t.text + "'");
    }
    return t;
  }

 private:
  char take() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) take();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

Rational parse_number(const std::string& text) {
  std::string mant = text;
  long exp10 = 0;
  auto e = text.find_first_of("eE");
  if (e != std::string::npos) {
    mant = text.substr(0, e);
    exp10 = std::stol(text.substr(e + 1));
  }
  auto dot = mant.find('.');
  std::string digits = mant;
  if (dot != std::string::npos) {
    if (mant.find('.', dot + 1) != std::string::npos) throw Error(ErrorCode::Syntax, "malformed number " + text);
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  }
  if (digits.empty()) digits = "0";
  mpz_class n(digits, 10);
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  Rational r = exp10 < 0 ? Rational(n, p) : Rational(n * p);
  r.canonicalize();
  return r;
}

class Parser {
 public:
  Parser(std::string_view src, const GrammarConfig& cfg) : lex_(src), cfg_(cfg) { advance(); }

  Expr parse_all() {
    Expr e = expr();
    if (cur_.kind != Tok::End) fail({"+", "-", "*", "/", "^", "end of input"});
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    throw SyntaxError(cur_.line, cur_.column, std::move(expected), describe(cur_));
  }

  void expect(Tok k, const std::string& what) {
    if (cur_.kind != k) fail({what});
    advance();
  }

  Expr expr() {
    Expr e = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      bool minus = cur_.kind == Tok::Minus;
      advance();
      Expr r = term();
      e = minus ? e - r : e + r;
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      bool div = cur_.kind == Tok::Slash;
      advance();
      Expr r = unary();
      e = div ? e / r : e * r;
    }
    return e;
  }

  Expr unary() {
    if (cur_.kind == Tok::Minus) {
      advance();
      return -unary();
    }
    if (cur_.kind == Tok::Plus) {
      advance();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr b = primary();
    if (cur_.kind == Tok::Caret) {
      advance();
      Expr ex = unary();
      return pow(b, ex);
    }
    return b;
  }

  Expr call(const std::string& name) {
    expect(Tok::LParen, "(");
    Expr arg = expr();
    expect(Tok::RParen, ")");
    if (name == "exp") return Expr::exp(arg);
    if (name == "sin") return Expr::sin(arg);
    if (name == "cos") return Expr::cos(arg);
    return Expr::antideriv(arg);
  }

  Expr primary() {
    if (cur_.kind == Tok::Number) {
      Rational r = parse_number(cur_.text);
      advance();
      return Expr(r);
    }
    if (cur_.kind == Tok::LParen) {
      advance();
      Expr e = expr();
      expect(Tok::RParen, ")");
      return e;
    }
    if (cur_.kind == Tok::Ident) {
      Token id = cur_;
      advance();
      if (id.text == "exp" || id.text == "AD" || id.text == "sin" || id.text == "cos") {
        if (id.has_suffix) throw Error(ErrorCode::BadDeriv, "derivative suffix on " + id.text);
        return call(id.text);
      }
      return identifier(id);
    }
    fail({"number", "identifier", "(", "-"});
  }

  [[noreturn]] void bad_suffix(const Token& id, const std::string& why) {
    throw Error(ErrorCode::BadDeriv, "'" + id.text + "_" + id.suffix + "' at line " + std::to_string(id.line) +
                                         ", column " + std::to_string(id.column) + ": " + why);
  }

  Expr identifier(const Token& id) {
    for (std::size_t d = 0; d < cfg_.dependents.size(); ++d) {
      if (cfg_.dependents[d] != id.text) continue;
      JetVar j{static_cast<int>(d), 0, 0};
      for (char c : id.suffix) {
        if (c == cfg_.x_name) {
          ++j.x_order;
        } else if (c == cfg_.t_name) {
          ++j.t_order;
        } else {
          bad_suffix(id, std::string("letter '") + c + "' is not an independent variable");
        }
      }
      return Expr::jet(j);
    }
    if (id.text.size() == 1 && (id.text[0] == cfg_.x_name || id.text[0] == cfg_.t_name)) {
      if (id.has_suffix) bad_suffix(id, "independent variables carry no derivatives");
      return Expr::var(id.text[0] == cfg_.x_name ? Indep::X : Indep::T);
    }
    auto fit = cfg_.functions.find(id.text);
    if (fit != cfg_.functions.end()) {
      FuncSpec f{id.text, fit->second};
      char uname = cfg_.dependents.empty() || cfg_.dependents[0].size() != 1 ? 'u' : cfg_.dependents[0][0];
      for (char c : id.suffix) {
        if (c == cfg_.x_name && (f.args & kArgX)) {
          ++f.dx;
        } else if (c == cfg_.t_name && (f.args & kArgT)) {
          ++f.dt;
        } else if (c == uname && (f.args & kArgU)) {
          ++f.du;
        } else {
          bad_suffix(id, std::string("function does not depend on '") + c + "'");
        }
      }
      return Expr::func(f);
    }
    if (id.has_suffix) bad_suffix(id, "parameters carry no derivatives");
    return Expr::param(id.text);
  }

  Lexer lex_;
  const GrammarConfig& cfg_;
  Token cur_;
};

std::string rational_text(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

class Renderer {
 public:
  explicit Renderer(const GrammarConfig& cfg) : cfg_(cfg) {}

  std::string expr(const Expr& e) {
    if (e.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : e.terms()) {
      bool neg = t.coef < 0;
      std::string body = term(t, abs(t.coef));
      if (first) {
        out += neg ? "-" + body : body;
      } else {
        out += neg ? " - " : " + ";
        out += body;
      }
      first = false;
    }
    return out;
  }

 private:
  std::string term(const Term& t, const Rational& c) {
    if (t.factors.empty()) return rational_text(c);
    std::string out;
    if (c != 1) out = rational_text(c);
    for (const auto& f : t.factors) {
      if (!out.empty()) out += "*";
      out += factor(f);
    }
    return out;
  }

  std::string factor(const Factor& f) {
    if (f.base->kind == AtomKind::Euler) return "exp(" + expr(f.exponent) + ")";
    std::string b = base(*f.base);
    if (f.exponent.is_one()) return b;
    if (f.exponent.is_positive_integer()) return b + "^" + rational_text(*f.exponent.as_rational());
    return b + "^(" + expr(f.exponent) + ")";
  }

  std::string suffix(int x, int t, int u) {
    std::string s;
    s.append(static_cast<std::size_t>(x), cfg_.x_name);
    s.append(static_cast<std::size_t>(t), cfg_.t_name);
    char uname = cfg_.dependents.empty() || cfg_.dependents[0].size() != 1 ? 'u' : cfg_.dependents[0][0];
    s.append(static_cast<std::size_t>(u), uname);
    return s.empty() ? s : "_" + s;
  }

  std::string base(const Atom& a) {
    switch (a.kind) {
      case AtomKind::Number:
        return a.number.get_den() == 1 ? rational_text(a.number) : "(" + rational_text(a.number) + ")";
      case AtomKind::Param: return a.name;
      case AtomKind::Var: return std::string(1, a.var == Indep::X ? cfg_.x_name : cfg_.t_name);
      case AtomKind::Jet: {
        std::string name = static_cast<std::size_t>(a.jet.dep) < cfg_.dependents.size()
                               ? cfg_.dependents[static_cast<std::size_t>(a.jet.dep)]
                               : "u" + std::to_string(a.jet.dep);
        return name + suffix(a.jet.x_order, a.jet.t_order, 0);
      }
      case AtomKind::Func: return a.func.name + suffix(a.func.dx, a.func.dt, a.func.du);
      case AtomKind::AntiDeriv: return "AD(" + expr(a.inner) + ")";
      case AtomKind::Elementary: return std::string(a.fn == ElementaryFn::Sin ? "sin(" : "cos(") + expr(a.inner) + ")";
      case AtomKind::Sum: return "(" + expr(a.inner) + ")";
      case AtomKind::Euler: return "exp(1)";
    }
    return "?";
  }

  const GrammarConfig& cfg_;
};

}  // namespace

Expr parse(std::string_view src, const GrammarConfig& config) {
  bool blank = true;
  for (char c : src) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) throw SyntaxError(1, 1, {"number", "identifier", "(", "-"}, "end of input");
  Parser p(src, config);
  return p.parse_all();
}

std::string render(const Expr& e, const GrammarConfig& config) {
  Renderer r(config);
  return r.expr(e);
}

std::vector<std::string> split_list(std::string_view src, char sep) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    std::size_t b = cur.find_first_not_of(" \t\n");
    std::size_t e = cur.find_last_not_of(" \t\n");
    out.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char c : src) {
    if (c == sep) {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

}  // namespace gardner
