#include "depsynt/spec.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "depsynt/error.hpp"

namespace depsynt {

FormulaPtr make_true() {
  static const FormulaPtr t = std::make_shared<const Formula>(Formula{FormulaKind::True, {}, nullptr, nullptr});
  return t;
}

FormulaPtr make_false() {
  static const FormulaPtr f = std::make_shared<const Formula>(Formula{FormulaKind::False, {}, nullptr, nullptr});
  return f;
}

FormulaPtr make_atom(std::string name) {
  return std::make_shared<const Formula>(Formula{FormulaKind::Atom, std::move(name), nullptr, nullptr});
}

FormulaPtr make_ref(std::string name, FormulaPtr body) {
  return std::make_shared<const Formula>(Formula{FormulaKind::Ref, std::move(name), std::move(body), nullptr});
}

FormulaPtr make_unary(FormulaKind kind, FormulaPtr operand) {
  return std::make_shared<const Formula>(Formula{kind, {}, std::move(operand), nullptr});
}

FormulaPtr make_binary(FormulaKind kind, FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<const Formula>(Formula{kind, {}, std::move(lhs), std::move(rhs)});
}

bool is_unary(FormulaKind kind) {
  return kind == FormulaKind::Not || kind == FormulaKind::Next || kind == FormulaKind::Finally ||
         kind == FormulaKind::Globally;
}

bool is_binary(FormulaKind kind) {
  return kind == FormulaKind::And || kind == FormulaKind::Or || kind == FormulaKind::Implies ||
         kind == FormulaKind::Iff || kind == FormulaKind::Until || kind == FormulaKind::Release;
}

bool is_propositional(const FormulaPtr& f) {
  std::unordered_map<const Formula*, bool> memo;
  std::function<bool(const Formula*)> rec = [&](const Formula* g) -> bool {
    if (auto it = memo.find(g); it != memo.end()) return it->second;
    bool result = true;
    switch (g->kind) {
      case FormulaKind::True:
      case FormulaKind::False:
      case FormulaKind::Atom:
        break;
      case FormulaKind::Next:
      case FormulaKind::Finally:
      case FormulaKind::Globally:
      case FormulaKind::Until:
      case FormulaKind::Release:
        result = false;
        break;
      case FormulaKind::Ref:
      case FormulaKind::Not:
        result = rec(g->lhs.get());
        break;
      default:
        result = rec(g->lhs.get()) && rec(g->rhs.get());
    }
    memo.emplace(g, result);
    return result;
  };
  return rec(f.get());
}

std::size_t formula_size(const FormulaPtr& f) {
  std::unordered_set<const Formula*> seen;
  std::vector<const Formula*> stack{f.get()};
  while (!stack.empty()) {
    const Formula* g = stack.back();
    stack.pop_back();
    if (!g || !seen.insert(g).second) continue;
    stack.push_back(g->lhs.get());
    stack.push_back(g->rhs.get());
  }
  return seen.size();
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case FormulaKind::True:
    case FormulaKind::False:
      return true;
    case FormulaKind::Atom:
    case FormulaKind::Ref:
      return a->name == b->name;
    default:
      return formula_equal(a->lhs, b->lhs) && formula_equal(a->rhs, b->rhs);
  }
}

namespace {

int precedence(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::Iff:
      return 1;
    case FormulaKind::Implies:
      return 2;
    case FormulaKind::Or:
      return 3;
    case FormulaKind::And:
      return 4;
    case FormulaKind::Until:
    case FormulaKind::Release:
      return 5;
    case FormulaKind::Not:
    case FormulaKind::Next:
    case FormulaKind::Finally:
    case FormulaKind::Globally:
      return 6;
    default:
      return 7;
  }
}

bool right_assoc(FormulaKind kind) {
  return kind == FormulaKind::Implies || kind == FormulaKind::Until || kind == FormulaKind::Release;
}

const char* op_text(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::Not: return "!";
    case FormulaKind::Next: return "X ";
    case FormulaKind::Finally: return "F ";
    case FormulaKind::Globally: return "G ";
    case FormulaKind::And: return " & ";
    case FormulaKind::Or: return " | ";
    case FormulaKind::Implies: return " -> ";
    case FormulaKind::Iff: return " <-> ";
    case FormulaKind::Until: return " U ";
    case FormulaKind::Release: return " R ";
    default: return "";
  }
}

void print(std::ostream& out, const Formula& f) {
  auto child = [&](const Formula& c, bool parens) {
    if (parens) out << '(';
    print(out, c);
    if (parens) out << ')';
  };
  switch (f.kind) {
    case FormulaKind::True:
      out << "true";
      return;
    case FormulaKind::False:
      out << "false";
      return;
    case FormulaKind::Atom:
    case FormulaKind::Ref:
      out << f.name;
      return;
    default:
      break;
  }
  const int p = precedence(f.kind);
  if (is_unary(f.kind)) {
    out << op_text(f.kind);
    child(*f.lhs, precedence(f.lhs->kind) < p);
    return;
  }
  const int pl = precedence(f.lhs->kind);
  const int pr = precedence(f.rhs->kind);
  child(*f.lhs, pl < p || (pl == p && right_assoc(f.kind)));
  out << op_text(f.kind);
  child(*f.rhs, pr < p || (pr == p && !right_assoc(f.kind)));
}

// ---------------------------------------------------------------------------
// Lexer / parser

enum class Tok { Ident, Bang, Amp, Bar, Arrow, DArrow, LParen, RParen, Comma, Semi, Equals, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> tokens;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const int l = line;
    const int cl = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '.'))
        ++j;
      tokens.push_back({Tok::Ident, std::string(text.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    if (text.substr(i, 3) == "<->") {
      tokens.push_back({Tok::DArrow, "<->", l, cl});
      advance(3);
      continue;
    }
    if (text.substr(i, 2) == "->") {
      tokens.push_back({Tok::Arrow, "->", l, cl});
      advance(2);
      continue;
    }
    Tok kind;
    switch (c) {
      case '!': kind = Tok::Bang; break;
      case '&': kind = Tok::Amp; break;
      case '|': kind = Tok::Bar; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      case ';': kind = Tok::Semi; break;
      case '=': kind = Tok::Equals; break;
      default:
        throw SpecError(std::string("unexpected character '") + c + "'", l, cl);
    }
    tokens.push_back({kind, std::string(1, c), l, cl});
    advance(1);
  }
  tokens.push_back({Tok::End, "end of input", line, col});
  return tokens;
}

bool is_reserved(const std::string& s) {
  static const std::set<std::string> reserved{"X",      "F",   "G",      "U",   "R",   "true",
                                              "false", "LTL", "INPUTS", "OUTPUTS", "DEFINE"};
  return reserved.contains(s);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(lex(text)) {}

  Spec parse() {
    Spec spec;
    expect_keyword("INPUTS");
    spec.inputs = name_list();
    expect_keyword("OUTPUTS");
    spec.outputs = name_list();
    for (const auto& in : spec.inputs) {
      if (!declared_.insert(in).second) throw SpecError("duplicate declaration of '" + in + "'", 0, 0);
      inputs_.insert(in);
    }
    for (const auto& out : spec.outputs) {
      if (inputs_.contains(out)) throw SpecError("'" + out + "' declared both as input and output", 0, 0);
      if (!declared_.insert(out).second) throw SpecError("duplicate declaration of '" + out + "'", 0, 0);
    }
    while (peek_keyword("DEFINE")) {
      next();
      const Token name = expect(Tok::Ident, "definition name");
      if (is_reserved(name.text)) throw SpecError("reserved word '" + name.text + "' used as a name", name.line, name.column);
      if (declared_.contains(name.text) || defs_.contains(name.text))
        throw SpecError("definition '" + name.text + "' shadows an existing name", name.line, name.column);
      expect(Tok::Equals, "'='");
      FormulaPtr body = formula();
      expect(Tok::Semi, "';'");
      defs_.emplace(name.text, body);
      spec.definitions.push_back({name.text, body});
    }
    expect_keyword("LTL");
    spec.formula = formula();
    expect(Tok::Semi, "';'");
    expect(Tok::End, "end of input");
    return spec;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  bool peek_keyword(std::string_view kw) const { return peek().kind == Tok::Ident && peek().text == kw; }

  [[noreturn]] void fail(const std::string& expected) const {
    throw SpecError("expected " + expected + ", found '" + peek().text + "'", peek().line, peek().column);
  }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail(what);
    return next();
  }

  void expect_keyword(std::string_view kw) {
    if (!peek_keyword(kw)) fail(std::string(kw));
    next();
  }

  std::vector<std::string> name_list() {
    std::vector<std::string> names;
    if (peek().kind == Tok::Semi) {
      next();
      return names;
    }
    while (true) {
      const Token& t = expect(Tok::Ident, "variable name");
      if (is_reserved(t.text)) throw SpecError("reserved word '" + t.text + "' used as a variable", t.line, t.column);
      names.push_back(t.text);
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      expect(Tok::Semi, "',' or ';'");
      return names;
    }
  }

  FormulaPtr formula() { return iff(); }

  FormulaPtr iff() {
    FormulaPtr lhs = implies();
    while (peek().kind == Tok::DArrow) {
      next();
      lhs = make_binary(FormulaKind::Iff, lhs, implies());
    }
    return lhs;
  }

  FormulaPtr implies() {
    FormulaPtr lhs = disjunction();
    if (peek().kind == Tok::Arrow) {
      next();
      return make_binary(FormulaKind::Implies, lhs, implies());
    }
    return lhs;
  }

  FormulaPtr disjunction() {
    FormulaPtr lhs = conjunction();
    while (peek().kind == Tok::Bar) {
      next();
      lhs = make_binary(FormulaKind::Or, lhs, conjunction());
    }
    return lhs;
  }

  FormulaPtr conjunction() {
    FormulaPtr lhs = until();
    while (peek().kind == Tok::Amp) {
      next();
      lhs = make_binary(FormulaKind::And, lhs, until());
    }
    return lhs;
  }

  FormulaPtr until() {
    FormulaPtr lhs = unary();
    if (peek_keyword("U")) {
      next();
      return make_binary(FormulaKind::Until, lhs, until());
    }
    if (peek_keyword("R")) {
      next();
      return make_binary(FormulaKind::Release, lhs, until());
    }
    return lhs;
  }

  FormulaPtr unary() {
    if (peek().kind == Tok::Bang) {
      next();
      return make_unary(FormulaKind::Not, unary());
    }
    if (peek_keyword("X")) {
      next();
      return make_unary(FormulaKind::Next, unary());
    }
    if (peek_keyword("F")) {
      next();
      return make_unary(FormulaKind::Finally, unary());
    }
    if (peek_keyword("G")) {
      next();
      return make_unary(FormulaKind::Globally, unary());
    }
    return primary();
  }

  FormulaPtr primary() {
    if (peek().kind == Tok::LParen) {
      next();
      FormulaPtr f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (peek().kind != Tok::Ident || (is_reserved(peek().text) && peek().text != "true" && peek().text != "false"))
      fail("formula");
    const Token& t = next();
    if (t.text == "true") return make_true();
    if (t.text == "false") return make_false();
    if (declared_.contains(t.text)) return make_atom(t.text);
    if (auto it = defs_.find(t.text); it != defs_.end()) return make_ref(t.text, it->second);
    throw SpecError("undeclared atom '" + t.text + "'", t.line, t.column);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::set<std::string> declared_;
  std::set<std::string> inputs_;
  std::map<std::string, FormulaPtr> defs_;
};

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

}  // namespace

std::string to_string(const FormulaPtr& f) {
  std::ostringstream out;
  print(out, *f);
  return out.str();
}

Spec parse_spec(std::string_view text) { return Parser(text).parse(); }

Spec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'", 0, 0);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_spec(buffer.str());
}

std::string to_string(const Spec& spec) {
  std::ostringstream out;
  out << "INPUTS " << join(spec.inputs) << ";\n";
  out << "OUTPUTS " << join(spec.outputs) << ";\n";
  for (const auto& def : spec.definitions) out << "DEFINE " << def.name << " = " << to_string(def.body) << ";\n";
  out << "LTL " << to_string(spec.formula) << ";\n";
  return out.str();
}

Spec negate(const Spec& spec) {
  Spec result = spec;
  result.formula = make_not(spec.formula);
  return result;
}

Spec gen_midbit_spec(int n) {
  if (n < 1 || n > 12) throw SpecError("midbit width must be in [1, 12], got " + std::to_string(n), 0, 0);
  Spec spec;
  std::vector<FormulaPtr> in(n), out(n + 1);
  for (int k = 0; k < n; ++k) {
    spec.inputs.push_back("i_" + std::to_string(k + 1));
    in[k] = make_atom(spec.inputs.back());
  }
  for (int k = 0; k <= n; ++k) {
    spec.outputs.push_back("o_" + std::to_string(k + 1));
    out[k] = make_atom(spec.outputs.back());
  }
  auto define = [&](std::string name, FormulaPtr body) {
    spec.definitions.push_back({name, body});
    return make_ref(std::move(name), std::move(body));
  };
  auto xor2 = [](const FormulaPtr& a, const FormulaPtr& b) { return make_not(make_iff(a, b)); };

  // Shift-and-add truncated to the low n bits: acc += i_row * (o << row).
  std::vector<FormulaPtr> acc(n);
  for (int c = 0; c < n; ++c) acc[c] = make_and(in[0], out[c]);
  for (int row = 1; row < n; ++row) {
    FormulaPtr carry;
    for (int c = row; c < n; ++c) {
      const FormulaPtr pp = make_and(in[row], out[c - row]);
      const std::string tag = std::to_string(row) + "_" + std::to_string(c);
      FormulaPtr sum;
      FormulaPtr next_carry;
      if (!carry) {
        sum = xor2(acc[c], pp);
        next_carry = make_and(acc[c], pp);
      } else {
        sum = xor2(xor2(acc[c], pp), carry);
        next_carry = make_or(make_and(acc[c], pp), make_and(carry, make_or(acc[c], pp)));
      }
      acc[c] = define("s" + tag, sum);
      if (c + 1 < n) carry = define("c" + tag, next_carry);
    }
  }
  spec.formula = make_globally(make_iff(out[n], acc[n - 1]));
  return spec;
}

}  // namespace depsynt
