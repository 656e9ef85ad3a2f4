#include <cctype>
#include <set>
#include <sstream>

#include "depsynt/error.hpp"
#include "depsynt/nba.hpp"

namespace depsynt {
namespace {

enum class Tok { Header, Ident, Int, String, Sym, Body, End, Eof };

struct Token {
  Tok kind;
  std::string text;
  int line;
};

std::vector<Token> lex_hoa(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      const auto end = text.find("*/", i + 2);
      if (end == std::string_view::npos) throw HoaError("line " + std::to_string(line) + ": unterminated comment");
      for (std::size_t k = i; k < end; ++k)
        if (text[k] == '\n') ++line;
      i = end + 2;
      continue;
    }
    if (c == '"') {
      std::string s;
      ++i;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        if (text[i] == '\n') ++line;
        s += text[i++];
      }
      if (i >= text.size()) throw HoaError("line " + std::to_string(line) + ": unterminated string");
      ++i;
      out.push_back({Tok::String, s, line});
      continue;
    }
    if (text.substr(i, 8) == "--BODY--") {
      out.push_back({Tok::Body, "--BODY--", line});
      i += 8;
      continue;
    }
    if (text.substr(i, 7) == "--END--") {
      out.push_back({Tok::End, "--END--", line});
      i += 7;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::Int, std::string(text.substr(i, j - i)), line});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '@') {
      std::size_t j = i + 1;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '-'))
        ++j;
      if (j < text.size() && text[j] == ':') {
        out.push_back({Tok::Header, std::string(text.substr(i, j - i)), line});
        i = j + 1;
      } else {
        out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), line});
        i = j;
      }
      continue;
    }
    if (std::string_view("[]{}()!&|").find(c) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, c), line});
      ++i;
      continue;
    }
    throw HoaError("line " + std::to_string(line) + ": unexpected character '" + std::string(1, c) + "'");
  }
  out.push_back({Tok::Eof, "end of input", line});
  return out;
}

class HoaParser {
 public:
  HoaParser(std::string_view text, std::shared_ptr<BddManager> mgr) : toks_(lex_hoa(text)), mgr_(std::move(mgr)) {}

  Nba parse() {
    header();
    // Inputs first, then outputs, each in AP order.
    std::vector<VarId> ins, outs;
    std::vector<VarId> ap_vars(aps_.size());
    auto get = [&](const std::string& name) {
      if (auto v = mgr_->find_var(name)) return *v;
      return mgr_->new_var(name);
    };
    for (std::size_t k = 0; k < aps_.size(); ++k)
      if (!controllable_.contains(k)) ins.push_back(ap_vars[k] = get(aps_[k]));
    for (std::size_t k = 0; k < aps_.size(); ++k)
      if (controllable_.contains(k)) outs.push_back(ap_vars[k] = get(aps_[k]));
    ap_vars_ = ap_vars;

    Nba nba(mgr_, ins, outs);
    for (std::size_t s = 0; s < states_; ++s) nba.add_state(all_accepting_);
    if (start_) nba.set_initial(*start_);
    body(nba);
    return nba;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw HoaError("line " + std::to_string(peek().line) + ": " + msg);
  }
  std::size_t integer(const char* what) {
    if (peek().kind != Tok::Int) fail(std::string("expected ") + what);
    return std::stoull(next().text);
  }
  void expect_sym(const char* s) {
    if (peek().kind != Tok::Sym || peek().text != s) fail(std::string("expected '") + s + "'");
    next();
  }
  bool at_sym(const char* s) const { return peek().kind == Tok::Sym && peek().text == s; }

  void header() {
    if (peek().kind != Tok::Header || peek().text != "HOA") fail("missing 'HOA:' header");
    next();
    if (peek().kind != Tok::Ident || peek().text != "v1") fail("unsupported HOA version");
    next();
    bool saw_states = false, saw_ap = false, saw_acc = false;
    while (peek().kind == Tok::Header) {
      const std::string name = next().text;
      if (name == "States") {
        states_ = integer("state count");
        saw_states = true;
      } else if (name == "Start") {
        if (start_) fail("multiple initial states are not supported");
        start_ = static_cast<StateId>(integer("initial state"));
        if (at_sym("&")) fail("conjunctive initial states are not supported");
      } else if (name == "AP") {
        const auto n = integer("AP count");
        for (std::size_t k = 0; k < n; ++k) {
          if (peek().kind != Tok::String) fail("expected quoted AP name");
          aps_.push_back(next().text);
        }
        saw_ap = true;
      } else if (name == "Acceptance") {
        const auto sets = integer("acceptance set count");
        if (sets == 0 && peek().kind == Tok::Ident && peek().text == "t") {
          next();
          all_accepting_ = true;
        } else if (sets == 1 && peek().kind == Tok::Ident && peek().text == "Inf") {
          next();
          expect_sym("(");
          if (integer("acceptance set") != 0) fail("unsupported acceptance condition");
          expect_sym(")");
          if (peek().kind == Tok::Sym) fail("unsupported acceptance condition");
        } else {
          fail("unsupported acceptance condition; only 'Inf(0)' is accepted");
        }
        saw_acc = true;
      } else if (name == "controllable-AP") {
        while (peek().kind == Tok::Int) controllable_.insert(integer("AP index"));
        has_controllable_ = true;
      } else {
        // acc-name, name, tool, properties and unknown headers are skipped.
        while (peek().kind != Tok::Header && peek().kind != Tok::Body && peek().kind != Tok::Eof) next();
      }
    }
    if (peek().kind != Tok::Body) fail("expected '--BODY--'");
    next();
    if (!saw_states) fail("missing 'States:' header");
    if (!saw_ap) fail("missing 'AP:' header");
    if (!saw_acc) fail("missing 'Acceptance:' header");
    if (!start_ && states_ > 0) fail("missing 'Start:' header");
    if (start_ && *start_ >= states_) fail("initial state out of range");
    for (const auto k : controllable_)
      if (k >= aps_.size()) fail("controllable AP index out of range");
    if (!has_controllable_)
      for (std::size_t k = 0; k < aps_.size(); ++k) controllable_.insert(k);
  }

  Bdd label_or() {
    Bdd r = label_and();
    while (at_sym("|")) {
      next();
      r |= label_and();
    }
    return r;
  }
  Bdd label_and() {
    Bdd r = label_not();
    while (at_sym("&")) {
      next();
      r &= label_not();
    }
    return r;
  }
  Bdd label_not() {
    if (at_sym("!")) {
      next();
      return !label_not();
    }
    if (at_sym("(")) {
      next();
      Bdd r = label_or();
      expect_sym(")");
      return r;
    }
    if (peek().kind == Tok::Ident && peek().text == "t") {
      next();
      return mgr_->bdd_true();
    }
    if (peek().kind == Tok::Ident && peek().text == "f") {
      next();
      return mgr_->bdd_false();
    }
    const auto ap = integer("AP index in label");
    if (ap >= ap_vars_.size()) fail("AP index out of range in label");
    return mgr_->var(ap_vars_[ap]);
  }

  void body(Nba& nba) {
    std::set<std::size_t> declared;
    while (peek().kind == Tok::Header && peek().text == "State") {
      next();
      if (at_sym("[")) fail("state labels are not supported");
      const auto s = integer("state number");
      if (s >= states_) fail("state out of range");
      if (!declared.insert(s).second) fail("state declared twice");
      if (peek().kind == Tok::String) next();
      if (at_sym("{")) {
        next();
        while (peek().kind == Tok::Int) {
          if (integer("acceptance set") != 0) fail("acceptance set out of range");
          nba.set_accepting(static_cast<StateId>(s), true);
        }
        expect_sym("}");
      }
      while (at_sym("[") || peek().kind == Tok::Int) {
        if (!at_sym("[")) fail("implicit edge labels are not supported");
        next();
        const Bdd label = label_or();
        expect_sym("]");
        const auto d = integer("destination state");
        if (d >= states_) fail("destination out of range");
        if (at_sym("{")) fail("transition-based acceptance is not supported");
        nba.add_edge(static_cast<StateId>(s), static_cast<StateId>(d), label);
      }
    }
    if (peek().kind != Tok::End) fail("expected '--END--'");
    next();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::shared_ptr<BddManager> mgr_;
  std::size_t states_ = 0;
  std::optional<StateId> start_;
  std::vector<std::string> aps_;
  std::vector<VarId> ap_vars_;
  std::set<std::size_t> controllable_;
  bool has_controllable_ = false;
  bool all_accepting_ = false;
};

}  // namespace

Nba parse_hoa(std::string_view text, std::shared_ptr<BddManager> mgr) {
  if (!mgr) mgr = std::make_shared<BddManager>();
  return HoaParser(text, std::move(mgr)).parse();
}

std::string emit_hoa(const Nba& a) {
  const auto vars = a.variables();
  auto& mgr = a.manager();
  std::map<VarId, std::size_t> ap_index;
  for (std::size_t k = 0; k < vars.size(); ++k) ap_index[vars[k]] = k;

  std::ostringstream out;
  out << "HOA: v1\n";
  out << "States: " << a.state_count() << "\n";
  if (!a.empty()) out << "Start: " << a.initial() << "\n";
  out << "AP: " << vars.size();
  for (const auto v : vars) out << " \"" << mgr.var_name(v) << "\"";
  out << "\n";
  out << "acc-name: Buchi\nAcceptance: 1 Inf(0)\n";
  out << "controllable-AP:";
  for (std::size_t k = a.inputs().size(); k < vars.size(); ++k) out << ' ' << k;
  out << "\n";
  out << "properties: trans-labels explicit-labels state-acc\n";
  out << "--BODY--\n";
  for (StateId s = 0; s < a.state_count(); ++s) {
    out << "State: " << s << (a.accepting(s) ? " {0}" : "") << "\n";
    for (const auto e : a.out_edges(s)) {
      const auto& edge = a.edges()[e];
      std::string label;
      for (const auto& cube : mgr.cubes(edge.label)) {
        std::string term;
        for (const auto& lit : cube) {
          auto it = ap_index.find(lit.var);
          if (it == ap_index.end()) throw HoaError("edge label mentions a variable outside the alphabet");
          if (!term.empty()) term += "&";
          term += (lit.value ? "" : "!") + std::to_string(it->second);
        }
        if (term.empty()) term = "t";
        if (!label.empty()) label += " | ";
        label += term;
      }
      out << "[" << label << "] " << edge.dst << "\n";
    }
  }
  out << "--END--\n";
  return out.str();
}

}  // namespace depsynt
