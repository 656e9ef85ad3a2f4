#pragma once

// LTL specifications with an input/output partition.
//
// Text format:
//
//   # comment
//   INPUTS a, b;
//   OUTPUTS o;
//   DEFINE ready = a & !b;      # optional, any number
//   LTL G (ready -> X o);
//
// Operators: ! & | -> <-> X U R F G, constants true/false. Precedence from
// tightest: unary, U/R (right-assoc), &, |, -> (right-assoc), <->.
// A DEFINE introduces a named propositional or temporal macro that later
// definitions and the LTL formula may reference; it is kept as a shared
// subtree, so generated specs with deep sharing stay linear in size.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace depsynt {

enum class FormulaKind {
  True,
  False,
  Atom,
  Ref,  // reference to a DEFINE; `lhs` is the definition body
  Not,
  Next,
  Finally,
  Globally,
  And,
  Or,
  Implies,
  Iff,
  Until,
  Release,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaKind kind;
  std::string name;  // Atom / Ref
  FormulaPtr lhs;    // operand of unary operators, body of Ref
  FormulaPtr rhs;
};

FormulaPtr make_true();
FormulaPtr make_false();
FormulaPtr make_atom(std::string name);
FormulaPtr make_ref(std::string name, FormulaPtr body);
FormulaPtr make_unary(FormulaKind kind, FormulaPtr operand);
FormulaPtr make_binary(FormulaKind kind, FormulaPtr lhs, FormulaPtr rhs);

inline FormulaPtr make_not(FormulaPtr f) { return make_unary(FormulaKind::Not, std::move(f)); }
inline FormulaPtr make_and(FormulaPtr a, FormulaPtr b) { return make_binary(FormulaKind::And, std::move(a), std::move(b)); }
inline FormulaPtr make_or(FormulaPtr a, FormulaPtr b) { return make_binary(FormulaKind::Or, std::move(a), std::move(b)); }
inline FormulaPtr make_iff(FormulaPtr a, FormulaPtr b) { return make_binary(FormulaKind::Iff, std::move(a), std::move(b)); }
inline FormulaPtr make_globally(FormulaPtr f) { return make_unary(FormulaKind::Globally, std::move(f)); }

bool is_unary(FormulaKind kind);
bool is_binary(FormulaKind kind);
// True when no temporal operator occurs (references are followed).
bool is_propositional(const FormulaPtr& f);

// Number of distinct subformulas (shared subtrees count once).
std::size_t formula_size(const FormulaPtr& f);
// Structural equality; references compare by name.
bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

std::string to_string(const FormulaPtr& f);

struct Definition {
  std::string name;
  FormulaPtr body;
};

struct Spec {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Definition> definitions;
  FormulaPtr formula;
};

// Throws SpecError on syntax errors, undeclared atoms and I/O overlap.
Spec parse_spec(std::string_view text);
Spec load_spec(const std::string& path);
std::string to_string(const Spec& spec);

// Same partition and definitions, formula replaced by its negation.
Spec negate(const Spec& spec);

// G (o_{n+1} <-> bit n-1 of (i_n..i_1) * (o_n..o_1)), i_1 and o_1 being the
// least significant bits. 1 <= n <= 12.
Spec gen_midbit_spec(int n);

}  // namespace depsynt
