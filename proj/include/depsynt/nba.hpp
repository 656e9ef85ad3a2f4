#pragma once

// Nondeterministic Büchi automata with BDD-labelled edges, LTL translation,
// trimming, HOA I/O and emptiness of a circuit/automaton product.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "depsynt/bdd.hpp"
#include "depsynt/circuit.hpp"
#include "depsynt/spec.hpp"

namespace depsynt {

using StateId = std::uint32_t;

struct Edge {
  StateId src;
  StateId dst;
  Bdd label;
};

class Nba {
 public:
  Nba(std::shared_ptr<BddManager> mgr, std::vector<VarId> inputs, std::vector<VarId> outputs);

  BddManager& manager() const { return *mgr_; }
  const std::shared_ptr<BddManager>& manager_ptr() const { return mgr_; }
  const std::vector<VarId>& inputs() const { return inputs_; }
  const std::vector<VarId>& outputs() const { return outputs_; }
  // inputs followed by outputs
  std::vector<VarId> variables() const;

  StateId add_state(bool accepting = false);
  void set_accepting(StateId s, bool accepting);
  void set_initial(StateId s);
  // Unsatisfiable labels are dropped; a second edge between the same pair of
  // states is merged into the first by disjunction.
  void add_edge(StateId src, StateId dst, Bdd label);

  std::size_t state_count() const { return accepting_.size(); }
  bool empty() const { return accepting_.empty(); }
  StateId initial() const { return initial_; }
  bool accepting(StateId s) const { return accepting_.at(s); }
  const std::vector<Edge>& edges() const { return edges_; }
  // Edge indices leaving / entering a state.
  const std::vector<std::size_t>& out_edges(StateId s) const { return out_.at(s); }
  const std::vector<std::size_t>& in_edges(StateId s) const { return in_.at(s); }
  std::optional<std::size_t> find_edge(StateId src, StateId dst) const;

  // Explicit letters: bit k of a letter is the value of variables()[k].
  std::size_t letter_bits() const { return inputs_.size() + outputs_.size(); }
  Assignment letter_assignment(std::uint64_t letter) const;
  bool edge_enabled(std::size_t edge, const Assignment& a) const { return mgr_->eval(edges_[edge].label, a); }

  std::string to_dot() const;

 private:
  std::shared_ptr<BddManager> mgr_;
  std::vector<VarId> inputs_;
  std::vector<VarId> outputs_;
  StateId initial_ = 0;
  std::vector<bool> accepting_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::map<std::pair<StateId, StateId>, std::size_t> edge_index_;
};

// Creates (or finds) a variable per input and output, inputs first.
std::pair<std::vector<VarId>, std::vector<VarId>> declare_variables(BddManager& mgr, const Spec& spec);

// BDD of a propositional formula over the spec variables.
Bdd formula_bdd(BddManager& mgr, const FormulaPtr& f);

struct TranslateOptions {
  std::size_t state_cap = 5000;
};

// Tableau expansion into a transition-based generalized Büchi automaton,
// counter degeneralization, then trim. Throws ResourceError past the cap.
Nba translate(const Spec& spec, std::shared_ptr<BddManager> mgr = nullptr, const TranslateOptions& options = {});

// Keeps the states that are reachable and can reach an accepting cycle.
// States are renumbered in breadth-first order from the initial state.
Nba trim(const Nba& a);

// True when two automata have the same states, flags and edges.
bool same_graph(const Nba& a, const Nba& b);

// HOA v1 with state-based `Inf(0)` acceptance. Without `controllable-AP`
// every atomic proposition is treated as an output.
Nba parse_hoa(std::string_view text, std::shared_ptr<BddManager> mgr = nullptr);
std::string emit_hoa(const Nba& a);

// True iff the product of the circuit with `a` has no accepting lasso. Ports
// are matched to the automaton's variables by name; automaton inputs must be
// circuit inputs and automaton outputs circuit outputs. Circuit outputs not
// mentioned by the automaton are ignored.
bool product_empty(const Aig& circuit, const Nba& a, std::size_t state_cap = 1'000'000);

}  // namespace depsynt
