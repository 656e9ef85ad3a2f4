#pragma once

// Explicit reference implementations used to cross-check the symbolic code.
// Letters are bit vectors: bit k is the value of the k-th named variable.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "depsynt/circuit.hpp"
#include "depsynt/dep_synth.hpp"
#include "depsynt/dependency.hpp"
#include "depsynt/nba.hpp"
#include "depsynt/nondep_synth.hpp"
#include "depsynt/spec.hpp"

namespace oracle {

using depsynt::Nba;
using depsynt::StateId;
using depsynt::VarId;
using Word = std::vector<std::uint64_t>;

// Lasso semantics of LTL, computed by fixpoints over the positions.
bool ltl_holds(const depsynt::FormulaPtr& f, const std::vector<std::string>& names, const Word& stem,
               const Word& cycle);

// Product of the automaton with the lasso graph has an accepting cycle.
bool nba_accepts(const Nba& a, const Word& stem, const Word& cycle);

// Successor states of s on an explicit letter.
std::vector<StateId> successors(const Nba& a, StateId s, std::uint64_t letter);

// Pairs reachable from (q0,q0) by reading the same letter on both sides.
depsynt::CompatiblePairs explicit_pairs(const Nba& a);

// Dependency by the word-based definition on a trimmed automaton: no
// reachable subset holds states s, s' with enabled letters that agree on
// `ys` but differ on `xs`. Variables are positions in a.variables().
bool semantic_dependent(const Nba& a, const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ys);

// Same, with Y the complement of xs.
bool semantic_dependent(const Nba& a, const std::vector<std::size_t>& xs);

// Subsets of states reachable from {q0} by the subset construction over
// explicit letters; the empty set is excluded.
std::vector<std::vector<StateId>> reachable_subsets(const Nba& a);

// Winner per node (0 or 1) by enumerating positional strategies of player 0.
std::vector<int> brute_force_winners(const depsynt::ParityGame& g);

// True when, with `strategy` fixed at the nodes of `player`, the opponent
// cannot win from any node in `from`.
bool strategy_wins(const depsynt::ParityGame& g, const std::vector<int>& strategy, int player,
                   const std::vector<std::uint32_t>& from);

// Lasso of letters over (inputs then outputs) produced by running a circuit
// with ports named as in `inputs` / `outputs` on input lasso (stem, cycle).
// Empty optional when the circuit lowers `__live` on the way.
struct LetterLasso {
  Word stem;
  Word cycle;
};
std::optional<LetterLasso> run_circuit(const depsynt::Aig& circuit, const std::vector<std::string>& inputs,
                                       const std::vector<std::string>& outputs, const Word& stem, const Word& cycle);

// Runs the explicit subset machine and the T_X circuit side by side on every
// Y-word up to `max_len` letters; outputs and undefinedness must agree.
// Returns an empty string on success, else a description of the mismatch.
std::string tx_mismatch(const Nba& a, const std::vector<VarId>& xs, std::size_t max_len);

// Every subset state of the explicit machine is pairwise compatible.
bool tx_states_compatible(const Nba& a, const std::vector<VarId>& xs);

}  // namespace oracle

namespace gen {

using Rng = std::mt19937_64;

// Random trimmed automaton over `inputs` + `outputs` fresh variables with at
// most `max_states` states. When `plant` is set, the last output is tied to a
// fixed function of the other variables on every edge. Never empty.
depsynt::Nba random_nba(Rng& rng, std::size_t max_states, std::size_t inputs, std::size_t outputs, bool plant);

// BDD with a random truth table over `vars`; each minterm is in with
// probability `density`.
depsynt::Bdd random_bdd(Rng& rng, depsynt::BddManager& mgr, const std::vector<depsynt::VarId>& vars,
                        double density = 0.5);

depsynt::ParityGame random_game(Rng& rng, std::size_t nodes, int max_priority);

// Random formula over the given atoms with at most `depth` nesting.
depsynt::FormulaPtr random_formula(Rng& rng, const std::vector<std::string>& atoms, int depth);

oracle::Word random_word(Rng& rng, std::size_t length, std::size_t bits);

}  // namespace gen
