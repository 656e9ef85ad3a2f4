#pragma once

// Synthesis of the dependent outputs X from the automaton itself: the
// explicit subset machine and the symbolic circuit with one latch per state.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "depsynt/circuit.hpp"
#include "depsynt/nba.hpp"

namespace depsynt {

// Deterministic machine over Y letters (inputs, then outputs outside X; bit k
// is inputs[k]). next is -1 when the successor set is empty, in which case
// the output is undefined.
struct ExplicitTX {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;  // X in the given order
  std::vector<std::vector<StateId>> states;
  std::vector<std::vector<std::int64_t>> next;
  std::vector<std::vector<std::uint64_t>> out;

  std::size_t state_count() const { return states.size(); }
  std::size_t letter_count() const { return std::size_t{1} << inputs.size(); }
};

// Throws InvariantViolation when a reachable transition admits two values of
// X, i.e. X is not dependent.
ExplicitTX build_explicit_t_x(const Nba& a, std::span<const VarId> xs, std::size_t letter_cap = 1u << 12,
                              std::size_t state_cap = 1u << 16);

// Next-state functions n_i = OR over edges (s_j, s_i) of p_j & exists X. B.
// Y variables must be bound in `compiler`; p holds one literal per state.
std::vector<AigLit> build_delta_circuit(BddToAig& compiler, Aig& aig, const Nba& a, std::span<const VarId> xs,
                                        const std::vector<AigLit>& p);

// Output functions x_i = OR over edges (s, s') of p_s & B[X := F] & F_i with
// F the Skolem vector of the edge label.
std::vector<AigLit> build_lambda_circuit(BddToAig& compiler, Aig& aig, const Nba& a, std::span<const VarId> xs,
                                         const std::vector<AigLit>& p);

// Standalone T_X: inputs are the inputs of `a` then its outputs outside X;
// latches p0..p{k-1}, only the initial state's latch set at reset; outputs
// are X followed by `__live`, the disjunction of the next-state functions.
Aig build_tx_circuit(const Nba& a, std::span<const VarId> xs);

inline constexpr const char* kLiveOutput = "__live";

}  // namespace depsynt
