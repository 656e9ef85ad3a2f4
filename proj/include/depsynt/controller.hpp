#pragma once

// The composed controller: T_Y drives the non-dependent outputs, T_X reads
// the inputs plus those outputs and drives the dependent ones.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depsynt/circuit.hpp"
#include "depsynt/nondep_synth.hpp"
#include "depsynt/spec.hpp"

namespace depsynt {

struct Controller {
  std::vector<std::string> inputs;   // I, declaration order
  std::vector<std::string> outputs;  // O, declaration order
  std::vector<std::string> dependent;
  Aig circuit;  // inputs I, outputs O then `__live`
  std::size_t ty_states = 0;
  std::size_t ty_latches = 0;
  std::size_t tx_latches = 0;
};

// Binary-encoded machine: ceil(log2 |S|) latches with the initial state at
// code 0. Inputs are t_y.inputs, outputs t_y.outputs.
Aig mealy_to_aig(const MealyTY& t_y);

// `t_x` is absent when no output is dependent. Throws AlphabetMismatch when
// the machines do not cover the declared ports exactly.
Controller compose(const MealyTY& t_y, const std::optional<Aig>& t_x, const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs);

// Rebuilds port lists from a circuit (e.g. a parsed AIGER file).
Controller controller_from_aig(Aig circuit, const std::vector<std::string>& inputs,
                               const std::vector<std::string>& outputs);

// One entry per input letter (bit k is inputs[k]); the output letter has bit
// k set for outputs[k], or is empty when `__live` is low.
std::vector<std::optional<std::uint64_t>> simulate(const Controller& c, const std::vector<std::uint64_t>& word);

// No reachable step lowers `__live`.
bool never_dead(const Controller& c, std::size_t state_cap = 1'000'000);

struct VerifyOptions {
  std::size_t nba_state_cap = 5000;
  std::size_t product_state_cap = 1'000'000;
};

// The controller never reports an undefined output and its product with an
// automaton for the negated specification is empty.
bool verify(const Controller& c, const Spec& spec, const VerifyOptions& options = {});

std::string emit_aiger(const Controller& c);

// Explicit Mealy product: reachable latch states and one transition per
// state and input letter.
std::string controller_json(const Controller& c, std::size_t state_cap = 4096);

}  // namespace depsynt
