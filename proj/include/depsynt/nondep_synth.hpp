#pragma once

// Synthesis of the non-dependent outputs: Büchi to parity determinization,
// the parity game over inputs and remaining outputs, Zielonka's algorithm and
// Mealy machine extraction.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depsynt/nba.hpp"

namespace depsynt {

// Deterministic max-parity automaton over explicit letters. Letter bit k is
// the value of the k-th variable: inputs first, then outputs.
struct Dpa {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::uint32_t initial = 0;
  std::vector<std::vector<std::uint32_t>> delta;  // [state][letter]
  std::vector<int> priority;                      // even is accepting

  std::size_t state_count() const { return priority.size(); }
  std::size_t letter_count() const { return std::size_t{1} << (inputs.size() + outputs.size()); }
};

struct DeterminizeOptions {
  std::size_t letter_cap = 1u << 10;
  std::size_t state_cap = 100000;
};

// Safra-Piterman trees with state-based priorities; the empty tree becomes a
// rejecting sink.
Dpa determinize(const Nba& a, const DeterminizeOptions& options = {});

// Number of determinize() calls made by this process.
std::uint64_t determinize_call_count();

// Letters of a lasso (stem then cycle, cycle non-empty) are accepted when the
// maximal priority visited infinitely often is even.
bool dpa_accepts(const Dpa& d, const std::vector<std::uint64_t>& stem, const std::vector<std::uint64_t>& cycle);

// Player 0 is the system (wins on even max priority), player 1 the environment.
struct ParityGame {
  std::vector<int> owner;
  std::vector<int> priority;
  std::vector<std::vector<std::uint32_t>> succ;

  std::size_t size() const { return owner.size(); }
  std::uint32_t add_node(int owner, int priority);
};

struct GameSolution {
  std::vector<int> winner;    // 0 or 1 per node
  std::vector<int> strategy;  // successor chosen by the winning owner, else -1
};

GameSolution solve_parity(const ParityGame& g);

// Environment node d for each automaton state; system node
// D + d * 2^|I| + sigma_I, whose k-th successor answers outputs k.
struct DpaGame {
  ParityGame game;
  std::size_t dpa_states = 0;
  std::size_t input_letters = 0;
  std::uint32_t env_node(std::uint32_t d) const { return d; }
  std::uint32_t sys_node(std::uint32_t d, std::uint64_t in) const {
    return static_cast<std::uint32_t>(dpa_states + d * input_letters + in);
  }
};

DpaGame build_game(const Dpa& d);

// Mealy machine for the non-dependent outputs; bit k of out is outputs[k].
struct MealyTY {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::vector<std::uint32_t>> next;  // [state][input letter]
  std::vector<std::vector<std::uint64_t>> out;   // [state][input letter]

  std::size_t state_count() const { return next.size(); }
  // Single-state machine without outputs.
  static MealyTY trivial(std::vector<std::string> inputs);
};

// Throws when the initial environment node is losing for the system.
MealyTY extract_t_y(const Dpa& d, const DpaGame& g, const GameSolution& sol);

struct NondepResult {
  bool realizable = false;
  std::optional<MealyTY> machine;
  std::size_t dpa_states = 0;
  std::size_t game_nodes = 0;
};

NondepResult synthesize_nondependent(const Nba& projected, const DeterminizeOptions& options = {});

}  // namespace depsynt
