#pragma once

// And-inverter graphs with latches, plus AIGER ASCII I/O and simulation.
//
// Literals follow the AIGER convention on internal node indices:
// 2*node + complement, node 0 being constant False.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "depsynt/bdd.hpp"

namespace depsynt {

using AigLit = std::uint32_t;

constexpr AigLit kAigFalse = 0;
constexpr AigLit kAigTrue = 1;

inline AigLit aig_not(AigLit a) { return a ^ 1u; }

class Aig {
 public:
  struct Port {
    std::string name;
    AigLit lit;
  };
  struct Latch {
    std::string name;
    AigLit lit;  // current-state literal (always positive)
    AigLit next = kAigFalse;
    bool reset = false;
  };

  Aig();

  AigLit add_input(std::string name);
  // Returns the index of the latch; its literal is latches()[i].lit.
  std::size_t add_latch(std::string name, bool reset);
  void set_latch_next(std::size_t latch, AigLit next);
  void add_output(std::string name, AigLit lit);

  // Structurally hashed, with constant and trivial-operand folding.
  AigLit make_and(AigLit a, AigLit b);
  AigLit make_or(AigLit a, AigLit b) { return aig_not(make_and(aig_not(a), aig_not(b))); }
  AigLit make_mux(AigLit sel, AigLit then_lit, AigLit else_lit);
  AigLit make_xor(AigLit a, AigLit b) { return make_mux(a, aig_not(b), b); }

  // Copies `sub` into this graph. Its inputs are replaced by `inputs`, one
  // per sub input; its latches become new latches named prefix + name.
  // Returns the literals of sub's outputs.
  std::vector<AigLit> instantiate(const Aig& sub, const std::vector<AigLit>& inputs, const std::string& prefix);

  const std::vector<Port>& inputs() const { return inputs_; }
  const std::vector<Latch>& latches() const { return latches_; }
  const std::vector<Port>& outputs() const { return outputs_; }
  std::size_t and_count() const { return and_count_; }
  int input_index(std::string_view name) const;
  int output_index(std::string_view name) const;

  std::vector<bool> initial_state() const;
  // One synchronous step: outputs and next latch values from the current
  // latch values and input values.
  void step(const std::vector<bool>& state, const std::vector<bool>& in, std::vector<bool>& out,
            std::vector<bool>& next) const;

  // ASCII AIGER: inputs, then latches (explicit reset), outputs, ands, symbols.
  std::string to_aag() const;
  static Aig parse_aag(std::string_view text);

 private:
  enum class Kind : std::uint8_t { Const, Input, Latch, And };
  struct Node {
    Kind kind;
    AigLit a = 0;
    AigLit b = 0;
    std::uint32_t index = 0;  // position in inputs_/latches_
  };
  struct PairHash {
    std::size_t operator()(std::uint64_t k) const noexcept { return std::hash<std::uint64_t>{}(k); }
  };

  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, AigLit, PairHash> strash_;
  std::vector<Port> inputs_;
  std::vector<Latch> latches_;
  std::vector<Port> outputs_;
  std::size_t and_count_ = 0;
};

// Compiles BDDs to AIG multiplexers, one per BDD node, sharing nodes across
// calls. Every variable in the support must be bound.
class BddToAig {
 public:
  BddToAig(BddManager& mgr, Aig& aig) : mgr_(mgr), aig_(aig) {}

  void bind(VarId v, AigLit lit) { binding_[v] = lit; }
  AigLit compile(Bdd f);

 private:
  BddManager& mgr_;
  Aig& aig_;
  std::map<VarId, AigLit> binding_;
  std::unordered_map<std::uint32_t, AigLit> memo_;
};

}  // namespace depsynt
