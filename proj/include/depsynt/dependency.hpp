#pragma once

// Dependent output variables of an automaton: compatible state pairs,
// collision checks and the greedy maximal dependent set.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "depsynt/nba.hpp"

namespace depsynt {

// Symmetric relation over the states of one automaton.
class CompatiblePairs {
 public:
  explicit CompatiblePairs(std::size_t states = 0) : n_(states), bits_(states * states, false) {}

  std::size_t states() const { return n_; }
  bool contains(StateId p, StateId q) const { return p < n_ && q < n_ && bits_[p * n_ + q]; }
  // Inserts (p,q) and (q,p); returns false when already present.
  bool insert(StateId p, StateId q);
  // Unordered pairs with p <= q.
  std::vector<std::pair<StateId, StateId>> pairs() const;
  std::size_t size() const { return pairs().size(); }

  friend bool operator==(const CompatiblePairs&, const CompatiblePairs&) = default;

 private:
  std::size_t n_;
  std::vector<bool> bits_;
};

// Worklist fixpoint from (q0,q0); a successor pair is added when the two
// edge labels share a letter.
CompatiblePairs find_compatible_pairs(const Nba& a);

// The primed copy of `v`, created directly after `v` in the order on first use.
VarId primed(BddManager& mgr, VarId v);

// True iff some letters on out-edges of p and q agree on `ys` and differ on z.
bool are_states_colliding(const Nba& a, StateId p, StateId q, VarId z, std::span<const VarId> ys);

// No compatible pair collides for (z, ys).
bool is_automata_dependent(const Nba& a, VarId z, std::span<const VarId> ys, const CompatiblePairs& pairs);

enum class DepStatus { Dependent, NotDependent, SkippedBudget };
std::string to_string(DepStatus status);

struct VarReport {
  VarId var;
  std::string name;
  DepStatus status;
  double millis;
};

struct DependencyReport {
  std::vector<VarId> dependent;     // in test order
  std::vector<VarId> nondependent;  // remaining outputs in declaration order
  std::vector<VarReport> vars;      // one per tested output, in test order
  std::size_t pair_count = 0;
  double pairs_ms = 0;
  double total_ms = 0;
};

// Greedy search over `order` (all outputs when empty). Each variable gets
// `budget_ms` of collision checking; past it, the variable is reported as
// skipped and treated as non-dependent. A zero budget skips every variable.
DependencyReport find_maximal_dependent_set(const Nba& a, std::span<const VarId> order = {},
                                            std::uint64_t budget_ms = 12000);

struct DependencyStats {
  std::size_t outputs = 0;
  std::size_t dependent = 0;
  std::size_t skipped = 0;
  double ratio = 0;
  double pairs_ms = 0;
  double total_ms = 0;
};

DependencyStats dependency_stats(const DependencyReport& report, const Nba& a);

// Outputs of `a` without `xs`, in declaration order.
std::vector<VarId> remaining_outputs(const Nba& a, std::span<const VarId> xs);

}  // namespace depsynt
