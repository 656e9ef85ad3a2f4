#include "depsynt/dependency.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <set>

#include "depsynt/error.hpp"

namespace depsynt {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Disjunction of the out-edge labels of every state.
std::vector<Bdd> out_labels(const Nba& a) {
  std::vector<Bdd> result(a.state_count(), a.manager().bdd_false());
  for (const auto& e : a.edges()) result[e.src] |= e.label;
  return result;
}

std::map<VarId, VarId> prime_map(const Nba& a) {
  std::map<VarId, VarId> m;
  for (const auto v : a.variables()) m[v] = primed(a.manager(), v);
  return m;
}

// (y <-> y') for every y, and (z xor z').
Bdd collision_constraint(BddManager& mgr, VarId z, std::span<const VarId> ys) {
  Bdd c = mgr.apply(BoolOp::Xor, mgr.var(z), mgr.var(primed(mgr, z)));
  for (const auto y : ys) c &= mgr.apply(BoolOp::Iff, mgr.var(y), mgr.var(primed(mgr, y)));
  return c;
}

void check_vars(const Nba& a, VarId z, std::span<const VarId> ys) {
  const auto outs = a.outputs();
  if (std::find(outs.begin(), outs.end(), z) == outs.end())
    throw Error("'" + a.manager().var_name(z) + "' is not an output of the automaton");
  if (std::find(ys.begin(), ys.end(), z) != ys.end())
    throw Error("'" + a.manager().var_name(z) + "' cannot depend on itself");
}

}  // namespace

bool CompatiblePairs::insert(StateId p, StateId q) {
  if (p >= n_ || q >= n_) throw Error("state out of range");
  if (bits_[p * n_ + q]) return false;
  bits_[p * n_ + q] = true;
  bits_[q * n_ + p] = true;
  return true;
}

std::vector<std::pair<StateId, StateId>> CompatiblePairs::pairs() const {
  std::vector<std::pair<StateId, StateId>> result;
  for (StateId p = 0; p < n_; ++p)
    for (StateId q = p; q < n_; ++q)
      if (bits_[p * n_ + q]) result.push_back({p, q});
  return result;
}

CompatiblePairs find_compatible_pairs(const Nba& a) {
  CompatiblePairs pairs(a.state_count());
  if (a.empty()) return pairs;
  auto& mgr = a.manager();
  std::deque<std::pair<StateId, StateId>> work;
  pairs.insert(a.initial(), a.initial());
  work.push_back({a.initial(), a.initial()});
  while (!work.empty()) {
    const auto [p, q] = work.front();
    work.pop_front();
    for (const auto ep : a.out_edges(p)) {
      const auto& e1 = a.edges()[ep];
      for (const auto eq : a.out_edges(q)) {
        const auto& e2 = a.edges()[eq];
        if (pairs.contains(e1.dst, e2.dst)) continue;
        if (mgr.is_sat(e1.label & e2.label)) {
          pairs.insert(e1.dst, e2.dst);
          work.push_back({e1.dst, e2.dst});
        }
      }
    }
  }
  return pairs;
}

VarId primed(BddManager& mgr, VarId v) {
  const std::string name = mgr.var_name(v) + "'";
  if (auto p = mgr.find_var(name)) return *p;
  return mgr.new_var_after(name, v);
}

bool are_states_colliding(const Nba& a, StateId p, StateId q, VarId z, std::span<const VarId> ys) {
  check_vars(a, z, ys);
  auto& mgr = a.manager();
  const auto labels = out_labels(a);
  const Bdd rhs = mgr.rename(labels.at(q), prime_map(a));
  return mgr.is_sat(labels.at(p) & rhs & collision_constraint(mgr, z, ys));
}

namespace {

enum class Verdict { Dependent, NotDependent, Timeout };

Verdict dependent_within(const Nba& a, VarId z, std::span<const VarId> ys, const CompatiblePairs& pairs,
                         const std::vector<Bdd>& labels, const std::vector<Bdd>& primed_labels,
                         std::optional<Clock::time_point> deadline) {
  auto& mgr = a.manager();
  const Bdd constraint = collision_constraint(mgr, z, ys);
  // Collisions are symmetric under swapping p and q, so one orientation per
  // unordered pair suffices.
  for (const auto& [p, q] : pairs.pairs()) {
    if (deadline && Clock::now() > *deadline) return Verdict::Timeout;
    if (mgr.is_sat(labels[p] & constraint & primed_labels[q])) return Verdict::NotDependent;
  }
  return Verdict::Dependent;
}

}  // namespace

bool is_automata_dependent(const Nba& a, VarId z, std::span<const VarId> ys, const CompatiblePairs& pairs) {
  check_vars(a, z, ys);
  if (pairs.states() != a.state_count()) throw Error("compatible pairs belong to a different automaton");
  auto& mgr = a.manager();
  const auto labels = out_labels(a);
  const auto pm = prime_map(a);
  std::vector<Bdd> primed_labels;
  for (const auto& l : labels) primed_labels.push_back(mgr.rename(l, pm));
  return dependent_within(a, z, ys, pairs, labels, primed_labels, std::nullopt) == Verdict::Dependent;
}

std::string to_string(DepStatus status) {
  switch (status) {
    case DepStatus::Dependent:
      return "dependent";
    case DepStatus::NotDependent:
      return "not-dependent";
    case DepStatus::SkippedBudget:
      return "skipped-budget";
  }
  return "?";
}

std::vector<VarId> remaining_outputs(const Nba& a, std::span<const VarId> xs) {
  std::vector<VarId> rest;
  for (const auto v : a.outputs())
    if (std::find(xs.begin(), xs.end(), v) == xs.end()) rest.push_back(v);
  return rest;
}

DependencyReport find_maximal_dependent_set(const Nba& a, std::span<const VarId> order, std::uint64_t budget_ms) {
  const auto start = Clock::now();
  auto& mgr = a.manager();
  std::vector<VarId> test_order(order.begin(), order.end());
  if (test_order.empty()) test_order = a.outputs();
  {
    std::set<VarId> seen(test_order.begin(), test_order.end());
    std::set<VarId> outs(a.outputs().begin(), a.outputs().end());
    if (seen.size() != test_order.size() || seen != outs)
      throw Error("dependency order must be a permutation of the outputs");
  }

  DependencyReport report;
  if (budget_ms == 0) {
    for (const auto z : test_order) report.vars.push_back({z, mgr.var_name(z), DepStatus::SkippedBudget, 0.0});
    report.nondependent = a.outputs();
    report.total_ms = elapsed_ms(start);
    return report;
  }

  const auto pairs_start = Clock::now();
  const auto pairs = find_compatible_pairs(a);
  report.pair_count = pairs.size();
  const auto labels = out_labels(a);
  const auto pm = prime_map(a);
  std::vector<Bdd> primed_labels;
  for (const auto& l : labels) primed_labels.push_back(mgr.rename(l, pm));
  report.pairs_ms = elapsed_ms(pairs_start);

  const auto all = a.variables();
  for (const auto z : test_order) {
    const auto var_start = Clock::now();
    std::vector<VarId> ys;
    for (const auto v : all)
      if (v != z && std::find(report.dependent.begin(), report.dependent.end(), v) == report.dependent.end())
        ys.push_back(v);
    const auto deadline = var_start + std::chrono::milliseconds(budget_ms);
    const auto verdict = dependent_within(a, z, ys, pairs, labels, primed_labels, deadline);
    DepStatus status = verdict == Verdict::Dependent      ? DepStatus::Dependent
                       : verdict == Verdict::NotDependent ? DepStatus::NotDependent
                                                          : DepStatus::SkippedBudget;
    if (status == DepStatus::Dependent) report.dependent.push_back(z);
    report.vars.push_back({z, mgr.var_name(z), status, elapsed_ms(var_start)});
  }
  report.nondependent = remaining_outputs(a, report.dependent);
  report.total_ms = elapsed_ms(start);
  return report;
}

DependencyStats dependency_stats(const DependencyReport& report, const Nba& a) {
  DependencyStats s;
  s.outputs = a.outputs().size();
  s.dependent = report.dependent.size();
  for (const auto& v : report.vars)
    if (v.status == DepStatus::SkippedBudget) ++s.skipped;
  s.ratio = s.outputs == 0 ? 0.0 : static_cast<double>(s.dependent) / static_cast<double>(s.outputs);
  s.pairs_ms = report.pairs_ms;
  s.total_ms = report.total_ms;
  return s;
}

}  // namespace depsynt
