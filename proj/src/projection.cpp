#include "depsynt/projection.hpp"

#include <set>

#include "depsynt/dependency.hpp"
#include "depsynt/error.hpp"

namespace depsynt {

Nba project(const Nba& a, std::span<const VarId> xs) {
  for (const auto x : xs) {
    const auto& outs = a.outputs();
    if (std::find(outs.begin(), outs.end(), x) == outs.end())
      throw Error("cannot project '" + a.manager().var_name(x) + "': not an output");
  }
  Nba result(a.manager_ptr(), a.inputs(), remaining_outputs(a, xs));
  for (StateId s = 0; s < a.state_count(); ++s) result.add_state(a.accepting(s));
  if (!a.empty()) result.set_initial(a.initial());
  for (const auto& e : a.edges()) result.add_edge(e.src, e.dst, a.manager().exists(e.label, xs));
  return result;
}

ProjectionStats projection_stats(const Nba& before, const Nba& after) {
  if (before.state_count() != after.state_count() || before.edges().size() != after.edges().size())
    throw Error("projection statistics need automata of the same shape");
  ProjectionStats stats;
  stats.states = before.state_count();
  stats.edges = before.edges().size();
  auto total = [](const Nba& a) {
    std::set<std::uint32_t> seen;
    std::size_t sum = 0;
    for (const auto& e : a.edges())
      if (seen.insert(e.label.id()).second) sum += a.manager().internal_node_count(e.label);
    return sum;
  };
  stats.bdd_before = total(before);
  stats.bdd_after = total(after);
  for (std::size_t k = 0; k < before.edges().size(); ++k) {
    const auto b = before.manager().internal_node_count(before.edges()[k].label);
    const auto f = after.manager().internal_node_count(after.edges()[k].label);
    stats.edge_deltas.push_back(static_cast<long>(f) - static_cast<long>(b));
  }
  return stats;
}

}  // namespace depsynt
