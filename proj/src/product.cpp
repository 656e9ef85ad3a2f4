#include <map>
#include <unordered_map>

#include "depsynt/error.hpp"
#include "depsynt/nba.hpp"

namespace depsynt {

bool product_empty(const Aig& circuit, const Nba& a, std::size_t state_cap) {
  if (a.empty()) return true;
  auto& mgr = a.manager();
  // Bind automaton variables to circuit ports.
  struct Binding {
    VarId var;
    bool is_input;
    std::size_t port;
  };
  std::vector<Binding> bindings;
  for (const auto v : a.inputs()) {
    const int idx = circuit.input_index(mgr.var_name(v));
    if (idx < 0) throw AlphabetMismatch("input '" + mgr.var_name(v) + "' is not a circuit input");
    bindings.push_back({v, true, static_cast<std::size_t>(idx)});
  }
  for (const auto v : a.outputs()) {
    const int idx = circuit.output_index(mgr.var_name(v));
    if (idx < 0) throw AlphabetMismatch("output '" + mgr.var_name(v) + "' is not a circuit output");
    bindings.push_back({v, false, static_cast<std::size_t>(idx)});
  }
  const std::size_t ni = circuit.inputs().size();
  if (ni > 20) throw ResourceError("too many circuit inputs for explicit exploration");
  const std::uint64_t letters = std::uint64_t{1} << ni;

  // Circuit states are interned; successors and labels computed once each.
  std::map<std::vector<bool>, std::uint32_t> circuit_ids;
  std::vector<std::vector<bool>> circuit_states;
  struct Step {
    std::uint32_t next;
    Assignment assignment;
  };
  std::vector<std::vector<Step>> steps;
  auto intern = [&](const std::vector<bool>& s) {
    auto [it, inserted] = circuit_ids.try_emplace(s, static_cast<std::uint32_t>(circuit_states.size()));
    if (inserted) circuit_states.push_back(s);
    return it->second;
  };
  auto steps_of = [&](std::uint32_t c) -> const std::vector<Step>& {
    while (steps.size() <= c) steps.emplace_back();
    if (steps[c].empty()) {
      std::vector<Step> result;
      std::vector<bool> in(ni), out, next;
      for (std::uint64_t l = 0; l < letters; ++l) {
        for (std::size_t k = 0; k < ni; ++k) in[k] = (l >> k) & 1u;
        circuit.step(circuit_states[c], in, out, next);
        Assignment asg(mgr.var_count(), false);
        for (const auto& b : bindings) asg[b.var.index] = b.is_input ? in[b.port] : out[b.port];
        result.push_back({0, std::move(asg)});
        result.back().next = intern(next);
      }
      steps[c] = std::move(result);
    }
    return steps[c];
  };

  // Product states (circuit state, automaton state), explored with an
  // iterative Tarjan SCC search; nonempty iff some nontrivial SCC holds an
  // accepting state.
  std::unordered_map<std::uint64_t, std::uint32_t> pid;
  std::vector<std::uint64_t> pkey;
  auto product_id = [&](std::uint32_t c, StateId q) {
    const std::uint64_t key = (static_cast<std::uint64_t>(c) << 32) | q;
    auto [it, inserted] = pid.try_emplace(key, static_cast<std::uint32_t>(pkey.size()));
    if (inserted) {
      if (pkey.size() >= state_cap) throw ResourceError("product exceeds the state cap");
      pkey.push_back(key);
    }
    return it->second;
  };
  auto successors = [&](std::uint32_t p) {
    const auto c = static_cast<std::uint32_t>(pkey[p] >> 32);
    const auto q = static_cast<StateId>(pkey[p] & 0xffffffffu);
    std::vector<std::uint32_t> succ;
    const auto& st = steps_of(c);
    for (const auto& s : st)
      for (const auto e : a.out_edges(q))
        if (a.edge_enabled(e, s.assignment)) succ.push_back(product_id(s.next, a.edges()[e].dst));
    return succ;
  };

  std::vector<int> index, low;
  std::vector<bool> on_stack;
  std::vector<std::uint32_t> stack;
  int counter = 0;
  struct Frame {
    std::uint32_t v;
    std::vector<std::uint32_t> succ;
    std::size_t i;
  };
  auto grow = [&](std::uint32_t v) {
    if (index.size() <= v) {
      index.resize(v + 1, -1);
      low.resize(v + 1, 0);
      on_stack.resize(v + 1, false);
    }
  };
  const auto root = product_id(intern(circuit.initial_state()), a.initial());
  grow(root);
  std::vector<Frame> call;
  auto open = [&](std::uint32_t v) {
    grow(v);
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    call.push_back({v, successors(v), 0});
  };
  open(root);
  while (!call.empty()) {
    Frame& f = call.back();
    if (f.i < f.succ.size()) {
      const auto w = f.succ[f.i++];
      grow(w);
      if (index[w] < 0) {
        open(w);
      } else if (on_stack[w]) {
        low[f.v] = std::min(low[f.v], index[w]);
      }
      continue;
    }
    const auto v = f.v;
    if (low[v] == index[v]) {
      std::vector<std::uint32_t> comp;
      std::uint32_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      bool accepting = false;
      for (const auto s : comp)
        if (a.accepting(static_cast<StateId>(pkey[s] & 0xffffffffu))) accepting = true;
      if (accepting) {
        bool cyclic = comp.size() > 1;
        if (!cyclic)
          for (const auto s : f.succ)
            if (s == v) cyclic = true;
        if (cyclic) return false;
      }
    }
    call.pop_back();
    if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
  }
  return true;
}

}  // namespace depsynt
