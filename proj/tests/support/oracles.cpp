#include "oracles.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "depsynt/error.hpp"

namespace oracle {

using depsynt::FormulaKind;
using depsynt::FormulaPtr;

namespace {

class LassoEvaluator {
 public:
  LassoEvaluator(const std::vector<std::string>& names, const Word& stem, const Word& cycle)
      : names_(names), n_(stem.size() + cycle.size()), loop_(stem.size()) {
    letters_ = stem;
    letters_.insert(letters_.end(), cycle.begin(), cycle.end());
  }

  const std::vector<bool>& eval(const FormulaPtr& f) {
    if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
    std::vector<bool> v(n_, false);
    switch (f->kind) {
      case FormulaKind::True:
        v.assign(n_, true);
        break;
      case FormulaKind::False:
        break;
      case FormulaKind::Atom: {
        const auto pos = std::find(names_.begin(), names_.end(), f->name) - names_.begin();
        if (pos == static_cast<long>(names_.size())) throw std::runtime_error("unknown atom " + f->name);
        for (std::size_t i = 0; i < n_; ++i) v[i] = (letters_[i] >> pos) & 1u;
        break;
      }
      case FormulaKind::Ref:
        v = eval(f->lhs);
        break;
      case FormulaKind::Not: {
        const auto& a = eval(f->lhs);
        for (std::size_t i = 0; i < n_; ++i) v[i] = !a[i];
        break;
      }
      case FormulaKind::Next: {
        const auto& a = eval(f->lhs);
        for (std::size_t i = 0; i < n_; ++i) v[i] = a[succ(i)];
        break;
      }
      case FormulaKind::Finally:
        v = until(std::vector<bool>(n_, true), eval(f->lhs));
        break;
      case FormulaKind::Globally:
        v = release(std::vector<bool>(n_, false), eval(f->lhs));
        break;
      case FormulaKind::Until:
        v = until(eval(f->lhs), eval(f->rhs));
        break;
      case FormulaKind::Release:
        v = release(eval(f->lhs), eval(f->rhs));
        break;
      default: {
        const auto a = eval(f->lhs);
        const auto& b = eval(f->rhs);
        for (std::size_t i = 0; i < n_; ++i) {
          switch (f->kind) {
            case FormulaKind::And: v[i] = a[i] && b[i]; break;
            case FormulaKind::Or: v[i] = a[i] || b[i]; break;
            case FormulaKind::Implies: v[i] = !a[i] || b[i]; break;
            default: v[i] = a[i] == b[i]; break;
          }
        }
      }
    }
    return memo_[f.get()] = std::move(v);
  }

 private:
  std::size_t succ(std::size_t i) const { return i + 1 < n_ ? i + 1 : loop_; }

  std::vector<bool> until(const std::vector<bool>& a, const std::vector<bool>& b) const {
    std::vector<bool> v(n_, false);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t k = n_; k-- > 0;) {
        const bool x = b[k] || (a[k] && v[succ(k)]);
        if (x != v[k]) v[k] = x, changed = true;
      }
    }
    return v;
  }

  std::vector<bool> release(const std::vector<bool>& a, const std::vector<bool>& b) const {
    std::vector<bool> v(n_, true);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t k = n_; k-- > 0;) {
        const bool x = b[k] && (a[k] || v[succ(k)]);
        if (x != v[k]) v[k] = x, changed = true;
      }
    }
    return v;
  }

  const std::vector<std::string>& names_;
  std::size_t n_;
  std::size_t loop_;
  Word letters_;
  std::unordered_map<const depsynt::Formula*, std::vector<bool>> memo_;
};

// Nodes on a cycle whose maximal priority has the given parity, in the graph
// restricted to `edges`.
std::vector<char> parity_cycle_nodes(const depsynt::ParityGame& g, const std::vector<std::vector<std::uint32_t>>& edges,
                                     int parity) {
  const std::size_t n = g.size();
  std::vector<char> bad(n, 0);
  for (std::uint32_t u = 0; u < n; ++u) {
    if (g.priority[u] % 2 != parity) continue;
    const int p = g.priority[u];
    // u reaches itself through nodes of priority <= p
    std::vector<char> seen(n, 0);
    std::deque<std::uint32_t> queue;
    for (const auto w : edges[u])
      if (g.priority[w] <= p && !seen[w]) seen[w] = 1, queue.push_back(w);
    while (!queue.empty() && !seen[u]) {
      const auto v = queue.front();
      queue.pop_front();
      for (const auto w : edges[v])
        if (g.priority[w] <= p && !seen[w]) seen[w] = 1, queue.push_back(w);
    }
    if (seen[u]) bad[u] = 1;
  }
  return bad;
}

// Nodes that can reach a marked node.
std::vector<char> can_reach(const std::vector<std::vector<std::uint32_t>>& edges, const std::vector<char>& marked) {
  const std::size_t n = edges.size();
  std::vector<std::vector<std::uint32_t>> pred(n);
  for (std::uint32_t v = 0; v < n; ++v)
    for (const auto w : edges[v]) pred[w].push_back(v);
  std::vector<char> r = marked;
  std::deque<std::uint32_t> queue;
  for (std::uint32_t v = 0; v < n; ++v)
    if (r[v]) queue.push_back(v);
  while (!queue.empty()) {
    const auto w = queue.front();
    queue.pop_front();
    for (const auto v : pred[w])
      if (!r[v]) r[v] = 1, queue.push_back(v);
  }
  return r;
}

std::uint64_t project_bits(std::uint64_t letter, const std::vector<std::size_t>& positions) {
  std::uint64_t r = 0;
  for (std::size_t k = 0; k < positions.size(); ++k)
    if ((letter >> positions[k]) & 1u) r |= std::uint64_t{1} << k;
  return r;
}

}  // namespace

bool ltl_holds(const FormulaPtr& f, const std::vector<std::string>& names, const Word& stem, const Word& cycle) {
  if (cycle.empty()) throw std::invalid_argument("empty cycle");
  LassoEvaluator e(names, stem, cycle);
  return e.eval(f)[0];
}

std::vector<StateId> successors(const Nba& a, StateId s, std::uint64_t letter) {
  const auto assignment = a.letter_assignment(letter);
  std::vector<StateId> r;
  for (const auto e : a.out_edges(s))
    if (a.edge_enabled(e, assignment)) r.push_back(a.edges()[e].dst);
  return r;
}

bool nba_accepts(const Nba& a, const Word& stem, const Word& cycle) {
  if (a.empty()) return false;
  const std::size_t n = stem.size() + cycle.size();
  Word letters = stem;
  letters.insert(letters.end(), cycle.begin(), cycle.end());
  auto succ_pos = [&](std::size_t i) { return i + 1 < n ? i + 1 : stem.size(); };
  const std::size_t states = a.state_count();
  auto id = [&](StateId q, std::size_t i) { return q * n + i; };
  std::vector<std::vector<std::uint32_t>> edges(states * n);
  for (StateId q = 0; q < states; ++q)
    for (std::size_t i = 0; i < n; ++i)
      for (const auto t : successors(a, q, letters[i])) edges[id(q, i)].push_back(static_cast<std::uint32_t>(id(t, succ_pos(i))));
  std::vector<char> reach(states * n, 0);
  std::deque<std::size_t> queue{id(a.initial(), 0)};
  reach[queue.front()] = 1;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (const auto w : edges[v])
      if (!reach[w]) reach[w] = 1, queue.push_back(w);
  }
  for (StateId q = 0; q < states; ++q) {
    if (!a.accepting(q)) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const auto start = id(q, i);
      if (!reach[start]) continue;
      std::vector<char> seen(states * n, 0);
      std::deque<std::size_t> bfs;
      for (const auto w : edges[start])
        if (!seen[w]) seen[w] = 1, bfs.push_back(w);
      while (!bfs.empty() && !seen[start]) {
        const auto v = bfs.front();
        bfs.pop_front();
        for (const auto w : edges[v])
          if (!seen[w]) seen[w] = 1, bfs.push_back(w);
      }
      if (seen[start]) return true;
    }
  }
  return false;
}

depsynt::CompatiblePairs explicit_pairs(const Nba& a) {
  depsynt::CompatiblePairs pairs(a.state_count());
  if (a.empty()) return pairs;
  const std::uint64_t letters = std::uint64_t{1} << a.letter_bits();
  std::deque<std::pair<StateId, StateId>> queue{{a.initial(), a.initial()}};
  pairs.insert(a.initial(), a.initial());
  while (!queue.empty()) {
    const auto [p, q] = queue.front();
    queue.pop_front();
    for (std::uint64_t l = 0; l < letters; ++l)
      for (const auto p2 : successors(a, p, l))
        for (const auto q2 : successors(a, q, l))
          if (pairs.insert(p2, q2)) queue.push_back({p2, q2});
  }
  return pairs;
}

std::vector<std::vector<StateId>> reachable_subsets(const Nba& a) {
  if (a.empty()) return {};
  const std::uint64_t letters = std::uint64_t{1} << a.letter_bits();
  std::set<std::vector<StateId>> seen{{a.initial()}};
  std::vector<std::vector<StateId>> order{{a.initial()}};
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::uint64_t l = 0; l < letters; ++l) {
      std::set<StateId> next;
      for (const auto s : order[k])
        for (const auto t : successors(a, s, l)) next.insert(t);
      if (next.empty()) continue;
      std::vector<StateId> v(next.begin(), next.end());
      if (seen.insert(v).second) order.push_back(std::move(v));
    }
  }
  return order;
}

bool semantic_dependent(const Nba& a, const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ys) {
  const std::uint64_t letters = std::uint64_t{1} << a.letter_bits();
  // letters enabled at each state
  std::vector<std::vector<std::uint64_t>> enabled(a.state_count());
  for (StateId s = 0; s < a.state_count(); ++s)
    for (std::uint64_t l = 0; l < letters; ++l)
      if (!successors(a, s, l).empty()) enabled[s].push_back(l);
  for (const auto& subset : reachable_subsets(a))
    for (const auto s : subset)
      for (const auto t : subset)
        for (const auto l1 : enabled[s])
          for (const auto l2 : enabled[t])
            if (project_bits(l1, ys) == project_bits(l2, ys) && project_bits(l1, xs) != project_bits(l2, xs))
              return false;
  return true;
}

bool semantic_dependent(const Nba& a, const std::vector<std::size_t>& xs) {
  std::vector<std::size_t> ys;
  for (std::size_t k = 0; k < a.letter_bits(); ++k)
    if (std::find(xs.begin(), xs.end(), k) == xs.end()) ys.push_back(k);
  return semantic_dependent(a, xs, ys);
}

std::vector<int> brute_force_winners(const depsynt::ParityGame& g) {
  const std::size_t n = g.size();
  std::vector<std::uint32_t> mine;
  for (std::uint32_t v = 0; v < n; ++v)
    if (g.owner[v] == 0) mine.push_back(v);
  std::vector<int> winner(n, 1);
  std::vector<std::size_t> choice(mine.size(), 0);
  while (true) {
    auto edges = g.succ;
    for (std::size_t k = 0; k < mine.size(); ++k) edges[mine[k]] = {g.succ[mine[k]][choice[k]]};
    const auto lose = can_reach(edges, parity_cycle_nodes(g, edges, 1));
    for (std::uint32_t v = 0; v < n; ++v)
      if (!lose[v]) winner[v] = 0;
    std::size_t k = 0;
    while (k < mine.size() && ++choice[k] == g.succ[mine[k]].size()) choice[k++] = 0;
    if (k == mine.size()) break;
  }
  return winner;
}

bool strategy_wins(const depsynt::ParityGame& g, const std::vector<int>& strategy, int player,
                   const std::vector<std::uint32_t>& from) {
  auto edges = g.succ;
  for (std::uint32_t v = 0; v < g.size(); ++v) {
    if (g.owner[v] != player || strategy[v] < 0) continue;
    const auto w = static_cast<std::uint32_t>(strategy[v]);
    if (std::find(g.succ[v].begin(), g.succ[v].end(), w) == g.succ[v].end()) return false;
    edges[v] = {w};
  }
  for (const auto v : from)
    if (g.owner[v] == player && strategy[v] < 0) return false;
  const auto lose = can_reach(edges, parity_cycle_nodes(g, edges, 1 - player));
  return std::none_of(from.begin(), from.end(), [&](std::uint32_t v) { return lose[v]; });
}

std::optional<LetterLasso> run_circuit(const depsynt::Aig& circuit, const std::vector<std::string>& inputs,
                                       const std::vector<std::string>& outputs, const Word& stem, const Word& cycle) {
  const int live = circuit.output_index(depsynt::kLiveOutput);
  auto step = [&](std::vector<bool>& state, std::uint64_t in_letter) -> std::optional<std::uint64_t> {
    std::vector<bool> in(circuit.inputs().size(), false), out, next;
    for (std::size_t k = 0; k < inputs.size(); ++k) in[circuit.input_index(inputs[k])] = (in_letter >> k) & 1u;
    circuit.step(state, in, out, next);
    state = std::move(next);
    if (live >= 0 && !out[live]) return std::nullopt;
    std::uint64_t letter = in_letter;
    for (std::size_t k = 0; k < outputs.size(); ++k)
      if (out[circuit.output_index(outputs[k])]) letter |= std::uint64_t{1} << (inputs.size() + k);
    return letter;
  };
  LetterLasso r;
  auto state = circuit.initial_state();
  for (const auto l : stem) {
    const auto letter = step(state, l);
    if (!letter) return std::nullopt;
    r.stem.push_back(*letter);
  }
  std::map<std::pair<std::vector<bool>, std::size_t>, std::size_t> seen;
  Word trace;
  std::size_t pos = 0;
  while (true) {
    auto [it, inserted] = seen.try_emplace({state, pos}, trace.size());
    if (!inserted) {
      r.stem.insert(r.stem.end(), trace.begin(), trace.begin() + static_cast<long>(it->second));
      r.cycle.assign(trace.begin() + static_cast<long>(it->second), trace.end());
      return r;
    }
    const auto letter = step(state, cycle[pos]);
    if (!letter) return std::nullopt;
    trace.push_back(*letter);
    pos = (pos + 1) % cycle.size();
  }
}

std::string tx_mismatch(const Nba& a, const std::vector<VarId>& xs, std::size_t max_len) {
  const auto ex = depsynt::build_explicit_t_x(a, xs);
  const depsynt::Aig circuit = depsynt::build_tx_circuit(a, xs);
  const std::size_t letters = ex.letter_count();
  std::vector<int> in_index;
  for (const auto& name : ex.inputs) in_index.push_back(circuit.input_index(name));
  std::vector<int> out_index;
  for (const auto& name : ex.outputs) out_index.push_back(circuit.output_index(name));
  const int live = circuit.output_index(depsynt::kLiveOutput);
  if (live < 0) return "circuit has no live output";
  for (const int k : in_index)
    if (k < 0) return "circuit lacks a Y input";
  for (const int k : out_index)
    if (k < 0) return "circuit lacks an X output";

  struct Frame {
    std::int64_t state;  // -1 once undefined
    std::vector<bool> latches;
    std::size_t depth;
  };
  std::vector<Frame> stack{{0, circuit.initial_state(), 0}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.depth == max_len) continue;
    for (std::uint64_t l = 0; l < letters; ++l) {
      std::vector<bool> in(circuit.inputs().size(), false), out, next;
      for (std::size_t k = 0; k < in_index.size(); ++k) in[in_index[k]] = (l >> k) & 1u;
      circuit.step(f.latches, in, out, next);
      std::int64_t expected_next = -1;
      if (f.state >= 0) expected_next = ex.next[f.state][l];
      if (expected_next < 0) {
        if (out[live]) return "live circuit where the subset machine is undefined";
      } else {
        if (!out[live]) return "dead circuit where the subset machine is defined";
        std::uint64_t x = 0;
        for (std::size_t k = 0; k < out_index.size(); ++k)
          if (out[out_index[k]]) x |= std::uint64_t{1} << k;
        if (x != ex.out[f.state][l]) return "output mismatch at depth " + std::to_string(f.depth);
        // latch k is set exactly for the states in the subset
        std::vector<bool> expected(next.size(), false);
        for (const auto q : ex.states[expected_next]) expected[q] = true;
        if (expected != next) return "latch state differs from the subset at depth " + std::to_string(f.depth);
      }
      stack.push_back({expected_next, std::move(next), f.depth + 1});
    }
  }
  return {};
}

bool tx_states_compatible(const Nba& a, const std::vector<VarId>& xs) {
  const auto ex = depsynt::build_explicit_t_x(a, xs);
  const auto pairs = explicit_pairs(a);
  for (const auto& subset : ex.states)
    for (const auto p : subset)
      for (const auto q : subset)
        if (!pairs.contains(p, q)) return false;
  return true;
}

}  // namespace oracle

namespace gen {

depsynt::Bdd random_bdd(Rng& rng, depsynt::BddManager& mgr, const std::vector<depsynt::VarId>& vars,
                        double density) {
  std::bernoulli_distribution bit(density);
  depsynt::Bdd f = mgr.bdd_false();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << vars.size()); ++m) {
    if (!bit(rng)) continue;
    std::vector<depsynt::Literal> lits;
    for (std::size_t k = 0; k < vars.size(); ++k) lits.push_back({vars[k], static_cast<bool>((m >> k) & 1u)});
    f |= mgr.cube(lits);
  }
  return f;
}

depsynt::Nba random_nba(Rng& rng, std::size_t max_states, std::size_t inputs, std::size_t outputs, bool plant) {
  auto mgr = std::make_shared<depsynt::BddManager>();
  std::vector<depsynt::VarId> in, out;
  for (std::size_t k = 0; k < inputs; ++k) in.push_back(mgr->new_var("i" + std::to_string(k)));
  for (std::size_t k = 0; k < outputs; ++k) out.push_back(mgr->new_var("o" + std::to_string(k)));
  std::vector<depsynt::VarId> all = in;
  all.insert(all.end(), out.begin(), out.end());
  std::uniform_int_distribution<std::size_t> size(1, max_states);
  std::bernoulli_distribution edge(0.45), acc(0.4);
  std::uniform_real_distribution<double> density(0.15, 0.6);
  while (true) {
    depsynt::Nba a(mgr, in, out);
    const std::size_t n = size(rng);
    for (std::size_t s = 0; s < n; ++s) a.add_state(acc(rng));
    a.set_initial(0);
    depsynt::Bdd tie = mgr->bdd_true();
    if (plant && !out.empty()) {
      std::vector<depsynt::VarId> rest(all.begin(), all.end() - 1);
      tie = !(mgr->var(out.back()) ^ random_bdd(rng, *mgr, rest, 0.5));
    }
    for (depsynt::StateId p = 0; p < n; ++p)
      for (depsynt::StateId q = 0; q < n; ++q)
        if (edge(rng)) a.add_edge(p, q, random_bdd(rng, *mgr, all, density(rng)) & tie);
    auto t = depsynt::trim(a);
    if (!t.empty()) return t;
  }
}

depsynt::ParityGame random_game(Rng& rng, std::size_t nodes, int max_priority) {
  depsynt::ParityGame g;
  std::uniform_int_distribution<int> owner(0, 1), prio(0, max_priority);
  std::uniform_int_distribution<std::size_t> degree(1, 3), target(0, nodes - 1);
  for (std::size_t v = 0; v < nodes; ++v) g.add_node(owner(rng), prio(rng));
  for (std::size_t v = 0; v < nodes; ++v) {
    const std::size_t d = std::min(degree(rng), nodes);
    while (g.succ[v].size() < d) {
      const auto w = static_cast<std::uint32_t>(target(rng));
      if (std::find(g.succ[v].begin(), g.succ[v].end(), w) == g.succ[v].end()) g.succ[v].push_back(w);
    }
  }
  return g;
}

depsynt::FormulaPtr random_formula(Rng& rng, const std::vector<std::string>& atoms, int depth) {
  using depsynt::FormulaKind;
  std::uniform_int_distribution<std::size_t> atom(0, atoms.size() - 1);
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 11);
  const int c = pick(rng);
  switch (c) {
    case 0: {
      std::uniform_int_distribution<int> leaf(0, 9);
      const int l = leaf(rng);
      if (l == 0) return depsynt::make_true();
      if (l == 1) return depsynt::make_false();
      return depsynt::make_atom(atoms[atom(rng)]);
    }
    case 1: return depsynt::make_not(random_formula(rng, atoms, depth - 1));
    case 2: return depsynt::make_unary(FormulaKind::Next, random_formula(rng, atoms, depth - 1));
    case 3: return depsynt::make_unary(FormulaKind::Finally, random_formula(rng, atoms, depth - 1));
    case 4: return depsynt::make_unary(FormulaKind::Globally, random_formula(rng, atoms, depth - 1));
    default: {
      static constexpr FormulaKind kinds[] = {FormulaKind::And,  FormulaKind::Or,    FormulaKind::Implies,
                                              FormulaKind::Iff,  FormulaKind::Until, FormulaKind::Release,
                                              FormulaKind::And};
      return depsynt::make_binary(kinds[c - 5], random_formula(rng, atoms, depth - 1),
                                  random_formula(rng, atoms, depth - 1));
    }
  }
}

oracle::Word random_word(Rng& rng, std::size_t length, std::size_t bits) {
  std::uniform_int_distribution<std::uint64_t> letter(0, (std::uint64_t{1} << bits) - 1);
  oracle::Word w(length);
  for (auto& l : w) l = letter(rng);
  return w;
}

}  // namespace gen
