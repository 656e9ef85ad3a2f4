#include <deque>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "depsynt/error.hpp"
#include "depsynt/nba.hpp"

namespace depsynt {

Nba::Nba(std::shared_ptr<BddManager> mgr, std::vector<VarId> inputs, std::vector<VarId> outputs)
    : mgr_(std::move(mgr)), inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
  if (!mgr_) throw Error("automaton needs a BDD manager");
}

std::vector<VarId> Nba::variables() const {
  std::vector<VarId> vars = inputs_;
  vars.insert(vars.end(), outputs_.begin(), outputs_.end());
  return vars;
}

StateId Nba::add_state(bool accepting) {
  accepting_.push_back(accepting);
  out_.emplace_back();
  in_.emplace_back();
  return static_cast<StateId>(accepting_.size() - 1);
}

void Nba::set_accepting(StateId s, bool accepting) { accepting_.at(s) = accepting; }

void Nba::set_initial(StateId s) {
  if (s >= state_count()) throw Error("initial state out of range");
  initial_ = s;
}

void Nba::add_edge(StateId src, StateId dst, Bdd label) {
  if (src >= state_count() || dst >= state_count()) throw Error("edge endpoint out of range");
  if (label.manager() != mgr_.get()) throw BddError("edge label belongs to a different manager");
  if (label.is_false()) return;
  if (auto it = edge_index_.find({src, dst}); it != edge_index_.end()) {
    edges_[it->second].label |= label;
    return;
  }
  edge_index_.emplace(std::pair{src, dst}, edges_.size());
  out_[src].push_back(edges_.size());
  in_[dst].push_back(edges_.size());
  edges_.push_back({src, dst, label});
}

std::optional<std::size_t> Nba::find_edge(StateId src, StateId dst) const {
  if (auto it = edge_index_.find({src, dst}); it != edge_index_.end()) return it->second;
  return std::nullopt;
}

Assignment Nba::letter_assignment(std::uint64_t letter) const {
  Assignment a(mgr_->var_count(), false);
  std::size_t k = 0;
  for (const auto v : inputs_) a[v.index] = (letter >> k++) & 1u;
  for (const auto v : outputs_) a[v.index] = (letter >> k++) & 1u;
  return a;
}

std::string Nba::to_dot() const {
  std::ostringstream out;
  out << "digraph nba {\n  rankdir=LR;\n  init [shape=point];\n";
  for (StateId s = 0; s < state_count(); ++s)
    out << "  q" << s << " [shape=" << (accepting_[s] ? "doublecircle" : "circle") << "];\n";
  if (!empty()) out << "  init -> q" << initial_ << ";\n";
  for (const auto& e : edges_) {
    std::string label;
    for (const auto& cube : mgr_->cubes(e.label)) {
      if (!label.empty()) label += " | ";
      std::string term;
      for (const auto& lit : cube) {
        if (!term.empty()) term += "&";
        term += (lit.value ? "" : "!") + mgr_->var_name(lit.var);
      }
      label += term.empty() ? "t" : term;
    }
    out << "  q" << e.src << " -> q" << e.dst << " [label=\"" << label << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::pair<std::vector<VarId>, std::vector<VarId>> declare_variables(BddManager& mgr, const Spec& spec) {
  auto get = [&](const std::string& name) {
    if (auto v = mgr.find_var(name)) return *v;
    return mgr.new_var(name);
  };
  std::vector<VarId> in, out;
  for (const auto& n : spec.inputs) in.push_back(get(n));
  for (const auto& n : spec.outputs) out.push_back(get(n));
  return {in, out};
}

Bdd formula_bdd(BddManager& mgr, const FormulaPtr& f) {
  std::unordered_map<const Formula*, Bdd> memo;
  std::function<Bdd(const Formula*)> rec = [&](const Formula* g) -> Bdd {
    if (auto it = memo.find(g); it != memo.end()) return it->second;
    Bdd r;
    switch (g->kind) {
      case FormulaKind::True:
        r = mgr.bdd_true();
        break;
      case FormulaKind::False:
        r = mgr.bdd_false();
        break;
      case FormulaKind::Atom: {
        auto v = mgr.find_var(g->name);
        if (!v) throw SpecError("undeclared atom '" + g->name + "'", 0, 0);
        r = mgr.var(*v);
        break;
      }
      case FormulaKind::Ref:
        r = rec(g->lhs.get());
        break;
      case FormulaKind::Not:
        r = !rec(g->lhs.get());
        break;
      case FormulaKind::And:
        r = rec(g->lhs.get()) & rec(g->rhs.get());
        break;
      case FormulaKind::Or:
        r = rec(g->lhs.get()) | rec(g->rhs.get());
        break;
      case FormulaKind::Implies:
        r = mgr.apply(BoolOp::Implies, rec(g->lhs.get()), rec(g->rhs.get()));
        break;
      case FormulaKind::Iff:
        r = mgr.apply(BoolOp::Iff, rec(g->lhs.get()), rec(g->rhs.get()));
        break;
      default:
        throw Error("temporal operator in a propositional context");
    }
    memo.emplace(g, r);
    return r;
  };
  return rec(f.get());
}

Nba trim(const Nba& a) {
  Nba result(a.manager_ptr(), a.inputs(), a.outputs());
  const std::size_t n = a.state_count();
  if (n == 0) return result;

  std::vector<bool> reach(n, false);
  std::deque<StateId> queue{a.initial()};
  reach[a.initial()] = true;
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    for (const auto e : a.out_edges(s)) {
      const auto d = a.edges()[e].dst;
      if (!reach[d]) {
        reach[d] = true;
        queue.push_back(d);
      }
    }
  }

  // Tarjan SCCs over the reachable part (iterative).
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<StateId> stack;
  int counter = 0;
  int comps = 0;
  for (StateId root = 0; root < n; ++root) {
    if (!reach[root] || index[root] >= 0) continue;
    std::vector<std::pair<StateId, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      const auto& outs = a.out_edges(v);
      if (i < outs.size()) {
        const auto w = a.edges()[outs[i++]].dst;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        StateId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
      const auto done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }

  // A state is a good seed when it is accepting and lies on a cycle.
  std::vector<std::size_t> comp_size(comps, 0);
  for (StateId s = 0; s < n; ++s)
    if (comp[s] >= 0) ++comp_size[comp[s]];
  std::vector<bool> good(n, false);
  std::deque<StateId> back;
  for (StateId s = 0; s < n; ++s) {
    if (!reach[s] || !a.accepting(s)) continue;
    bool cyclic = comp_size[comp[s]] > 1 || a.find_edge(s, s).has_value();
    if (cyclic) {
      good[s] = true;
      back.push_back(s);
    }
  }
  while (!back.empty()) {
    const auto s = back.front();
    back.pop_front();
    for (const auto e : a.in_edges(s)) {
      const auto p = a.edges()[e].src;
      if (reach[p] && !good[p]) {
        good[p] = true;
        back.push_back(p);
      }
    }
  }
  if (!good[a.initial()]) return result;

  std::vector<StateId> renum(n, UINT32_MAX);
  std::vector<StateId> order{a.initial()};
  renum[a.initial()] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (const auto e : a.out_edges(order[k])) {
      const auto d = a.edges()[e].dst;
      if (good[d] && renum[d] == UINT32_MAX) {
        renum[d] = static_cast<StateId>(order.size());
        order.push_back(d);
      }
    }
  }
  for (const auto s : order) result.add_state(a.accepting(s));
  result.set_initial(0);
  for (const auto s : order)
    for (const auto e : a.out_edges(s)) {
      const auto& edge = a.edges()[e];
      if (good[edge.dst]) result.add_edge(renum[s], renum[edge.dst], edge.label);
    }
  return result;
}

bool same_graph(const Nba& a, const Nba& b) {
  if (a.state_count() != b.state_count() || a.edges().size() != b.edges().size()) return false;
  if (!a.empty() && a.initial() != b.initial()) return false;
  for (StateId s = 0; s < a.state_count(); ++s)
    if (a.accepting(s) != b.accepting(s)) return false;
  for (const auto& e : a.edges()) {
    auto other = b.find_edge(e.src, e.dst);
    if (!other || !(b.edges()[*other].label == e.label)) return false;
  }
  return true;
}

}  // namespace depsynt
