#include <algorithm>
#include <deque>

#include "depsynt/error.hpp"
#include "depsynt/nondep_synth.hpp"

namespace depsynt {

std::uint32_t ParityGame::add_node(int who, int prio) {
  if (who != 0 && who != 1) throw Error("node owner must be 0 or 1");
  if (prio < 0) throw Error("priorities must be non-negative");
  owner.push_back(who);
  priority.push_back(prio);
  succ.emplace_back();
  return static_cast<std::uint32_t>(owner.size() - 1);
}

namespace {

class Zielonka {
 public:
  explicit Zielonka(const ParityGame& g) : g_(g), pred_(g.size()), strategy_(g.size(), -1) {
    for (std::uint32_t v = 0; v < g.size(); ++v) {
      if (g.succ[v].empty()) throw Error("parity game node " + std::to_string(v) + " has no successor");
      for (const auto w : g.succ[v]) {
        if (w >= g.size()) throw Error("parity game edge out of range");
        pred_[w].push_back(v);
      }
    }
  }

  GameSolution run() {
    std::vector<char> all(g_.size(), 1);
    auto [w0, w1] = solve(all);
    GameSolution sol;
    sol.winner.assign(g_.size(), 0);
    sol.strategy.assign(g_.size(), -1);
    for (std::uint32_t v = 0; v < g_.size(); ++v) {
      sol.winner[v] = w1[v] ? 1 : 0;
      if (sol.winner[v] == g_.owner[v]) sol.strategy[v] = strategy_[v];
    }
    return sol;
  }

 private:
  using Set = std::vector<char>;

  // Attractor of `target` for `player` inside `sub`; records the attracting
  // move for the player's own nodes outside the target.
  Set attractor(const Set& sub, const Set& target, int player) {
    Set attr(g_.size(), 0);
    std::vector<int> count(g_.size(), 0);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t v = 0; v < g_.size(); ++v) {
      if (!sub[v]) continue;
      for (const auto w : g_.succ[v])
        if (sub[w]) ++count[v];
      if (target[v]) {
        attr[v] = 1;
        queue.push_back(v);
      }
    }
    while (!queue.empty()) {
      const auto w = queue.front();
      queue.pop_front();
      for (const auto v : pred_[w]) {
        if (!sub[v] || attr[v]) continue;
        if (g_.owner[v] == player) {
          attr[v] = 1;
          strategy_[v] = static_cast<int>(w);
          queue.push_back(v);
        } else if (--count[v] == 0) {
          attr[v] = 1;
          queue.push_back(v);
        }
      }
    }
    return attr;
  }

  std::pair<Set, Set> solve(const Set& sub) {
    Set w0(g_.size(), 0), w1(g_.size(), 0);
    int p = -1;
    for (std::uint32_t v = 0; v < g_.size(); ++v)
      if (sub[v]) p = std::max(p, g_.priority[v]);
    if (p < 0) return {w0, w1};
    const int alpha = p % 2;
    Set top(g_.size(), 0);
    for (std::uint32_t v = 0; v < g_.size(); ++v)
      if (sub[v] && g_.priority[v] == p) top[v] = 1;
    const Set a = attractor(sub, top, alpha);
    Set rest(g_.size(), 0);
    for (std::uint32_t v = 0; v < g_.size(); ++v) rest[v] = sub[v] && !a[v];
    auto [r0, r1] = solve(rest);
    const Set& opp_win = alpha == 0 ? r1 : r0;
    const bool opp_empty = std::none_of(opp_win.begin(), opp_win.end(), [](char c) { return c != 0; });
    if (opp_empty) {
      for (std::uint32_t v = 0; v < g_.size(); ++v) {
        if (!sub[v]) continue;
        (alpha == 0 ? w0 : w1)[v] = 1;
        if (top[v] && g_.owner[v] == alpha) {
          for (const auto w : g_.succ[v])
            if (sub[w]) {
              strategy_[v] = static_cast<int>(w);
              break;
            }
        }
      }
      return {w0, w1};
    }
    const Set b = attractor(sub, opp_win, 1 - alpha);
    Set rest2(g_.size(), 0);
    for (std::uint32_t v = 0; v < g_.size(); ++v) rest2[v] = sub[v] && !b[v];
    auto [s0, s1] = solve(rest2);
    for (std::uint32_t v = 0; v < g_.size(); ++v) {
      if (!sub[v]) continue;
      if (b[v]) {
        (alpha == 0 ? w1 : w0)[v] = 1;
      } else {
        w0[v] = s0[v];
        w1[v] = s1[v];
      }
    }
    return {w0, w1};
  }

  const ParityGame& g_;
  std::vector<std::vector<std::uint32_t>> pred_;
  std::vector<int> strategy_;
};

}  // namespace

GameSolution solve_parity(const ParityGame& g) { return Zielonka(g).run(); }

DpaGame build_game(const Dpa& d) {
  DpaGame dg;
  dg.dpa_states = d.state_count();
  dg.input_letters = std::size_t{1} << d.inputs.size();
  const std::size_t output_letters = std::size_t{1} << d.outputs.size();
  auto& g = dg.game;
  for (std::uint32_t s = 0; s < d.state_count(); ++s) g.add_node(1, d.priority[s]);
  for (std::uint32_t s = 0; s < d.state_count(); ++s)
    for (std::uint64_t in = 0; in < dg.input_letters; ++in) {
      const auto node = g.add_node(0, d.priority[s]);
      g.succ[s].push_back(node);
      for (std::uint64_t out = 0; out < output_letters; ++out)
        g.succ[node].push_back(d.delta[s][in | (out << d.inputs.size())]);
    }
  return dg;
}

MealyTY MealyTY::trivial(std::vector<std::string> inputs) {
  MealyTY m;
  const std::size_t letters = std::size_t{1} << inputs.size();
  m.inputs = std::move(inputs);
  m.next.assign(1, std::vector<std::uint32_t>(letters, 0));
  m.out.assign(1, std::vector<std::uint64_t>(letters, 0));
  return m;
}

MealyTY extract_t_y(const Dpa& d, const DpaGame& g, const GameSolution& sol) {
  if (sol.winner.at(g.env_node(d.initial)) != 0) throw Error("cannot extract a strategy: specification is unrealizable");
  MealyTY m;
  m.inputs = d.inputs;
  m.outputs = d.outputs;
  const std::size_t output_letters = std::size_t{1} << d.outputs.size();
  std::vector<std::int64_t> id(d.state_count(), -1);
  std::vector<std::uint32_t> order{d.initial};
  id[d.initial] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto s = order[k];
    std::vector<std::uint32_t> next_row(g.input_letters);
    std::vector<std::uint64_t> out_row(g.input_letters);
    for (std::uint64_t in = 0; in < g.input_letters; ++in) {
      const int choice = sol.strategy.at(g.sys_node(s, in));
      if (choice < 0) throw InvariantViolation("winning strategy leaves the winning region");
      std::uint64_t out = 0;
      while (out < output_letters && d.delta[s][in | (out << d.inputs.size())] != static_cast<std::uint32_t>(choice))
        ++out;
      if (out == output_letters) throw InvariantViolation("strategy move does not match any output letter");
      const auto t = static_cast<std::uint32_t>(choice);
      if (id[t] < 0) {
        id[t] = static_cast<std::int64_t>(order.size());
        order.push_back(t);
      }
      next_row[in] = static_cast<std::uint32_t>(id[t]);
      out_row[in] = out;
    }
    m.next.push_back(std::move(next_row));
    m.out.push_back(std::move(out_row));
  }
  return m;
}

NondepResult synthesize_nondependent(const Nba& projected, const DeterminizeOptions& options) {
  NondepResult r;
  const Dpa d = determinize(projected, options);
  const DpaGame g = build_game(d);
  const GameSolution sol = solve_parity(g.game);
  r.dpa_states = d.state_count();
  r.game_nodes = g.game.size();
  r.realizable = sol.winner[g.env_node(d.initial)] == 0;
  if (r.realizable) r.machine = extract_t_y(d, g, sol);
  return r;
}

}  // namespace depsynt
