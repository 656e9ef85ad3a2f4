#include <algorithm>
#include <atomic>
#include <deque>
#include <map>

#include "depsynt/error.hpp"
#include "depsynt/nondep_synth.hpp"

namespace depsynt {
namespace {

using StateSet = std::vector<StateId>;  // sorted

// Ordered tree of state sets. Node names are positions; a node's name is
// larger than its parent's, and among siblings smaller means older.
struct SafraTree {
  std::vector<int> parent;  // parent[0] == -1
  std::vector<StateSet> label;

  bool empty() const { return parent.empty(); }

  std::vector<std::uint32_t> key() const {
    std::vector<std::uint32_t> k;
    for (std::size_t v = 0; v < parent.size(); ++v) {
      k.push_back(static_cast<std::uint32_t>(parent[v] + 1));
      k.push_back(static_cast<std::uint32_t>(label[v].size()));
      k.insert(k.end(), label[v].begin(), label[v].end());
    }
    return k;
  }
};

StateSet set_difference(const StateSet& a, const StateSet& b) {
  StateSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

StateSet set_intersection(const StateSet& a, const StateSet& b) {
  StateSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

class Determinizer {
 public:
  Determinizer(const Nba& a, std::size_t letters) : a_(a), letters_(letters), n_(a.state_count()) {
    for (StateId q = 0; q < n_; ++q)
      if (a.accepting(q)) accepting_.push_back(q);
    succ_.assign(n_, std::vector<StateSet>(letters));
    std::vector<Assignment> assignments;
    for (std::uint64_t l = 0; l < letters; ++l) assignments.push_back(a.letter_assignment(l));
    for (std::size_t e = 0; e < a.edges().size(); ++e) {
      const auto& edge = a.edges()[e];
      for (std::uint64_t l = 0; l < letters; ++l)
        if (a.edge_enabled(e, assignments[l])) succ_[edge.src][l].push_back(edge.dst);
    }
    for (auto& row : succ_)
      for (auto& s : row) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
      }
  }

  SafraTree initial() const {
    SafraTree t;
    if (n_ == 0) return t;
    t.parent.push_back(-1);
    t.label.push_back({a_.initial()});
    return t;
  }

  // Returns the successor tree and the max-parity priority of the step.
  std::pair<SafraTree, int> step(const SafraTree& t, std::uint64_t letter) const {
    const int none = 1;
    if (t.empty()) return {t, none};
    const std::size_t m = t.parent.size();
    std::vector<int> parent = t.parent;
    std::vector<StateSet> label = t.label;

    // Spawn children holding the accepting states of each node.
    for (std::size_t v = 0; v < m; ++v) {
      auto acc = set_intersection(label[v], accepting_);
      if (!acc.empty()) {
        parent.push_back(static_cast<int>(v));
        label.push_back(std::move(acc));
      }
    }
    // Successors.
    const std::size_t total = parent.size();
    for (auto& l : label) {
      StateSet next;
      for (const auto q : l) next.insert(next.end(), succ_[q][letter].begin(), succ_[q][letter].end());
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      l = std::move(next);
    }
    // Horizontal merge: a state stays only in its oldest branch.
    for (std::size_t v = 1; v < total; ++v) {
      label[v] = set_intersection(label[v], label[parent[v]]);
      for (std::size_t w = 1; w < v && !label[v].empty(); ++w)
        if (parent[w] == parent[v]) label[v] = set_difference(label[v], label[w]);
    }
    std::vector<bool> removed(total, false);
    // Min-parity event: red (removed) node v gives 2v+1, green node v gives
    // 2v+2, so a removal of v outweighs v turning green.
    int event = -1;
    auto note = [&](int p) {
      if (event < 0 || p < event) event = p;
    };
    for (std::size_t v = 0; v < total; ++v) {
      if (label[v].empty()) {
        removed[v] = true;
        if (v < m) note(2 * static_cast<int>(v) + 1);
      }
    }
    if (removed[0]) return {SafraTree{}, none};
    // Vertical merge: a node covered by its children turns green and loses
    // its descendants.
    for (std::size_t v = 0; v < total; ++v) {
      if (removed[v]) continue;
      std::size_t covered = 0;
      bool has_child = false;
      for (std::size_t w = v + 1; w < total; ++w)
        if (!removed[w] && parent[w] == static_cast<int>(v)) {
          covered += label[w].size();
          has_child = true;
        }
      if (!has_child || covered != label[v].size()) continue;
      note(2 * static_cast<int>(v) + 2);
      for (std::size_t w = v + 1; w < total; ++w)
        if (!removed[w] && is_descendant(parent, w, v)) removed[w] = true;
    }
    // Compact names preserving order.
    SafraTree result;
    std::vector<int> rename(total, -1);
    for (std::size_t v = 0; v < total; ++v) {
      if (removed[v]) continue;
      rename[v] = static_cast<int>(result.parent.size());
      result.parent.push_back(v == 0 ? -1 : rename[parent[v]]);
      result.label.push_back(std::move(label[v]));
    }
    const int n2 = 2 * static_cast<int>(n_) + 2;
    return {std::move(result), event < 0 ? none : n2 - event};
  }

 private:
  // True when `w` is a proper descendant of `anc`.
  static bool is_descendant(const std::vector<int>& parent, std::size_t w, std::size_t anc) {
    int p = parent[w];
    while (p >= 0) {
      if (static_cast<std::size_t>(p) == anc) return true;
      p = parent[p];
    }
    return false;
  }

  const Nba& a_;
  std::size_t letters_;
  std::size_t n_;
  StateSet accepting_;
  std::vector<std::vector<StateSet>> succ_;
};

std::atomic<std::uint64_t> determinize_calls{0};

}  // namespace

std::uint64_t determinize_call_count() { return determinize_calls.load(); }

Dpa determinize(const Nba& a, const DeterminizeOptions& options) {
  ++determinize_calls;
  const std::size_t bits = a.letter_bits();
  if (bits >= 63 || (std::size_t{1} << bits) > options.letter_cap)
    throw ResourceError("alphabet of 2^" + std::to_string(bits) + " letters exceeds the cap of " +
                        std::to_string(options.letter_cap));
  const std::size_t letters = std::size_t{1} << bits;

  Dpa d;
  for (const auto v : a.inputs()) d.inputs.push_back(a.manager().var_name(v));
  for (const auto v : a.outputs()) d.outputs.push_back(a.manager().var_name(v));

  Determinizer det(a, letters);
  std::map<std::pair<std::vector<std::uint32_t>, int>, std::uint32_t> ids;
  std::vector<SafraTree> trees;
  std::deque<std::uint32_t> queue;
  auto id_of = [&](SafraTree t, int priority) {
    auto key = std::pair{t.key(), priority};
    auto [it, inserted] = ids.try_emplace(std::move(key), static_cast<std::uint32_t>(trees.size()));
    if (inserted) {
      if (trees.size() >= options.state_cap)
        throw ResourceError("parity automaton exceeds the state cap of " + std::to_string(options.state_cap));
      trees.push_back(std::move(t));
      d.priority.push_back(priority);
      d.delta.emplace_back();
      queue.push_back(it->second);
    }
    return it->second;
  };
  d.initial = id_of(det.initial(), 1);
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    std::vector<std::uint32_t> row(letters);
    for (std::uint64_t l = 0; l < letters; ++l) {
      auto [t, p] = det.step(trees[s], l);
      row[l] = id_of(std::move(t), p);
    }
    d.delta[s] = std::move(row);
  }
  return d;
}

bool dpa_accepts(const Dpa& d, const std::vector<std::uint64_t>& stem, const std::vector<std::uint64_t>& cycle) {
  if (cycle.empty()) throw Error("lasso cycle must be non-empty");
  std::uint32_t s = d.initial;
  for (const auto l : stem) s = d.delta[s][l];
  // Iterate the cycle until a (state, position) pair repeats.
  std::map<std::pair<std::uint32_t, std::size_t>, std::size_t> seen;
  std::vector<std::uint32_t> trace;
  std::size_t pos = 0;
  while (true) {
    auto [it, inserted] = seen.try_emplace({s, pos}, trace.size());
    if (!inserted) {
      int best = -1;
      for (std::size_t k = it->second; k < trace.size(); ++k) best = std::max(best, d.priority[trace[k]]);
      return best % 2 == 0;
    }
    trace.push_back(s);
    s = d.delta[s][cycle[pos]];
    pos = (pos + 1) % cycle.size();
  }
}

}  // namespace depsynt
