#include <algorithm>
#include <deque>
#include <map>
#include <tuple>
#include <unordered_map>

#include "depsynt/error.hpp"
#include "depsynt/nba.hpp"

namespace depsynt {
namespace {

// Negation normal form with maximal propositional subformulas folded into
// BDD leaves. Nodes are hash-consed so equal obligations compare by id.
enum class Kind : std::uint8_t { True, False, Prop, And, Or, Next, Until, Release };

struct Node {
  Kind kind;
  Bdd prop;
  std::vector<std::uint32_t> kids;
};

class Nnf {
 public:
  explicit Nnf(BddManager& mgr) : mgr_(mgr) {
    true_ = intern(Kind::True, mgr.bdd_true(), {});
    false_ = intern(Kind::False, mgr.bdd_false(), {});
  }

  const Node& node(std::uint32_t id) const { return nodes_[id]; }
  std::uint32_t true_id() const { return true_; }

  std::uint32_t build(const Formula* f, bool neg) {
    const auto key = std::pair{f, neg};
    if (auto it = nnf_memo_.find(key); it != nnf_memo_.end()) return it->second;
    const std::uint32_t r = build_uncached(f, neg);
    nnf_memo_.emplace(key, r);
    return r;
  }

 private:
  std::uint32_t intern(Kind kind, Bdd prop, std::vector<std::uint32_t> kids) {
    auto key = std::tuple{static_cast<int>(kind), prop.id(), kids};
    if (auto it = table_.find(key); it != table_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({kind, prop, std::move(kids)});
    table_.emplace(std::move(key), id);
    return id;
  }

  std::uint32_t prop(Bdd b) {
    if (b.is_true()) return true_;
    if (b.is_false()) return false_;
    return intern(Kind::Prop, b, {});
  }

  std::uint32_t junction(Kind kind, const std::vector<std::uint32_t>& parts) {
    const bool is_and = kind == Kind::And;
    const std::uint32_t unit = is_and ? true_ : false_;
    const std::uint32_t zero = is_and ? false_ : true_;
    std::vector<std::uint32_t> kids;
    Bdd props = mgr_.constant(is_and);
    bool has_prop = false;
    std::vector<std::uint32_t> stack(parts.rbegin(), parts.rend());
    while (!stack.empty()) {
      const auto p = stack.back();
      stack.pop_back();
      const Node& n = nodes_[p];
      if (p == zero) return zero;
      if (p == unit) continue;
      if (n.kind == kind) {
        stack.insert(stack.end(), n.kids.rbegin(), n.kids.rend());
      } else if (n.kind == Kind::Prop) {
        props = is_and ? (props & n.prop) : (props | n.prop);
        has_prop = true;
      } else {
        kids.push_back(p);
      }
    }
    if (has_prop) {
      const auto pid = prop(props);
      if (pid == zero) return zero;
      if (pid != unit) kids.push_back(pid);
    }
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    if (kids.empty()) return unit;
    if (kids.size() == 1) return kids[0];
    return intern(kind, mgr_.bdd_true(), std::move(kids));
  }

  std::uint32_t next(std::uint32_t a) {
    if (a == true_ || a == false_) return a;
    return intern(Kind::Next, mgr_.bdd_true(), {a});
  }

  std::uint32_t until(std::uint32_t a, std::uint32_t b) {
    if (b == true_ || b == false_ || a == false_) return b;
    return intern(Kind::Until, mgr_.bdd_true(), {a, b});
  }

  std::uint32_t release(std::uint32_t a, std::uint32_t b) {
    if (b == true_ || b == false_ || a == true_) return b;
    return intern(Kind::Release, mgr_.bdd_true(), {a, b});
  }

  bool propositional(const Formula* f) {
    if (auto it = prop_memo_.find(f); it != prop_memo_.end()) return it->second;
    bool r = true;
    switch (f->kind) {
      case FormulaKind::True:
      case FormulaKind::False:
      case FormulaKind::Atom:
        break;
      case FormulaKind::Ref:
      case FormulaKind::Not:
        r = propositional(f->lhs.get());
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies:
      case FormulaKind::Iff:
        r = propositional(f->lhs.get()) && propositional(f->rhs.get());
        break;
      default:
        r = false;
    }
    prop_memo_.emplace(f, r);
    return r;
  }

  Bdd bdd(const Formula* f) {
    if (auto it = bdd_memo_.find(f); it != bdd_memo_.end()) return it->second;
    Bdd r;
    switch (f->kind) {
      case FormulaKind::True:
        r = mgr_.bdd_true();
        break;
      case FormulaKind::False:
        r = mgr_.bdd_false();
        break;
      case FormulaKind::Atom: {
        auto v = mgr_.find_var(f->name);
        if (!v) throw SpecError("undeclared atom '" + f->name + "'", 0, 0);
        r = mgr_.var(*v);
        break;
      }
      case FormulaKind::Ref:
        r = bdd(f->lhs.get());
        break;
      case FormulaKind::Not:
        r = !bdd(f->lhs.get());
        break;
      case FormulaKind::And:
        r = bdd(f->lhs.get()) & bdd(f->rhs.get());
        break;
      case FormulaKind::Or:
        r = bdd(f->lhs.get()) | bdd(f->rhs.get());
        break;
      case FormulaKind::Implies:
        r = mgr_.apply(BoolOp::Implies, bdd(f->lhs.get()), bdd(f->rhs.get()));
        break;
      case FormulaKind::Iff:
        r = mgr_.apply(BoolOp::Iff, bdd(f->lhs.get()), bdd(f->rhs.get()));
        break;
      default:
        throw Error("temporal operator in a propositional context");
    }
    bdd_memo_.emplace(f, r);
    return r;
  }

  std::uint32_t build_uncached(const Formula* f, bool neg) {
    if (propositional(f)) {
      const Bdd b = bdd(f);
      return prop(neg ? !b : b);
    }
    const Formula* l = f->lhs.get();
    const Formula* r = f->rhs.get();
    switch (f->kind) {
      case FormulaKind::Ref:
        return build(l, neg);
      case FormulaKind::Not:
        return build(l, !neg);
      case FormulaKind::And:
        return junction(neg ? Kind::Or : Kind::And, {build(l, neg), build(r, neg)});
      case FormulaKind::Or:
        return junction(neg ? Kind::And : Kind::Or, {build(l, neg), build(r, neg)});
      case FormulaKind::Implies:
        return neg ? junction(Kind::And, {build(l, false), build(r, true)})
                   : junction(Kind::Or, {build(l, true), build(r, false)});
      case FormulaKind::Iff: {
        const auto a = build(l, false);
        const auto na = build(l, true);
        const auto b = build(r, false);
        const auto nb = build(r, true);
        if (neg)
          return junction(Kind::Or, {junction(Kind::And, {a, nb}), junction(Kind::And, {na, b})});
        return junction(Kind::Or, {junction(Kind::And, {a, b}), junction(Kind::And, {na, nb})});
      }
      case FormulaKind::Next:
        return next(build(l, neg));
      case FormulaKind::Finally:
        return neg ? release(false_, build(l, true)) : until(true_, build(l, false));
      case FormulaKind::Globally:
        return neg ? until(true_, build(l, true)) : release(false_, build(l, false));
      case FormulaKind::Until:
        return neg ? release(build(l, true), build(r, true)) : until(build(l, false), build(r, false));
      case FormulaKind::Release:
        return neg ? until(build(l, true), build(r, true)) : release(build(l, false), build(r, false));
      default:
        throw Error("unexpected formula node");
    }
  }

  BddManager& mgr_;
  std::vector<Node> nodes_;
  std::map<std::tuple<int, std::uint32_t, std::vector<std::uint32_t>>, std::uint32_t> table_;
  std::map<std::pair<const Formula*, bool>, std::uint32_t> nnf_memo_;
  std::unordered_map<const Formula*, bool> prop_memo_;
  std::unordered_map<const Formula*, Bdd> bdd_memo_;
  std::uint32_t true_ = 0;
  std::uint32_t false_ = 0;
};

using Obligations = std::vector<std::uint32_t>;  // sorted node ids

struct Cover {
  Bdd label;
  Obligations next;
  std::vector<std::uint32_t> pending;  // postponed untils, sorted
};

class Tableau {
 public:
  Tableau(BddManager& mgr, Nnf& nnf) : mgr_(mgr), nnf_(nnf) {}

  std::vector<Cover> expand(const Obligations& state) {
    std::vector<Cover> raw;
    Branch start{state, {}, mgr_.bdd_true(), {}, {}};
    run(std::move(start), raw);
    // Merge covers that only differ by label.
    std::map<std::pair<Obligations, std::vector<std::uint32_t>>, Bdd> merged;
    for (auto& c : raw) {
      auto key = std::pair{c.next, c.pending};
      auto [it, inserted] = merged.try_emplace(key, c.label);
      if (!inserted) it->second |= c.label;
    }
    std::vector<Cover> result;
    for (auto& [key, label] : merged) result.push_back({label, key.first, key.second});
    return result;
  }

 private:
  struct Branch {
    std::vector<std::uint32_t> todo;
    std::vector<std::uint32_t> done;  // sorted
    Bdd label;
    std::vector<std::uint32_t> next;
    std::vector<std::uint32_t> pending;
  };

  static bool contains(const std::vector<std::uint32_t>& sorted, std::uint32_t x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
  }
  static void insert(std::vector<std::uint32_t>& sorted, std::uint32_t x) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
    if (it == sorted.end() || *it != x) sorted.insert(it, x);
  }

  void run(Branch b, std::vector<Cover>& out) {
    while (!b.todo.empty()) {
      const auto f = b.todo.back();
      b.todo.pop_back();
      if (contains(b.done, f)) continue;
      insert(b.done, f);
      const Node& n = nnf_.node(f);
      switch (n.kind) {
        case Kind::True:
          break;
        case Kind::False:
          return;
        case Kind::Prop:
          b.label &= n.prop;
          if (b.label.is_false()) return;
          break;
        case Kind::And:
          b.todo.insert(b.todo.end(), n.kids.begin(), n.kids.end());
          break;
        case Kind::Next:
          insert(b.next, n.kids[0]);
          break;
        case Kind::Or: {
          for (std::size_t k = 0; k + 1 < n.kids.size(); ++k) {
            Branch alt = b;
            alt.todo.push_back(n.kids[k]);
            run(std::move(alt), out);
          }
          b.todo.push_back(n.kids.back());
          break;
        }
        case Kind::Until: {
          Branch later = b;
          later.todo.push_back(n.kids[0]);
          insert(later.next, f);
          insert(later.pending, f);
          run(std::move(later), out);
          b.todo.push_back(n.kids[1]);
          break;
        }
        case Kind::Release: {
          Branch later = b;
          later.todo.push_back(n.kids[1]);
          insert(later.next, f);
          run(std::move(later), out);
          b.todo.push_back(n.kids[0]);
          b.todo.push_back(n.kids[1]);
          break;
        }
      }
    }
    out.push_back({b.label, b.next, b.pending});
  }

  BddManager& mgr_;
  Nnf& nnf_;
};

}  // namespace

Nba translate(const Spec& spec, std::shared_ptr<BddManager> mgr, const TranslateOptions& options) {
  if (!mgr) mgr = std::make_shared<BddManager>();
  auto [inputs, outputs] = declare_variables(*mgr, spec);
  Nnf nnf(*mgr);
  const auto root = nnf.build(spec.formula.get(), false);

  // Until subformulas reachable from the root define the acceptance sets.
  std::map<std::uint32_t, std::size_t> acc_index;
  {
    std::vector<std::uint32_t> stack{root};
    std::vector<bool> seen;
    while (!stack.empty()) {
      const auto id = stack.back();
      stack.pop_back();
      if (id >= seen.size()) seen.resize(id + 1, false);
      if (seen[id]) continue;
      seen[id] = true;
      const Node& n = nnf.node(id);
      if (n.kind == Kind::Until) acc_index.emplace(id, acc_index.size());
      stack.insert(stack.end(), n.kids.begin(), n.kids.end());
    }
  }
  const std::size_t k = acc_index.size();

  struct Transition {
    Bdd label;
    std::size_t dst;
    std::vector<bool> acc;
  };
  Tableau tableau(*mgr, nnf);
  std::vector<Obligations> states;
  std::map<Obligations, std::size_t> state_ids;
  std::vector<std::vector<Transition>> trans;
  auto state_of = [&](Obligations obl) {
    obl.erase(std::remove(obl.begin(), obl.end(), nnf.true_id()), obl.end());
    auto [it, inserted] = state_ids.try_emplace(obl, states.size());
    if (inserted) {
      if (states.size() >= options.state_cap)
        throw ResourceError("automaton exceeds the state cap of " + std::to_string(options.state_cap));
      states.push_back(obl);
    }
    return it->second;
  };
  state_of({root});
  for (std::size_t s = 0; s < states.size(); ++s) {
    std::vector<Transition> ts;
    for (auto& cover : tableau.expand(states[s])) {
      std::vector<bool> acc(k, true);
      for (const auto u : cover.pending) acc[acc_index.at(u)] = false;
      const auto dst = state_of(cover.next);
      ts.push_back({cover.label, dst, std::move(acc)});
    }
    trans.push_back(std::move(ts));
  }

  // Counter degeneralization: level j waits for acceptance set j; level k is
  // the accepting copy.
  Nba nba(mgr, inputs, outputs);
  std::map<std::pair<std::size_t, std::size_t>, StateId> ids;
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  auto id_of = [&](std::size_t q, std::size_t j) {
    auto [it, inserted] = ids.try_emplace({q, j}, 0);
    if (inserted) {
      if (nba.state_count() >= options.state_cap)
        throw ResourceError("automaton exceeds the state cap of " + std::to_string(options.state_cap));
      it->second = nba.add_state(j == k);
      queue.push_back({q, j});
    }
    return it->second;
  };
  nba.set_initial(id_of(0, 0));
  while (!queue.empty()) {
    const auto [q, j] = queue.front();
    queue.pop_front();
    const StateId src = ids.at({q, j});
    for (const auto& t : trans[q]) {
      std::size_t j2 = j == k ? 0 : j;
      while (j2 < k && t.acc[j2]) ++j2;
      const StateId dst = id_of(t.dst, j2);
      nba.add_edge(src, dst, t.label);
    }
  }
  return trim(nba);
}

}  // namespace depsynt
