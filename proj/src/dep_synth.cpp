#include "depsynt/dep_synth.hpp"

#include <algorithm>
#include <map>

#include "depsynt/dependency.hpp"
#include "depsynt/error.hpp"

namespace depsynt {

ExplicitTX build_explicit_t_x(const Nba& a, std::span<const VarId> xs, std::size_t letter_cap,
                              std::size_t state_cap) {
  auto& mgr = a.manager();
  std::vector<VarId> ys = a.inputs();
  for (const auto v : remaining_outputs(a, xs)) ys.push_back(v);
  if (ys.size() >= 63 || (std::size_t{1} << ys.size()) > letter_cap)
    throw ResourceError("too many letters for the explicit subset machine");

  ExplicitTX t;
  for (const auto v : ys) t.inputs.push_back(mgr.var_name(v));
  for (const auto v : xs) t.outputs.push_back(mgr.var_name(v));
  const std::size_t letters = t.letter_count();

  std::map<std::vector<StateId>, std::int64_t> ids;
  auto id_of = [&](std::vector<StateId> u) {
    auto [it, inserted] = ids.try_emplace(u, static_cast<std::int64_t>(t.states.size()));
    if (inserted) {
      if (t.states.size() >= state_cap) throw ResourceError("subset machine exceeds the state cap");
      t.states.push_back(std::move(u));
    }
    return it->second;
  };
  id_of(a.empty() ? std::vector<StateId>{} : std::vector<StateId>{a.initial()});

  std::vector<Literal> lits(ys.size());
  for (std::size_t s = 0; s < t.states.size(); ++s) {
    std::vector<std::int64_t> next_row(letters, -1);
    std::vector<std::uint64_t> out_row(letters, 0);
    for (std::uint64_t l = 0; l < letters; ++l) {
      for (std::size_t k = 0; k < ys.size(); ++k) lits[k] = {ys[k], static_cast<bool>((l >> k) & 1u)};
      std::vector<StateId> succ;
      Bdd witness = mgr.bdd_false();
      for (const auto q : t.states[s]) {
        for (const auto e : a.out_edges(q)) {
          const Bdd r = mgr.restrict(a.edges()[e].label, lits);
          if (r.is_false()) continue;
          succ.push_back(a.edges()[e].dst);
          witness |= r;
        }
      }
      if (succ.empty()) continue;
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());

      // The admissible X values must form a single minterm.
      std::uint64_t out = 0;
      std::vector<Literal> minterm;
      const auto cube = mgr.pick_cube(witness);
      for (std::size_t k = 0; k < xs.size(); ++k) {
        bool value = false;
        for (const auto& lit : *cube)
          if (lit.var == xs[k]) value = lit.value;
        if (value) out |= std::uint64_t{1} << k;
        minterm.push_back({xs[k], value});
      }
      if (mgr.is_sat(witness & !mgr.cube(minterm)))
        throw InvariantViolation("output set is not dependent: two values admitted from subset state " +
                                 std::to_string(s));
      next_row[l] = id_of(std::move(succ));
      out_row[l] = out;
    }
    t.next.push_back(std::move(next_row));
    t.out.push_back(std::move(out_row));
  }
  return t;
}

std::vector<AigLit> build_delta_circuit(BddToAig& compiler, Aig& aig, const Nba& a, std::span<const VarId> xs,
                                        const std::vector<AigLit>& p) {
  if (p.size() != a.state_count()) throw Error("one state literal per automaton state expected");
  std::vector<AigLit> next(a.state_count(), kAigFalse);
  for (const auto& e : a.edges()) {
    const AigLit label = compiler.compile(a.manager().exists(e.label, xs));
    next[e.dst] = aig.make_or(next[e.dst], aig.make_and(p[e.src], label));
  }
  return next;
}

std::vector<AigLit> build_lambda_circuit(BddToAig& compiler, Aig& aig, const Nba& a, std::span<const VarId> xs,
                                         const std::vector<AigLit>& p) {
  if (p.size() != a.state_count()) throw Error("one state literal per automaton state expected");
  auto& mgr = a.manager();
  // B[X := F] equals exists X. B for Skolem functions F, so the guard is
  // compiled from the quantified label; both depend only on the label.
  struct Witness {
    AigLit guard;
    std::vector<AigLit> f;
  };
  std::map<std::uint32_t, Witness> by_label;
  std::vector<AigLit> x(xs.size(), kAigFalse);
  for (const auto& e : a.edges()) {
    auto it = by_label.find(e.label.id());
    if (it == by_label.end()) {
      Witness w{compiler.compile(mgr.exists(e.label, xs)), {}};
      for (const auto& f : mgr.skolem(e.label, xs)) w.f.push_back(compiler.compile(f));
      it = by_label.emplace(e.label.id(), std::move(w)).first;
    }
    const AigLit enabled = aig.make_and(p[e.src], it->second.guard);
    for (std::size_t k = 0; k < xs.size(); ++k) x[k] = aig.make_or(x[k], aig.make_and(enabled, it->second.f[k]));
  }
  return x;
}

Aig build_tx_circuit(const Nba& a, std::span<const VarId> xs) {
  auto& mgr = a.manager();
  Aig aig;
  BddToAig compiler(mgr, aig);
  for (const auto v : a.inputs()) compiler.bind(v, aig.add_input(mgr.var_name(v)));
  for (const auto v : remaining_outputs(a, xs)) compiler.bind(v, aig.add_input(mgr.var_name(v)));
  std::vector<AigLit> p;
  for (StateId s = 0; s < a.state_count(); ++s) {
    const auto idx = aig.add_latch("p" + std::to_string(s), s == a.initial());
    p.push_back(aig.latches()[idx].lit);
  }
  const auto next = build_delta_circuit(compiler, aig, a, xs, p);
  const auto x = build_lambda_circuit(compiler, aig, a, xs, p);
  AigLit live = kAigFalse;
  for (StateId s = 0; s < a.state_count(); ++s) {
    aig.set_latch_next(s, next[s]);
    live = aig.make_or(live, next[s]);
  }
  for (std::size_t k = 0; k < xs.size(); ++k) aig.add_output(mgr.var_name(xs[k]), x[k]);
  aig.add_output(kLiveOutput, live);
  return aig;
}

}  // namespace depsynt
