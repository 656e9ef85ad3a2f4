#include "depsynt/circuit.hpp"

#include <functional>
#include <sstream>

#include "depsynt/error.hpp"

namespace depsynt {

Aig::Aig() { nodes_.push_back({Kind::Const}); }

AigLit Aig::add_input(std::string name) {
  const auto lit = static_cast<AigLit>(2 * nodes_.size());
  nodes_.push_back({Kind::Input, 0, 0, static_cast<std::uint32_t>(inputs_.size())});
  inputs_.push_back({std::move(name), lit});
  return lit;
}

std::size_t Aig::add_latch(std::string name, bool reset) {
  const auto lit = static_cast<AigLit>(2 * nodes_.size());
  nodes_.push_back({Kind::Latch, 0, 0, static_cast<std::uint32_t>(latches_.size())});
  latches_.push_back({std::move(name), lit, kAigFalse, reset});
  return latches_.size() - 1;
}

void Aig::set_latch_next(std::size_t latch, AigLit next) {
  if (latch >= latches_.size()) throw AigerError("latch index out of range");
  if ((next >> 1) >= nodes_.size()) throw AigerError("undefined literal " + std::to_string(next));
  latches_[latch].next = next;
}

void Aig::add_output(std::string name, AigLit lit) {
  if ((lit >> 1) >= nodes_.size()) throw AigerError("undefined literal " + std::to_string(lit));
  outputs_.push_back({std::move(name), lit});
}

AigLit Aig::make_and(AigLit a, AigLit b) {
  if (a > b) std::swap(a, b);
  if (a == kAigFalse) return kAigFalse;
  if (a == kAigTrue) return b;
  if (a == b) return a;
  if (a == aig_not(b)) return kAigFalse;
  const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
  if (auto it = strash_.find(key); it != strash_.end()) return it->second;
  const auto lit = static_cast<AigLit>(2 * nodes_.size());
  nodes_.push_back({Kind::And, a, b, 0});
  ++and_count_;
  strash_.emplace(key, lit);
  return lit;
}

AigLit Aig::make_mux(AigLit sel, AigLit then_lit, AigLit else_lit) {
  if (then_lit == else_lit) return then_lit;
  if (sel == kAigTrue) return then_lit;
  if (sel == kAigFalse) return else_lit;
  if (then_lit == kAigTrue && else_lit == kAigFalse) return sel;
  if (then_lit == kAigFalse && else_lit == kAigTrue) return aig_not(sel);
  return make_or(make_and(sel, then_lit), make_and(aig_not(sel), else_lit));
}

std::vector<AigLit> Aig::instantiate(const Aig& sub, const std::vector<AigLit>& inputs, const std::string& prefix) {
  if (inputs.size() != sub.inputs_.size()) throw AigerError("instantiation needs one literal per input");
  std::vector<AigLit> lit_of(sub.nodes_.size(), kAigFalse);
  std::vector<std::size_t> latch_of(sub.latches_.size());
  auto map = [&](AigLit l) { return lit_of[l >> 1] ^ (l & 1u); };
  for (std::size_t n = 1; n < sub.nodes_.size(); ++n) {
    const Node& node = sub.nodes_[n];
    switch (node.kind) {
      case Kind::Const:
        break;
      case Kind::Input:
        lit_of[n] = inputs[node.index];
        break;
      case Kind::Latch: {
        const auto& l = sub.latches_[node.index];
        latch_of[node.index] = add_latch(prefix + l.name, l.reset);
        lit_of[n] = latches_[latch_of[node.index]].lit;
        break;
      }
      case Kind::And:
        lit_of[n] = make_and(map(node.a), map(node.b));
        break;
    }
  }
  for (std::size_t i = 0; i < sub.latches_.size(); ++i) set_latch_next(latch_of[i], map(sub.latches_[i].next));
  std::vector<AigLit> outs;
  for (const auto& o : sub.outputs_) outs.push_back(map(o.lit));
  return outs;
}

int Aig::input_index(std::string_view name) const {
  for (std::size_t i = 0; i < inputs_.size(); ++i)
    if (inputs_[i].name == name) return static_cast<int>(i);
  return -1;
}

int Aig::output_index(std::string_view name) const {
  for (std::size_t i = 0; i < outputs_.size(); ++i)
    if (outputs_[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<bool> Aig::initial_state() const {
  std::vector<bool> state(latches_.size());
  for (std::size_t i = 0; i < latches_.size(); ++i) state[i] = latches_[i].reset;
  return state;
}

void Aig::step(const std::vector<bool>& state, const std::vector<bool>& in, std::vector<bool>& out,
               std::vector<bool>& next) const {
  if (state.size() != latches_.size() || in.size() != inputs_.size())
    throw AigerError("simulation vector size mismatch");
  std::vector<bool> value(nodes_.size(), false);
  auto lit_value = [&](AigLit l) { return static_cast<bool>(value[l >> 1]) != static_cast<bool>(l & 1u); };
  for (std::size_t n = 1; n < nodes_.size(); ++n) {
    const Node& node = nodes_[n];
    switch (node.kind) {
      case Kind::Const:
        break;
      case Kind::Input:
        value[n] = in[node.index];
        break;
      case Kind::Latch:
        value[n] = state[node.index];
        break;
      case Kind::And:
        value[n] = lit_value(node.a) && lit_value(node.b);
        break;
    }
  }
  out.assign(outputs_.size(), false);
  for (std::size_t i = 0; i < outputs_.size(); ++i) out[i] = lit_value(outputs_[i].lit);
  next.assign(latches_.size(), false);
  for (std::size_t i = 0; i < latches_.size(); ++i) next[i] = lit_value(latches_[i].next);
}

std::string Aig::to_aag() const {
  // Renumber: inputs, latches, then and gates in creation (topological) order.
  std::vector<std::uint32_t> var_of(nodes_.size(), 0);
  std::uint32_t next_var = 1;
  for (const auto& p : inputs_) var_of[p.lit >> 1] = next_var++;
  for (const auto& l : latches_) var_of[l.lit >> 1] = next_var++;
  std::vector<std::uint32_t> ands;
  for (std::uint32_t n = 1; n < nodes_.size(); ++n) {
    if (nodes_[n].kind == Kind::And) {
      var_of[n] = next_var++;
      ands.push_back(n);
    }
  }
  auto map = [&](AigLit l) { return 2 * var_of[l >> 1] + (l & 1u); };

  std::ostringstream out;
  out << "aag " << next_var - 1 << ' ' << inputs_.size() << ' ' << latches_.size() << ' ' << outputs_.size() << ' '
      << ands.size() << '\n';
  for (const auto& p : inputs_) out << map(p.lit) << '\n';
  for (const auto& l : latches_) out << map(l.lit) << ' ' << map(l.next) << ' ' << (l.reset ? 1 : 0) << '\n';
  for (const auto& p : outputs_) out << map(p.lit) << '\n';
  for (const auto n : ands) out << 2 * var_of[n] << ' ' << map(nodes_[n].b) << ' ' << map(nodes_[n].a) << '\n';
  for (std::size_t i = 0; i < inputs_.size(); ++i) out << 'i' << i << ' ' << inputs_[i].name << '\n';
  for (std::size_t i = 0; i < latches_.size(); ++i) out << 'l' << i << ' ' << latches_[i].name << '\n';
  for (std::size_t i = 0; i < outputs_.size(); ++i) out << 'o' << i << ' ' << outputs_[i].name << '\n';
  return out.str();
}

Aig Aig::parse_aag(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string magic;
  std::uint64_t m, ni, nl, no, na;
  if (!(in >> magic >> m >> ni >> nl >> no >> na) || magic != "aag") throw AigerError("malformed aag header");
  {
    std::string rest;
    std::getline(in, rest);
    std::istringstream extra(rest);
    std::uint64_t k;
    while (extra >> k)
      if (k != 0) throw AigerError("bad-state, constraint, justice and fairness sections are not supported");
  }
  if (m < ni + nl + na) throw AigerError("aag header: M smaller than I + L + A");

  enum class Def : std::uint8_t { None, Input, Latch, And };
  std::vector<Def> def(m + 1, Def::None);
  std::vector<std::uint64_t> def_index(m + 1, 0);
  std::vector<std::uint64_t> input_vars(ni);
  struct RawLatch {
    std::uint64_t var, next, reset;
  };
  std::vector<RawLatch> raw_latches(nl);
  std::vector<std::uint64_t> raw_outputs(no);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> and_inputs(na);

  auto read_lit = [&](const char* what) {
    std::uint64_t l;
    if (!(in >> l)) throw AigerError(std::string("expected literal in ") + what + " section");
    if ((l >> 1) > m) throw AigerError("literal " + std::to_string(l) + " exceeds M");
    return l;
  };
  auto define = [&](std::uint64_t lit, Def kind, std::uint64_t index) {
    if (lit < 2 || (lit & 1u)) throw AigerError("invalid definition literal " + std::to_string(lit));
    if (def[lit >> 1] != Def::None) throw AigerError("variable " + std::to_string(lit >> 1) + " defined twice");
    def[lit >> 1] = kind;
    def_index[lit >> 1] = index;
  };

  for (std::uint64_t i = 0; i < ni; ++i) {
    input_vars[i] = read_lit("input");
    define(input_vars[i], Def::Input, i);
  }
  for (std::uint64_t i = 0; i < nl; ++i) {
    std::string line;
    std::getline(in >> std::ws, line);
    std::istringstream ls(line);
    RawLatch rl{0, 0, 0};
    if (!(ls >> rl.var >> rl.next)) throw AigerError("malformed latch line '" + line + "'");
    if (!(ls >> rl.reset)) rl.reset = 0;
    if ((rl.var >> 1) > m || (rl.next >> 1) > m) throw AigerError("latch literal exceeds M");
    if (rl.reset != 0 && rl.reset != 1) throw AigerError("uninitialized latches are not supported");
    define(rl.var, Def::Latch, i);
    raw_latches[i] = rl;
  }
  for (std::uint64_t i = 0; i < no; ++i) raw_outputs[i] = read_lit("output");
  for (std::uint64_t i = 0; i < na; ++i) {
    const auto lhs = read_lit("and");
    const auto r0 = read_lit("and");
    const auto r1 = read_lit("and");
    define(lhs, Def::And, i);
    and_inputs[i] = {r0, r1};
  }

  std::vector<std::string> input_names(ni), latch_names(nl), output_names(no);
  for (std::uint64_t i = 0; i < ni; ++i) input_names[i] = "i" + std::to_string(i);
  for (std::uint64_t i = 0; i < nl; ++i) latch_names[i] = "l" + std::to_string(i);
  for (std::uint64_t i = 0; i < no; ++i) output_names[i] = "o" + std::to_string(i);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == 'c') break;
    const char kind = line[0];
    const auto space = line.find(' ');
    if ((kind != 'i' && kind != 'l' && kind != 'o') || space == std::string::npos)
      throw AigerError("malformed symbol line '" + line + "'");
    std::uint64_t pos;
    try {
      pos = std::stoull(line.substr(1, space - 1));
    } catch (const std::exception&) {
      throw AigerError("malformed symbol line '" + line + "'");
    }
    auto& names = kind == 'i' ? input_names : kind == 'l' ? latch_names : output_names;
    if (pos >= names.size()) throw AigerError("symbol index out of range in '" + line + "'");
    names[pos] = line.substr(space + 1);
  }

  Aig aig;
  std::vector<AigLit> lit_of(m + 1, kAigFalse);
  std::vector<std::uint8_t> state(m + 1, 0);  // 0 new, 1 in progress, 2 done
  for (std::uint64_t i = 0; i < ni; ++i) {
    lit_of[input_vars[i] >> 1] = aig.add_input(input_names[i]);
    state[input_vars[i] >> 1] = 2;
  }
  for (std::uint64_t i = 0; i < nl; ++i) {
    const auto idx = aig.add_latch(latch_names[i], raw_latches[i].reset == 1);
    lit_of[raw_latches[i].var >> 1] = aig.latches()[idx].lit;
    state[raw_latches[i].var >> 1] = 2;
  }
  state[0] = 2;
  std::function<AigLit(std::uint64_t)> resolve = [&](std::uint64_t l) -> AigLit {
    const auto v = l >> 1;
    if (state[v] == 1) throw AigerError("combinational cycle through variable " + std::to_string(v));
    if (state[v] == 0) {
      if (def[v] != Def::And) throw AigerError("undefined variable " + std::to_string(v));
      state[v] = 1;
      const auto [r0, r1] = and_inputs[def_index[v]];
      const auto a = resolve(r0);
      const auto b = resolve(r1);
      lit_of[v] = aig.make_and(a, b);
      state[v] = 2;
    }
    return lit_of[v] ^ static_cast<AigLit>(l & 1u);
  };
  for (std::uint64_t i = 0; i < nl; ++i) aig.set_latch_next(i, resolve(raw_latches[i].next));
  for (std::uint64_t i = 0; i < no; ++i) aig.add_output(output_names[i], resolve(raw_outputs[i]));
  return aig;
}

AigLit BddToAig::compile(Bdd f) {
  if (f.is_false()) return kAigFalse;
  if (f.is_true()) return kAigTrue;
  if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
  const VarId v = mgr_.top_var(f);
  auto bound = binding_.find(v);
  if (bound == binding_.end()) throw InvariantViolation("unbound variable '" + mgr_.var_name(v) + "' in BDD");
  const AigLit hi = compile(mgr_.high(f));
  const AigLit lo = compile(mgr_.low(f));
  const AigLit r = aig_.make_mux(bound->second, hi, lo);
  memo_.emplace(f.id(), r);
  return r;
}

}  // namespace depsynt
