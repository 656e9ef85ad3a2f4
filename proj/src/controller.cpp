#include "depsynt/controller.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <set>

#include <json.hpp>

#include "depsynt/dep_synth.hpp"
#include "depsynt/error.hpp"
#include "depsynt/nba.hpp"

namespace depsynt {

Aig mealy_to_aig(const MealyTY& t_y) {
  const std::size_t states = t_y.state_count();
  if (states == 0) throw Error("Mealy machine without states");
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < states) ++bits;
  const std::size_t letters = std::size_t{1} << t_y.inputs.size();

  BddManager mgr;
  std::vector<VarId> code, in;
  for (std::size_t b = 0; b < bits; ++b) code.push_back(mgr.new_var("s" + std::to_string(b)));
  for (const auto& name : t_y.inputs) in.push_back(mgr.new_var(name));
  auto minterm = [&](const std::vector<VarId>& vars, std::uint64_t value) {
    std::vector<Literal> lits;
    for (std::size_t k = 0; k < vars.size(); ++k) lits.push_back({vars[k], static_cast<bool>((value >> k) & 1u)});
    return mgr.cube(lits);
  };
  std::vector<Bdd> next_fn(bits, mgr.bdd_false());
  std::vector<Bdd> out_fn(t_y.outputs.size(), mgr.bdd_false());
  for (std::uint32_t s = 0; s < states; ++s) {
    const Bdd at = minterm(code, s);
    std::vector<Bdd> next_s(bits, mgr.bdd_false());
    std::vector<Bdd> out_s(t_y.outputs.size(), mgr.bdd_false());
    for (std::uint64_t l = 0; l < letters; ++l) {
      const Bdd letter = minterm(in, l);
      for (std::size_t b = 0; b < bits; ++b)
        if ((t_y.next[s][l] >> b) & 1u) next_s[b] |= letter;
      for (std::size_t k = 0; k < t_y.outputs.size(); ++k)
        if ((t_y.out[s][l] >> k) & 1u) out_s[k] |= letter;
    }
    for (std::size_t b = 0; b < bits; ++b) next_fn[b] |= at & next_s[b];
    for (std::size_t k = 0; k < t_y.outputs.size(); ++k) out_fn[k] |= at & out_s[k];
  }

  Aig aig;
  BddToAig compiler(mgr, aig);
  for (std::size_t k = 0; k < in.size(); ++k) compiler.bind(in[k], aig.add_input(t_y.inputs[k]));
  for (std::size_t b = 0; b < bits; ++b) {
    const auto idx = aig.add_latch("s" + std::to_string(b), false);
    compiler.bind(code[b], aig.latches()[idx].lit);
  }
  for (std::size_t b = 0; b < bits; ++b) aig.set_latch_next(b, compiler.compile(next_fn[b]));
  for (std::size_t k = 0; k < t_y.outputs.size(); ++k) aig.add_output(t_y.outputs[k], compiler.compile(out_fn[k]));
  return aig;
}

Controller compose(const MealyTY& t_y, const std::optional<Aig>& t_x, const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs) {
  if (t_y.inputs != inputs) throw AlphabetMismatch("T_Y inputs differ from the declared inputs");
  std::set<std::string> out_set(outputs.begin(), outputs.end());
  std::set<std::string> covered;
  for (const auto& o : t_y.outputs) {
    if (!out_set.contains(o)) throw AlphabetMismatch("T_Y drives undeclared output '" + o + "'");
    covered.insert(o);
  }
  Controller c;
  c.inputs = inputs;
  c.outputs = outputs;
  c.ty_states = t_y.state_count();

  std::map<std::string, AigLit> wire;
  std::vector<AigLit> in_lits;
  for (const auto& name : inputs) {
    in_lits.push_back(c.circuit.add_input(name));
    wire[name] = in_lits.back();
  }
  const Aig ty = mealy_to_aig(t_y);
  c.ty_latches = ty.latches().size();
  const auto ty_out = c.circuit.instantiate(ty, in_lits, "ty_");
  for (std::size_t k = 0; k < t_y.outputs.size(); ++k) wire[t_y.outputs[k]] = ty_out[k];

  AigLit live = kAigTrue;
  if (t_x) {
    std::vector<AigLit> tx_in;
    for (const auto& p : t_x->inputs()) {
      auto it = wire.find(p.name);
      if (it == wire.end()) throw AlphabetMismatch("T_X input '" + p.name + "' is neither an input nor a T_Y output");
      tx_in.push_back(it->second);
    }
    c.tx_latches = t_x->latches().size();
    const auto tx_out = c.circuit.instantiate(*t_x, tx_in, "tx_");
    for (std::size_t k = 0; k < t_x->outputs().size(); ++k) {
      const auto& name = t_x->outputs()[k].name;
      if (name == kLiveOutput) {
        live = tx_out[k];
        continue;
      }
      if (!out_set.contains(name)) throw AlphabetMismatch("T_X drives undeclared output '" + name + "'");
      if (!covered.insert(name).second) throw AlphabetMismatch("output '" + name + "' is driven twice");
      wire[name] = tx_out[k];
      c.dependent.push_back(name);
    }
  }
  if (covered != out_set) throw AlphabetMismatch("some outputs are not driven by the controller");
  for (const auto& name : outputs) c.circuit.add_output(name, wire.at(name));
  c.circuit.add_output(kLiveOutput, live);
  return c;
}

Controller controller_from_aig(Aig circuit, const std::vector<std::string>& inputs,
                               const std::vector<std::string>& outputs) {
  Controller c;
  c.inputs = inputs;
  c.outputs = outputs;
  for (const auto& name : inputs)
    if (circuit.input_index(name) < 0) throw AlphabetMismatch("circuit lacks input '" + name + "'");
  for (const auto& name : outputs)
    if (circuit.output_index(name) < 0) throw AlphabetMismatch("circuit lacks output '" + name + "'");
  if (circuit.inputs().size() != inputs.size()) throw AlphabetMismatch("circuit has undeclared inputs");
  c.circuit = std::move(circuit);
  return c;
}

namespace {

// Input vector of the circuit for a letter over c.inputs.
std::vector<bool> circuit_inputs(const Controller& c, std::uint64_t letter) {
  std::vector<bool> in(c.circuit.inputs().size(), false);
  for (std::size_t k = 0; k < c.inputs.size(); ++k)
    in[c.circuit.input_index(c.inputs[k])] = (letter >> k) & 1u;
  return in;
}

struct StepResult {
  std::vector<bool> next;
  std::optional<std::uint64_t> out;
};

StepResult step(const Controller& c, const std::vector<bool>& state, std::uint64_t letter) {
  std::vector<bool> out, next;
  c.circuit.step(state, circuit_inputs(c, letter), out, next);
  const int live = c.circuit.output_index(kLiveOutput);
  StepResult r{std::move(next), std::nullopt};
  if (live >= 0 && !out[live]) return r;
  std::uint64_t o = 0;
  for (std::size_t k = 0; k < c.outputs.size(); ++k)
    if (out[c.circuit.output_index(c.outputs[k])]) o |= std::uint64_t{1} << k;
  r.out = o;
  return r;
}

}  // namespace

std::vector<std::optional<std::uint64_t>> simulate(const Controller& c, const std::vector<std::uint64_t>& word) {
  std::vector<std::optional<std::uint64_t>> result;
  auto state = c.circuit.initial_state();
  for (const auto letter : word) {
    auto r = step(c, state, letter);
    result.push_back(r.out);
    state = std::move(r.next);
  }
  return result;
}

bool never_dead(const Controller& c, std::size_t state_cap) {
  const std::uint64_t letters = std::uint64_t{1} << c.inputs.size();
  std::set<std::vector<bool>> seen{c.circuit.initial_state()};
  std::deque<std::vector<bool>> queue{c.circuit.initial_state()};
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    for (std::uint64_t l = 0; l < letters; ++l) {
      auto r = step(c, s, l);
      if (!r.out) return false;
      if (seen.insert(r.next).second) {
        if (seen.size() > state_cap) throw ResourceError("controller state space exceeds the cap");
        queue.push_back(std::move(r.next));
      }
    }
  }
  return true;
}

bool verify(const Controller& c, const Spec& spec, const VerifyOptions& options) {
  if (c.inputs != spec.inputs || c.outputs != spec.outputs)
    throw AlphabetMismatch("controller ports differ from the specification");
  if (!never_dead(c, options.product_state_cap)) return false;
  auto mgr = std::make_shared<BddManager>();
  const Nba negated = translate(negate(spec), mgr, {options.nba_state_cap});
  return product_empty(c.circuit, negated, options.product_state_cap);
}

std::string emit_aiger(const Controller& c) { return c.circuit.to_aag(); }

std::string controller_json(const Controller& c, std::size_t state_cap) {
  using nlohmann::json;
  const std::uint64_t letters = std::uint64_t{1} << c.inputs.size();
  std::map<std::vector<bool>, std::size_t> ids;
  std::vector<std::vector<bool>> states{c.circuit.initial_state()};
  ids[states[0]] = 0;
  json transitions = json::array();
  for (std::size_t s = 0; s < states.size(); ++s) {
    for (std::uint64_t l = 0; l < letters; ++l) {
      auto r = step(c, states[s], l);
      auto [it, inserted] = ids.try_emplace(r.next, states.size());
      if (inserted) {
        if (states.size() >= state_cap) throw ResourceError("controller state space exceeds the cap");
        states.push_back(r.next);
      }
      json t = {{"from", s}, {"input", l}, {"to", it->second}};
      t["output"] = r.out ? json(*r.out) : json(nullptr);
      transitions.push_back(std::move(t));
    }
  }
  json doc;
  doc["inputs"] = c.inputs;
  doc["outputs"] = c.outputs;
  doc["initial"] = 0;
  json st = json::array();
  for (std::size_t s = 0; s < states.size(); ++s) {
    std::string bits;
    for (const bool b : states[s]) bits += b ? '1' : '0';
    st.push_back({{"id", s}, {"latches", bits}});
  }
  doc["states"] = std::move(st);
  doc["transitions"] = std::move(transitions);
  return doc.dump(2) + "\n";
}

}  // namespace depsynt
