#include "depsynt/pipeline.hpp"

#include <chrono>
#include <memory>

#include "depsynt/dep_synth.hpp"

namespace depsynt {

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  Stopwatch() : start_(Clock::now()) {}
  double ms() const { return std::chrono::duration<double, std::milli>(Clock::now() - start_).count(); }

 private:
  Clock::time_point start_;
};

}  // namespace

SynthResult synthesize(const Spec& spec, const SynthOptions& options) {
  const Stopwatch total;
  SynthResult r;
  auto mgr = std::make_shared<BddManager>();

  Stopwatch phase;
  const Nba nba = translate(spec, mgr, {options.state_cap});
  r.times.nba_ms = phase.ms();
  r.nba_states = nba.state_count();
  r.nba_edges = nba.edges().size();

  phase = Stopwatch();
  r.deps = find_maximal_dependent_set(nba, {}, options.use_deps ? options.dep_budget_ms : 0);
  const auto& xs = r.deps.dependent;
  for (const auto x : xs) r.dependent.push_back(mgr->var_name(x));
  r.times.deps_ms = phase.ms();

  phase = Stopwatch();
  const Nba projected = project(nba, xs);
  r.projection = projection_stats(nba, projected);
  r.times.nondep_ms = phase.ms();

  auto finish = [&]() {
    r.times.total_ms = total.ms();
    return r;
  };
  if (nba.empty()) return finish();

  std::vector<std::string> y_names;
  for (const auto v : projected.outputs()) y_names.push_back(mgr->var_name(v));

  if (xs.size() == nba.outputs().size()) {
    // Every output (possibly none) is dependent: T_X alone is the candidate controller, and
    // it realizes the specification exactly when it is correct.
    r.fully_dependent = true;
    phase = Stopwatch();
    Aig tx = build_tx_circuit(nba, xs);
    r.times.dep_ms = phase.ms();

    phase = Stopwatch();
    Controller c = compose(MealyTY::trivial(spec.inputs), std::move(tx), spec.inputs, spec.outputs);
    r.realizable = verify(c, spec);
    r.times.nondep_ms += phase.ms();
    if (r.realizable) {
      r.verified = true;
      r.controller = std::move(c);
    }
    return finish();
  }

  phase = Stopwatch();
  r.used_determinize = true;
  const NondepResult nondep = synthesize_nondependent(projected, options.determinize);
  r.dpa_states = nondep.dpa_states;
  r.times.nondep_ms += phase.ms();
  if (!nondep.realizable) return finish();
  r.realizable = true;

  phase = Stopwatch();
  std::optional<Aig> tx;
  if (!xs.empty()) tx = build_tx_circuit(nba, xs);
  Controller c = compose(*nondep.machine, tx, spec.inputs, spec.outputs);
  r.times.dep_ms = phase.ms();

  if (options.verify) {
    phase = Stopwatch();
    r.verified = verify(c, spec);
    r.times.verify_ms = phase.ms();
  }
  r.controller = std::move(c);
  return finish();
}

}  // namespace depsynt
