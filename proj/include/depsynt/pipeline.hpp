#pragma once

// End-to-end synthesis: translate, find dependent outputs, project, solve the
// non-dependent part, build T_X, compose and verify.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depsynt/controller.hpp"
#include "depsynt/dependency.hpp"
#include "depsynt/nondep_synth.hpp"
#include "depsynt/projection.hpp"
#include "depsynt/spec.hpp"

namespace depsynt {

struct SynthOptions {
  bool use_deps = true;
  std::uint64_t dep_budget_ms = 12000;
  std::size_t state_cap = 5000;
  DeterminizeOptions determinize;
  bool verify = true;
};

struct PhaseTimes {
  double nba_ms = 0;
  double deps_ms = 0;
  double nondep_ms = 0;
  double dep_ms = 0;
  double verify_ms = 0;
  double total_ms = 0;
};

struct SynthResult {
  bool realizable = false;
  // Set when a controller was built and checked; a realizable verdict from
  // the game whose controller fails verification is reported here.
  std::optional<bool> verified;
  bool fully_dependent = false;
  bool used_determinize = false;
  std::optional<Controller> controller;
  DependencyReport deps;
  std::vector<std::string> dependent;
  ProjectionStats projection;
  std::size_t nba_states = 0;
  std::size_t nba_edges = 0;
  std::size_t dpa_states = 0;
  PhaseTimes times;
};

SynthResult synthesize(const Spec& spec, const SynthOptions& options = {});

}  // namespace depsynt
