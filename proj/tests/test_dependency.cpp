#include <doctest.h>

#include <fstream>
#include <sstream>

#include "depsynt/dependency.hpp"
#include "depsynt/nba.hpp"
#include "oracles.hpp"

using namespace depsynt;

namespace {

Nba load_two_state() {
  std::ifstream in(DEPSYNT_TEST_DATA "/two_state.hoa");
  std::stringstream s;
  s << in.rdbuf();
  return parse_hoa(s.str());
}

std::size_t position(const Nba& a, VarId v) {
  const auto vars = a.variables();
  return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin());
}

}  // namespace

TEST_CASE("two-state example") {
  const Nba a = load_two_state();
  auto& mgr = a.manager();
  const VarId i = *mgr.find_var("i"), o1 = *mgr.find_var("o1"), o2 = *mgr.find_var("o2");
  const auto pairs = find_compatible_pairs(a);
  CHECK(pairs.size() == 3);  // (q0,q0), (q0,q1), (q1,q1)
  CHECK(pairs.contains(0, 1));
  CHECK(pairs.contains(1, 0));

  const VarId i_o2[] = {i, o2};
  const VarId i_only[] = {i};
  const VarId i_o1[] = {i, o1};
  CHECK(is_automata_dependent(a, o1, i_o2, pairs));
  CHECK_FALSE(is_automata_dependent(a, o1, i_only, pairs));
  CHECK_FALSE(is_automata_dependent(a, o2, i_o1, pairs));
  CHECK(are_states_colliding(a, 0, 1, o2, i_o1));
  CHECK_FALSE(are_states_colliding(a, 0, 1, o1, i_o2));

  const auto report = find_maximal_dependent_set(a);
  CHECK(report.dependent == std::vector<VarId>{o1});
  CHECK(report.nondependent == std::vector<VarId>{o2});
  REQUIRE(report.vars.size() == 2);
  CHECK(report.vars[0].status == DepStatus::Dependent);
  CHECK(report.vars[1].status == DepStatus::NotDependent);
  const auto stats = dependency_stats(report, a);
  CHECK(stats.dependent == 1);
  CHECK(stats.ratio == doctest::Approx(0.5));
}

TEST_CASE("primed copies sit next to their originals") {
  BddManager mgr;
  const VarId a = mgr.new_var("a");
  const VarId b = mgr.new_var("b");
  const VarId a1 = primed(mgr, a);
  CHECK(primed(mgr, a) == a1);
  CHECK(mgr.var_name(a1) == "a'");
  CHECK(mgr.level(a1) == mgr.level(a) + 1);
  CHECK(mgr.level(b) == mgr.level(a1) + 1);
}

TEST_CASE("compatible pairs match the explicit pair graph") {
  gen::Rng rng(17);
  for (int k = 0; k < 60; ++k) {
    const Nba a = gen::random_nba(rng, 5, 1 + k % 2, 1 + (k / 2) % 2, k % 3 == 0);
    CHECK(find_compatible_pairs(a) == oracle::explicit_pairs(a));
  }
}

TEST_CASE("automata dependency matches the word-based definition") {
  gen::Rng rng(23);
  int dependent = 0;
  for (int k = 0; k < 80; ++k) {
    const Nba a = gen::random_nba(rng, 5, 1, 2, k % 2 == 0);
    const auto pairs = find_compatible_pairs(a);
    for (const VarId z : a.outputs()) {
      std::vector<VarId> ys;
      std::vector<std::size_t> ypos;
      for (const VarId v : a.variables())
        if (v != z) ys.push_back(v), ypos.push_back(position(a, v));
      const bool expected = oracle::semantic_dependent(a, {position(a, z)}, ypos);
      CHECK(is_automata_dependent(a, z, ys, pairs) == expected);
      dependent += expected;
      // dependency on the inputs alone
      std::vector<VarId> ins(a.inputs().begin(), a.inputs().end());
      std::vector<std::size_t> inpos;
      for (const VarId v : ins) inpos.push_back(position(a, v));
      CHECK(is_automata_dependent(a, z, ins, pairs) == oracle::semantic_dependent(a, {position(a, z)}, inpos));
    }
  }
  CHECK(dependent > 20);
}

TEST_CASE("planted outputs are found") {
  gen::Rng rng(31);
  for (int k = 0; k < 30; ++k) {
    const Nba a = gen::random_nba(rng, 4, 1, 2, true);
    const auto report = find_maximal_dependent_set(a);
    const VarId planted = a.outputs().back();
    const bool first_taken =
        std::find(report.dependent.begin(), report.dependent.end(), a.outputs().front()) != report.dependent.end();
    // the planted output is dependent unless the first output took its place
    if (!first_taken) CHECK(std::find(report.dependent.begin(), report.dependent.end(), planted) != report.dependent.end());
  }
}

TEST_CASE("test order and budget") {
  const Nba a = load_two_state();
  auto& mgr = a.manager();
  const VarId o1 = *mgr.find_var("o1"), o2 = *mgr.find_var("o2");
  const VarId reversed[] = {o2, o1};
  const auto r = find_maximal_dependent_set(a, reversed);
  CHECK(r.dependent == std::vector<VarId>{o1});
  CHECK(r.vars[0].var == o2);

  const auto skipped = find_maximal_dependent_set(a, {}, 0);
  CHECK(skipped.dependent.empty());
  CHECK(skipped.nondependent.size() == 2);
  for (const auto& v : skipped.vars) CHECK(v.status == DepStatus::SkippedBudget);
  CHECK(dependency_stats(skipped, a).skipped == 2);
  CHECK(to_string(DepStatus::SkippedBudget) == "skipped-budget");
  CHECK(to_string(DepStatus::NotDependent) == "not-dependent");
  CHECK(to_string(DepStatus::Dependent) == "dependent");
}

TEST_CASE("translated specifications") {
  const Spec s = parse_spec("INPUTS a, b; OUTPUTS x, y; LTL G (x <-> a & b) & G F y;");
  const Nba a = translate(s);
  const auto r = find_maximal_dependent_set(a);
  REQUIRE(r.dependent.size() == 1);
  CHECK(a.manager().var_name(r.dependent[0]) == "x");
  const std::vector<VarId> rest = remaining_outputs(a, r.dependent);
  REQUIRE(rest.size() == 1);
  CHECK(a.manager().var_name(rest[0]) == "y");
}
