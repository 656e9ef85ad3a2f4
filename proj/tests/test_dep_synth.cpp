#include <doctest.h>

#include <fstream>
#include <sstream>

#include "depsynt/dep_synth.hpp"
#include "depsynt/dependency.hpp"
#include "depsynt/error.hpp"
#include "oracles.hpp"

using namespace depsynt;

namespace {

Nba load_two_state() {
  std::ifstream in(DEPSYNT_TEST_DATA "/two_state.hoa");
  std::stringstream s;
  s << in.rdbuf();
  return parse_hoa(s.str());
}

}  // namespace

TEST_CASE("subset machine of the two-state example") {
  const Nba a = load_two_state();
  const std::vector<VarId> xs{*a.manager().find_var("o1")};
  const auto ex = build_explicit_t_x(a, xs);
  CHECK(ex.inputs == std::vector<std::string>{"i", "o2"});
  CHECK(ex.outputs == std::vector<std::string>{"o1"});
  REQUIRE(ex.states.size() == 3);
  CHECK(ex.states[0] == std::vector<StateId>{0});
  // Y letter bits: i, o2
  const std::uint64_t i0_o2_0 = 0b00, i0_o2_1 = 0b10, i1_o2_0 = 0b01, i1_o2_1 = 0b11;
  // {q0} on (i=0, o2=0) moves to {q1} with o1 = 0
  const auto to_q1 = ex.next[0][i0_o2_0];
  REQUIRE(to_q1 >= 0);
  CHECK(ex.states[to_q1] == std::vector<StateId>{1});
  CHECK(ex.out[0][i0_o2_0] == 0);
  // {q1} on (i=0, o2=0) moves to {q0, q1}
  const auto both = ex.next[to_q1][i0_o2_0];
  REQUIRE(both >= 0);
  CHECK(ex.states[both] == std::vector<StateId>{0, 1});
  CHECK(ex.next[0][i0_o2_1] == 0);
  CHECK(ex.out[0][i0_o2_1] == 1);
  CHECK(ex.next[0][i1_o2_0] == 0);
  CHECK(ex.out[0][i1_o2_0] == 1);
  CHECK(ex.out[0][i1_o2_1] == 1);
  // q1 has no edge with i=1, o2=0
  CHECK(ex.next[to_q1][i1_o2_0] == -1);
  CHECK(oracle::tx_mismatch(a, xs, 6).empty());
  CHECK(oracle::tx_states_compatible(a, xs));
}

TEST_CASE("non-dependent outputs are rejected") {
  const Nba a = load_two_state();
  const std::vector<VarId> xs{*a.manager().find_var("o2")};
  CHECK_THROWS_AS(build_explicit_t_x(a, xs), InvariantViolation);
}

TEST_CASE("circuit layout") {
  const Nba a = load_two_state();
  const std::vector<VarId> xs{*a.manager().find_var("o1")};
  const Aig c = build_tx_circuit(a, xs);
  REQUIRE(c.inputs().size() == 2);
  CHECK(c.inputs()[0].name == "i");
  CHECK(c.inputs()[1].name == "o2");
  REQUIRE(c.outputs().size() == 2);
  CHECK(c.outputs()[0].name == "o1");
  CHECK(c.outputs()[1].name == kLiveOutput);
  REQUIRE(c.latches().size() == 2);
  CHECK(c.initial_state() == std::vector<bool>{true, false});
}

TEST_CASE("circuit and subset machine agree on random automata") {
  gen::Rng rng(211);
  int checked = 0;
  for (int k = 0; k < 120 && checked < 40; ++k) {
    const Nba a = gen::random_nba(rng, 5, 1, 2, true);
    const auto report = find_maximal_dependent_set(a);
    if (report.dependent.empty()) continue;
    ++checked;
    const auto why = oracle::tx_mismatch(a, report.dependent, 5);
    CHECK_MESSAGE(why.empty(), why);
    CHECK(oracle::tx_states_compatible(a, report.dependent));
  }
  CHECK(checked == 40);
}

TEST_CASE("translated specification with a predicted output") {
  const Nba a = translate(parse_spec("INPUTS a, b; OUTPUTS x, y; LTL G (x <-> a & b) & G (y <-> X a);"));
  const auto r = find_maximal_dependent_set(a);
  // y guesses the next input, so only x is dependent
  CHECK(r.dependent == std::vector<VarId>{*a.manager().find_var("x")});
  CHECK(oracle::tx_mismatch(a, r.dependent, 4).empty());
}
