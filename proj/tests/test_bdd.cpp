#include <doctest.h>

#include <algorithm>
#include <map>

#include "depsynt/bdd.hpp"
#include "depsynt/error.hpp"
#include "oracles.hpp"

using namespace depsynt;

namespace {

// Truth table of f over vars (bit k of the index is vars[k]).
std::vector<bool> table(const BddManager& mgr, Bdd f, const std::vector<VarId>& vars) {
  std::vector<bool> t;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << vars.size()); ++m) {
    Assignment a(mgr.var_count(), false);
    for (std::size_t k = 0; k < vars.size(); ++k) a[vars[k].index] = (m >> k) & 1u;
    t.push_back(mgr.eval(f, a));
  }
  return t;
}

struct Fixture {
  BddManager mgr;
  std::vector<VarId> v;
  Fixture(std::size_t n = 4) {
    for (std::size_t k = 0; k < n; ++k) v.push_back(mgr.new_var("v" + std::to_string(k)));
  }
};

}  // namespace

TEST_CASE("terminals and single variables") {
  Fixture f(1);
  CHECK(f.mgr.bdd_true().is_true());
  CHECK(f.mgr.bdd_false().is_false());
  CHECK(f.mgr.node_count(f.mgr.bdd_true()) == 1);
  CHECK(f.mgr.internal_node_count(f.mgr.bdd_true()) == 0);
  const Bdd x = f.mgr.var(f.v[0]);
  CHECK(f.mgr.node_count(x) == 3);
  CHECK((x & !x).is_false());
  CHECK((x | !x).is_true());
  CHECK(f.mgr.top_var(x) == f.v[0]);
  CHECK(f.mgr.low(x).is_false());
  CHECK(f.mgr.high(x).is_true());
  CHECK_THROWS_AS(f.mgr.top_var(f.mgr.bdd_true()), BddError);
}

TEST_CASE("variable names and order") {
  BddManager mgr;
  const VarId a = mgr.new_var("a");
  const VarId b = mgr.new_var("b");
  const VarId a1 = mgr.new_var_after("a'", a);
  CHECK(mgr.find_var("a'") == a1);
  CHECK_FALSE(mgr.find_var("zz").has_value());
  CHECK(mgr.order() == std::vector<VarId>{a, a1, b});
  CHECK(mgr.level(b) == 2);
  CHECK(mgr.var_name(a1) == "a'");
  CHECK_THROWS(mgr.new_var("a"));
}

TEST_CASE("apply agrees with truth tables") {
  gen::Rng rng(7);
  for (int round = 0; round < 50; ++round) {
    Fixture f(4);
    const Bdd a = gen::random_bdd(rng, f.mgr, f.v);
    const Bdd b = gen::random_bdd(rng, f.mgr, f.v);
    const auto ta = table(f.mgr, a, f.v), tb = table(f.mgr, b, f.v);
    const auto tand = table(f.mgr, a & b, f.v), tor = table(f.mgr, a | b, f.v), txor = table(f.mgr, a ^ b, f.v);
    const auto timp = table(f.mgr, f.mgr.apply(BoolOp::Implies, a, b), f.v);
    const auto tiff = table(f.mgr, f.mgr.apply(BoolOp::Iff, a, b), f.v);
    const auto tite = table(f.mgr, f.mgr.ite(a, b, !b), f.v);
    for (std::size_t m = 0; m < ta.size(); ++m) {
      CHECK(tand[m] == (ta[m] && tb[m]));
      CHECK(tor[m] == (ta[m] || tb[m]));
      CHECK(txor[m] == (ta[m] != tb[m]));
      CHECK(timp[m] == (!ta[m] || tb[m]));
      CHECK(tiff[m] == (ta[m] == tb[m]));
      CHECK(tite[m] == (ta[m] ? tb[m] : !tb[m]));
    }
  }
}

TEST_CASE("canonicity: equal functions share a node") {
  Fixture f(3);
  const Bdd x = f.mgr.var(f.v[0]), y = f.mgr.var(f.v[1]), z = f.mgr.var(f.v[2]);
  CHECK(((x & y) | (x & z)) == (x & (y | z)));
  CHECK((!(x & y)) == (!x | !y));
  CHECK((x ^ y ^ x) == y);
}

TEST_CASE("quantification and restriction") {
  Fixture f(3);
  const Bdd x = f.mgr.var(f.v[0]), y = f.mgr.var(f.v[1]), z = f.mgr.var(f.v[2]);
  const Bdd g = (x & y) | (!x & z);
  const VarId xs[] = {f.v[0]};
  CHECK(f.mgr.exists(g, xs) == (y | z));
  CHECK(f.mgr.forall(g, xs) == (y & z));
  CHECK(f.mgr.restrict(g, f.v[0], true) == y);
  const Literal lits[] = {{f.v[0], false}, {f.v[2], true}};
  CHECK(f.mgr.restrict(g, lits).is_true());
  CHECK(f.mgr.support(g) == std::vector<VarId>{f.v[0], f.v[1], f.v[2]});
}

TEST_CASE("rename and substitute") {
  Fixture f(4);
  const Bdd x = f.mgr.var(f.v[0]), y = f.mgr.var(f.v[1]);
  const Bdd g = x & !y;
  const std::map<VarId, VarId> swap{{f.v[0], f.v[1]}, {f.v[1], f.v[0]}};
  CHECK(f.mgr.rename(g, swap) == (y & !x));
  const std::map<VarId, VarId> shift{{f.v[0], f.v[2]}, {f.v[1], f.v[3]}};
  CHECK(f.mgr.rename(g, shift) == (f.mgr.var(f.v[2]) & !f.mgr.var(f.v[3])));
  const std::map<VarId, VarId> clash{{f.v[0], f.v[2]}, {f.v[1], f.v[2]}};
  CHECK_THROWS_AS(f.mgr.rename(g, clash), BddError);
  CHECK(f.mgr.substitute(g, f.v[1], !x) == x);
  CHECK(f.mgr.substitute(g, f.v[0], y).is_false());
}

TEST_CASE("cubes partition the on-set") {
  gen::Rng rng(11);
  for (int round = 0; round < 30; ++round) {
    Fixture f(4);
    const Bdd a = gen::random_bdd(rng, f.mgr, f.v);
    Bdd sum = f.mgr.bdd_false();
    for (const auto& c : f.mgr.cubes(a)) {
      const Bdd cube = f.mgr.cube(c);
      CHECK((sum & cube).is_false());
      sum |= cube;
    }
    CHECK(sum == a);
    const auto pick = f.mgr.pick_cube(a);
    CHECK(pick.has_value() == !a.is_false());
    if (pick) CHECK((f.mgr.cube(*pick) & !a).is_false());
  }
}

TEST_CASE("skolem functions witness the existential") {
  gen::Rng rng(3);
  for (int round = 0; round < 50; ++round) {
    Fixture f(6);
    const Bdd b = gen::random_bdd(rng, f.mgr, f.v, 0.3);
    const std::vector<VarId> xs{f.v[1], f.v[4]};
    const auto fs = f.mgr.skolem(b, xs);
    REQUIRE(fs.size() == 2);
    Bdd sub = b;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      for (const auto s : f.mgr.support(fs[k])) CHECK((s != xs[0] && s != xs[1]));
    }
    sub = f.mgr.substitute(f.mgr.substitute(b, xs[0], fs[0]), xs[1], fs[1]);
    CHECK((f.mgr.exists(b, xs) & !sub).is_false());
  }
}

TEST_CASE("skolem functions for trailing and interleaved variables") {
  gen::Rng rng(4);
  Fixture f(7);
  // one manager for every round, so cached state carries across calls
  for (int round = 0; round < 120; ++round) {
    const Bdd b = gen::random_bdd(rng, f.mgr, f.v, 0.2 + 0.1 * (round % 6));
    std::vector<VarId> xs;
    if (round % 2 == 0) {
      for (std::size_t k = 7 - (1 + round % 4); k < 7; ++k) xs.push_back(f.v[k]);
    } else {
      for (std::size_t k = 0; k < 7; ++k)
        if (rng() % 2) xs.push_back(f.v[k]);
    }
    const auto fs = f.mgr.skolem(b, xs);
    REQUIRE(fs.size() == xs.size());
    for (const auto& fk : fs)
      for (const auto s : f.mgr.support(fk)) CHECK(std::find(xs.begin(), xs.end(), s) == xs.end());
    const Bdd sub = f.mgr.compose(b, xs, fs);
    CHECK((f.mgr.exists(b, xs) & !sub).is_false());
  }
}

TEST_CASE("simultaneous composition") {
  gen::Rng rng(6);
  for (int round = 0; round < 40; ++round) {
    Fixture f(5);
    const Bdd a = gen::random_bdd(rng, f.mgr, f.v);
    const std::vector<VarId> vars{f.v[0], f.v[2]};
    const std::vector<VarId> rest{f.v[1], f.v[3], f.v[4]};
    const std::vector<Bdd> fs{gen::random_bdd(rng, f.mgr, rest), gen::random_bdd(rng, f.mgr, rest)};
    // the functions avoid the substituted variables, so sequential substitution agrees
    CHECK(f.mgr.compose(a, vars, fs) == f.mgr.substitute(f.mgr.substitute(a, vars[0], fs[0]), vars[1], fs[1]));
    // swapping two variables needs the simultaneous form
    const std::vector<Bdd> swap{f.mgr.var(f.v[2]), f.mgr.var(f.v[0])};
    const Bdd swapped = f.mgr.compose(a, vars, swap);
    for (std::uint32_t m = 0; m < 32; ++m) {
      Assignment x(5), y(5);
      for (int k = 0; k < 5; ++k) x[k] = y[k] = m >> k & 1;
      std::swap(y[0], y[2]);
      CHECK(f.mgr.eval(swapped, x) == f.mgr.eval(a, y));
    }
  }
  Fixture f(2);
  const VarId one[] = {f.v[0]};
  CHECK_THROWS_AS(f.mgr.compose(f.mgr.var(f.v[0]), one, {}), BddError);
}

TEST_CASE("eval and dot output") {
  Fixture f(2);
  const Bdd g = f.mgr.var(f.v[0]) & !f.mgr.var(f.v[1]);
  CHECK(f.mgr.eval(g, {true, false}));
  CHECK_FALSE(f.mgr.eval(g, {true, true}));
  const auto dot = f.mgr.to_dot(g);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("v1") != std::string::npos);
}

TEST_CASE("handles from different managers are rejected") {
  BddManager m1, m2;
  const Bdd a = m1.var(m1.new_var("a"));
  const Bdd b = m2.var(m2.new_var("b"));
  CHECK_THROWS_AS(m1.apply(BoolOp::And, a, b), BddError);
}
