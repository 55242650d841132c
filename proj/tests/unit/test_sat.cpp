#include "doctest.h"
#include "mttkit/mttkit.hpp"
#include "support/errors.hpp"

using namespace mttkit;
using mttkit::testing::error_kind;

namespace {

Cnf3 example() {
  // (p0 ∨ ¬p1 ∨ p2) ∧ (¬p0 ∨ p1 ∨ p2)
  return Cnf3{3,
              {Clause3{Literal{0, false}, Literal{1, true}, Literal{2, false}},
               Clause3{Literal{0, true}, Literal{1, false}, Literal{2, false}}}};
}

}  // namespace

TEST_SUITE("sat") {
  TEST_CASE("the worked encoding") {
    SatInstance inst = encode(example());
    CHECK(render_formula(inst.t) == "∧(∨(e, ¬ve, vve), ∨(¬e, ve, vve))");
    CHECK(to_string(inst.s) == "a(b(b(c(d),d,d),d,d))");
    CHECK(inst.s.size() == 3 * 3 + 2 - 2);
    CHECK(to_string(example()) == "(p0 ∨ ¬p1 ∨ p2) ∧ (¬p0 ∨ p1 ∨ p2)");
  }

  TEST_CASE("ladder sizes") {
    for (std::size_t n = 1; n <= 4; ++n)
      for (std::size_t m = 1; m <= 4; ++m) {
        Cnf3 f{n, {}};
        for (std::size_t i = 0; i < m; ++i) f.clauses.push_back(Clause3{});
        CHECK(encode(f).s.size() == 3 * n + m - 2);
      }
  }

  TEST_CASE("the reduction transducer") {
    Mtt m = build_sat_mtt();
    MttClass c = validate(m);
    CHECK(c.max_state_rank == 3);
    CHECK(c.linear_input);
    CHECK(m.rule_count() == 20);
  }

  TEST_CASE("outputs on the smallest ladder are the satisfiable formulas") {
    Mtt m = build_sat_mtt();
    Cnf3 one{1, {Clause3{}}};
    TreeSet out = translate(m, Mode::oi, encode(one).s);
    // all 2^3 sign patterns of a single clause over p0 are satisfiable
    CHECK(out.size() == 8);
  }

  TEST_CASE("verdicts") {
    CHECK(sat_check_small(example()) == SatVerdict::sat);
    Cnf3 contradiction{1, {Clause3{Literal{0, false}, Literal{0, false}, Literal{0, false}},
                           Clause3{Literal{0, true}, Literal{0, true}, Literal{0, true}}}};
    CHECK(sat_check_small(contradiction) == SatVerdict::unsat);
    CHECK_FALSE(truth_table_sat(contradiction));
    CHECK(truth_table_sat(example()));
    Budget tight;
    tight.max_steps = 10;
    CHECK(sat_check_small(example(), tight) == SatVerdict::unknown);
  }

  TEST_CASE("DIMACS") {
    Cnf3 f = parse_dimacs("c example\np cnf 3 2\n1 -2 3 0\n-1 2 3 0\n");
    CHECK(f == example());
    CHECK(parse_dimacs(to_dimacs(f)) == f);
    CHECK(parse_dimacs("p cnf 2 1\n1 2\n-1 0\n").clauses.size() == 1);
    CHECK(error_kind([] { parse_dimacs("1 2 3 0\n"); }) == ErrorKind::syntax_error);
    CHECK(error_kind([] { parse_dimacs("p cnf 3 1\n1 2 0\n"); }) == ErrorKind::syntax_error);
    CHECK(error_kind([] { parse_dimacs("p cnf 2 1\n1 2 3 0\n"); }) == ErrorKind::syntax_error);
    CHECK(error_kind([] { parse_dimacs("p cnf 3 2\n1 2 3 0\n"); }) == ErrorKind::syntax_error);
    CHECK(error_kind([] { parse_dimacs("p cnf 3 1\n1 2 x 0\n"); }) == ErrorKind::syntax_error);
    CHECK(error_kind([] { parse_dimacs("p cnf 3 1\n1 2 3\n"); }) == ErrorKind::syntax_error);
  }

  TEST_CASE("encoding errors") {
    CHECK(error_kind([] { encode(Cnf3{}); }) == ErrorKind::empty_formula);
    Cnf3 out_of_range{1, {Clause3{Literal{0, false}, Literal{1, false}, Literal{0, false}}}};
    CHECK(error_kind([&] { encode(out_of_range); }) == ErrorKind::unknown_symbol);
    Cnf3 wide{21, {Clause3{}}};
    CHECK(error_kind([&] { truth_table_sat(wide); }) == ErrorKind::budget_exceeded);
  }
}
