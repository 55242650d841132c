#include "doctest.h"
#include "mttkit/mttkit.hpp"
#include "support/errors.hpp"
#include "support/fixtures.hpp"

using namespace mttkit;
using mttkit::testing::error_kind;
using fixtures::term;

namespace {

std::vector<std::string> strings(const TreeSet& s) {
  std::vector<std::string> out;
  for (const Tree& t : s) out.push_back(to_string(t));
  return out;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("IO and OI substitution of the f/g set") {
    TreeSet l{term("f(y1,y1)"), term("g(y1,y1)")};
    std::vector<TreeSet> args{l};
    TreeSet io = io_subst(l, args);
    TreeSet oi = oi_subst(l, args);
    CHECK(io.size() == 4);
    CHECK(oi.size() == 8);
    CHECK(io.contains(term("g(f(y1,y1),f(y1,y1))")));
    CHECK_FALSE(io.contains(term("f(f(y1,y1),g(y1,y1))")));
    CHECK(oi.contains(term("f(f(y1,y1),g(y1,y1))")));
  }

  TEST_CASE("IO substitution is strict, OI is not") {
    std::vector<TreeSet> args{TreeSet{term("e")}, TreeSet{}};
    CHECK(io_subst(term("f(y1,y1)"), args).empty());
    CHECK(oi_subst(term("f(y1,y1)"), args).size() == 1);
    CHECK(oi_subst(term("f(y1,y2)"), args).empty());
  }

  TEST_CASE("doubling transducer outputs") {
    Mtt m = fixtures::double_mtt();
    TreeSet io1 = translate(m, Mode::io, term("a(e)"));
    CHECK(strings(io1) == std::vector<std::string>{"f(f(e,e),f(e,e))", "f(g(e,e),g(e,e))",
                                                   "g(f(e,e),f(e,e))", "g(g(e,e),g(e,e))"});
    CHECK(translate(m, Mode::oi, term("a(e)")).size() == 8);
    CHECK(translate(m, Mode::io, term("a(a(e))")).size() == 16);
    CHECK(translate(m, Mode::io, term("e")).empty());
    TreeSet st = eval_state(m, Mode::io, m.state_id("double"), term("e"));
    CHECK(st == TreeSet{term("f(y1,y1)"), term("g(y1,y1)")});
  }

  TEST_CASE("membership verdicts and budgets") {
    Mtt m = fixtures::double_mtt();
    CHECK(oracle_member(m, Mode::io, term("a(e)"), term("f(f(e,e),f(e,e))")) == Verdict::yes);
    CHECK(oracle_member(m, Mode::io, term("a(e)"), term("f(f(e,e),g(e,e))")) == Verdict::no);
    CHECK(oracle_member(m, Mode::oi, term("a(e)"), term("f(f(e,e),g(e,e))")) == Verdict::yes);
    OracleOptions tight;
    tight.budget.max_steps = 3;
    const Tree big = *translate(m, Mode::io, term("a(a(e))")).begin();
    CHECK(oracle_member(m, Mode::oi, term("a(a(e))"), big, tight) == Verdict::unknown);
    // pruning against a one-node t settles this within the same budget
    CHECK(oracle_member(m, Mode::oi, term("a(a(a(e)))"), term("e"), tight) == Verdict::no);
    Budget zero;
    zero.max_set_size = 0;
    CHECK(error_kind([&] { zero.check(); }) == ErrorKind::budget_exceeded);
    Budget small;
    small.max_set_size = 10;
    CHECK(error_kind([&] { translate(m, Mode::io, term("a(a(e))"), small); }) ==
          ErrorKind::budget_exceeded);
  }

  TEST_CASE("pruning does not change verdicts") {
    Mtt m = fixtures::double_mtt();
    OracleOptions plain;
    plain.prune = false;
    TreeSet all = translate(m, Mode::oi, term("a(a(e))"));
    CHECK(all.size() == 32768);  // 15 inner nodes, each f or g
    std::size_t i = 0;
    for (const Tree& t : all) {
      if (i++ % 4096) continue;
      CHECK(oracle_member(m, Mode::oi, term("a(a(e))"), t) == Verdict::yes);
      CHECK(oracle_member(m, Mode::oi, term("a(a(e))"), t, plain) == Verdict::yes);
    }
    for (const Tree& t : translate(m, Mode::oi, term("a(e)"))) {
      CHECK(oracle_member(m, Mode::oi, term("a(e)"), t, plain) == Verdict::yes);
      CHECK(oracle_member(m, Mode::io, term("a(e)"), t, plain) ==
            oracle_member(m, Mode::io, term("a(e)"), t));
    }
    CHECK(oracle_member(m, Mode::oi, term("a(a(e))"), term("f(e,e)")) == Verdict::no);
    // unpruned, the default tree cap of 4|t| is below the output size
    CHECK(oracle_member(m, Mode::oi, term("a(a(e))"), term("f(e,e)"), plain) == Verdict::unknown);
    plain.budget.max_tree_size = 31;
    CHECK(oracle_member(m, Mode::oi, term("a(a(e))"), term("f(e,e)"), plain) == Verdict::no);
  }

  TEST_CASE("multi-return state outputs") {
    MrMtt r = fixtures::reverse_mrtt();
    auto tuples = eval_mr_state(r, 1, term("s(z)"));
    REQUIRE(tuples.size() == 2);
    CHECK(to_string(tuples[0][0]) == "a(e)");
    CHECK(to_string(tuples[0][1]) == "A(y1)");
    CHECK(to_string(tuples[1][0]) == "b(e)");
    CHECK(to_string(tuples[1][1]) == "B(y1)");
    TreeSet out = eval_mr_io(r, term("s(s(s(z)))"));
    CHECK(out.size() == 8);
    CHECK(out.contains(term("r(a(a(b(e))),B(A(A(E))))")));
    CHECK(oracle_member_mr(r, term("s(s(s(z)))"), term("r(a(a(b(e))),B(A(A(E))))")) ==
          Verdict::yes);
    CHECK(oracle_member_mr(r, term("s(s(s(z)))"), term("r(a(a(b(e))),A(A(B(E))))")) ==
          Verdict::no);
  }

  TEST_CASE("TAC reference run") {
    TacMtt p = fixtures::pair_equality();
    CHECK(tac_states_reference(p.lookahead, term("pi(a(e),e)")) == std::vector<std::size_t>{0});
    CHECK(translate(p, Mode::io, term("pi(a(e),a(e))")) == TreeSet{term("e")});
    CHECK(translate(p, Mode::io, term("pi(a(e),e)")).empty());
  }
}
