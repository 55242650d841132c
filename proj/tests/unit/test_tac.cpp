#include "doctest.h"
#include "mttkit/mttkit.hpp"
#include "support/errors.hpp"
#include "support/fixtures.hpp"

using namespace mttkit;
using mttkit::testing::error_kind;
using fixtures::term;

namespace {

/// s for f-nodes with equal children, d for the others.
constexpr std::string_view kSameDiff = R"(mtt SameDiff {
  input  { f:2, e:0 }
  output { s:0, d:0, e:0 }
  state q0:0 init
  tac {
    states { p }
    trans e -> p
    trans f(p, p) -> p
  }
  rule q0(e) -> e
  rule q0(f(x1,x2)) when (_, _; eq 1 2) -> s
  rule q0(f(x1,x2)) when (_, _; neq 1 2) -> d
}
)";

}  // namespace

TEST_SUITE("tac") {
  TEST_CASE("pair equality") {
    TacMtt m = fixtures::pair_equality();
    CHECK(member_io_tac(m, term("pi(a(e),a(e))"), term("e")));
    CHECK(member_io_tac(m, term("pi(f(e,a(e)),f(e,a(e)))"), term("e")));
    CHECK_FALSE(member_io_tac(m, term("pi(a(e),e)"), term("e")));
    CHECK_FALSE(member_io_tac(m, term("pi(e,e)"), term("f(e,e)")));
    CHECK_FALSE(member_io_tac(m, term("a(e)"), term("e")));
  }

  TEST_CASE("runs memoize per DAG node and detect conflicts") {
    TacMtt m = fixtures::pair_equality();
    DagBuild b = build_dag(term("pi(a(e),a(e))"));
    TacRunner r(m.lookahead, b.dag);
    CHECK(r.state_of(b.root) == 0);
    CHECK(run_tac(m.lookahead, b.dag, b.root) == 0);

    Tac broken = m.lookahead;
    broken.transitions.erase(broken.transitions.begin() + 1);  // drop a(p) -> p
    try {
      run_tac(broken, b.dag, b.root);
      FAIL("expected NotTotal");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::not_total);
      CHECK(std::string(e.what()).find("position 1") != std::string::npos);
    }
    Tac twice = m.lookahead;
    twice.add_state("other");
    twice.transitions.push_back(TacTransition{"e", {}, {}, {}, 1});
    CHECK(error_kind([&] { run_tac(twice, b.dag, b.root); }) == ErrorKind::not_deterministic);
  }

  TEST_CASE("guards with wildcards and disequality") {
    TacMtt m = parse_tac_mtt(kSameDiff);
    CHECK(member_io_tac(m, term("f(e,e)"), term("s")));
    CHECK_FALSE(member_io_tac(m, term("f(e,e)"), term("d")));
    CHECK(member_io_tac(m, term("f(e,f(e,e))"), term("d")));
    CHECK(member_io_tac(m, term("e"), term("e")));
    auto trees = enumerate_trees(m.base.input, 7);
    for (const Tree& s : trees)
      for (const char* out : {"s", "d", "e"})
        CHECK(member_io_tac(m, s, term(out)) ==
              (oracle_member(m, Mode::io, s, term(out)) == Verdict::yes));
  }

  TEST_CASE("validation") {
    TacMtt m = fixtures::pair_equality();
    MttClass c = validate(m);
    CHECK(c.deterministic);
    CHECK_FALSE(c.total);
    CHECK(c.max_state_rank == 0);

    TacMtt bad = m;
    bad.rules[0].guard.eq.push_back({0, 4});
    CHECK(error_kind([&] { validate(bad); }) == ErrorKind::arity_mismatch);
    TacMtt unknown = m;
    unknown.rules[0].guard.states[0] = 7;
    CHECK(error_kind([&] { validate(unknown); }) == ErrorKind::unknown_state);
    Tac dup;
    dup.add_state("p");
    CHECK(error_kind([&] { dup.add_state("p"); }) == ErrorKind::duplicate_name);
  }

  TEST_CASE("trivial look-ahead matches the plain engine") {
    Mtt d = fixtures::double_mtt();
    TacMtt wrapped = with_trivial_lookahead(d);
    for (const char* s : {"e", "a(e)", "a(a(e))"})
      for (const Tree& t : translate(d, Mode::io, term("a(a(e))"))) {
        CHECK(member_io_tac(wrapped, term(s), t) == member_io(d, term(s), t));
      }
  }

  TEST_CASE("input symbols are checked") {
    TacMtt m = fixtures::pair_equality();
    CHECK(error_kind([&] { member_io_tac(m, term("q(e)"), term("e")); }) ==
          ErrorKind::alphabet_mismatch);
  }
}
