#include <random>

#include "doctest.h"
#include "mttkit/mttkit.hpp"
#include "support/errors.hpp"
#include "support/fixtures.hpp"
#include "support/random_mtt.hpp"

using namespace mttkit;
using mttkit::testing::error_kind;
using fixtures::term;

namespace {

std::string with_rule(const std::string& rule) {
  return "mrtt M {\n  input { s:1, z:0 }\n  output { a:1, e:0 }\n  state q0:0/1 init\n"
         "  state q:1/2\n  " +
         rule + "\n}\n";
}

}  // namespace

TEST_SUITE("multi_return") {
  TEST_CASE("reverse pairs") {
    MrMtt m = fixtures::reverse_mrtt();
    MrClass c = validate(m);
    CHECK(c.max_dimension == 2);
    CHECK(c.max_state_rank == 1);
    CHECK_FALSE(c.deterministic);
    CHECK(c.total);
    CHECK(member_mr_io(m, term("s(s(s(z)))"), term("r(a(a(b(e))),B(A(A(E))))")));
    CHECK_FALSE(member_mr_io(m, term("s(s(s(z)))"), term("r(a(a(b(e))),A(A(B(E))))")));
    CHECK(member_mr_io(m, term("z"), term("r(e,E)")));
    CHECK_FALSE(member_mr_io(m, term("s(z)"), term("r(e,E)")));
  }

  TEST_CASE("malformed lets") {
    CHECK(error_kind([] {
            parse_mrtt(with_rule("rule q0(s(x1)) -> let (z1) = q[x1](e) in ( z1 )"));
          }) == ErrorKind::malformed_let);
    CHECK(error_kind([] {
            parse_mrtt(with_rule("rule q0(s(x1)) -> ( z1 )"));
          }) == ErrorKind::malformed_let);
    CHECK(error_kind([] {
            parse_mrtt(with_rule(
                "rule q0(s(x1)) -> let (z1,z2) = q[x1](e) in let (z1,z3) = q[x1](e) in ( z1 )"));
          }) == ErrorKind::malformed_let);
    CHECK(error_kind([] {
            parse_mrtt(with_rule("rule q0(s(x1)) -> let (z1,z2) = q[x1](e) in ( z1, z2 )"));
          }) == ErrorKind::arity_mismatch);
    CHECK(error_kind([] {
            parse_mrtt(with_rule("rule q0(s(x1)) -> let (z1,z2) = q[x1](e) in ( z1 )"));
          }) == std::nullopt);
  }

  TEST_CASE("the initial state returns one tree") {
    std::string text = "mrtt M {\n  input { z:0 }\n  output { e:0 }\n  state q0:0/2 init\n"
                       "  rule q0(z) -> ( e, e )\n}\n";
    CHECK(error_kind([&] { parse_mrtt(text); }) == ErrorKind::bad_initial_rank);
  }

  TEST_CASE("embedded plain mtts agree with the IO engine") {
    Mtt d = fixtures::double_mtt();
    MrMtt e = embed_mtt(d);
    CHECK(validate(e).max_dimension == 1);
    for (const char* s : {"e", "a(e)", "a(a(e))"})
      for (const Tree& t : translate(d, Mode::io, term("a(a(e))"))) {
        CHECK(member_mr_io(e, term(s), t) == member_io(d, term(s), t));
      }
    std::mt19937_64 rng(3);
    auto inputs = enumerate_trees(random::input_alphabet(), 4);
    Budget budget;
    budget.max_set_size = 2000;
    budget.max_steps = 200'000;
    for (int i = 0; i < 20; ++i) {
      Mtt m = random::random_mtt(rng);
      MrMtt mr = embed_mtt(m);
      for (const Tree& s : inputs) {
        TreeSet out;
        try {
          out = translate(m, Mode::io, s, budget);
        } catch (const Error&) {
          continue;
        }
        std::size_t taken = 0;
        for (const Tree& t : out) {
          if (++taken > 3) break;
          CHECK(member_mr_io(mr, s, t));
          for (const Tree& u : random::mutations(t, m.output))
            CHECK(member_mr_io(mr, s, u) == member_io(m, s, u));
        }
      }
    }
  }

  TEST_CASE("the environment cap is a hard error") {
    MrMtt m = fixtures::reverse_mrtt();
    MrLimits tiny;
    tiny.max_environments = 1;
    CHECK(error_kind([&] {
            member_mr_io(m, term("s(s(z))"), term("r(a(a(e)),A(A(E)))"), tiny);
          }) == ErrorKind::environment_limit);
  }

  TEST_CASE("run state entries") {
    MrMtt m = fixtures::reverse_mrtt();
    DagBuild t = build_dag(term("r(a(b(e)),B(A(E)))"));
    MrRunState r = run_mr_io(m, term("s(s(z))"), t.dag);
    std::vector<NodeRef> none;
    std::vector<NodeRef> want{t.root};
    CHECK(r.contains(m.initial, none, want));
    CHECK(r.entry_count() > 0);
  }

  TEST_CASE("undeclared input symbols") {
    MrMtt m = fixtures::reverse_mrtt();
    CHECK(error_kind([&] { member_mr_io(m, term("t(z)"), term("e")); }) ==
          ErrorKind::alphabet_mismatch);
  }
}
