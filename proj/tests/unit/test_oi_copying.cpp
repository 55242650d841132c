#include <random>

#include "doctest.h"
#include "mttkit/mttkit.hpp"
#include "support/errors.hpp"
#include "support/fixtures.hpp"
#include "support/random_mtt.hpp"

using namespace mttkit;
using mttkit::testing::error_kind;
using fixtures::term;

TEST_SUITE("oi_copying") {
  TEST_CASE("subset table numbering") {
    SubsetTable one(4, 1);
    CHECK(one.size() == 5);  // empty set and four singletons
    CHECK(one.subset(0).empty());
    SubsetTable two(4, 2);
    CHECK(two.size() == 1 + 4 + 6);
    for (std::size_t id = 0; id < two.size(); ++id) {
      auto s = two.subset(id);
      CHECK(two.id_of(s) == id);
    }
    std::vector<NodeRef> three{NodeRef(0), NodeRef(1), NodeRef(2)};
    CHECK(two.id_of(three) == SubsetTable::npos);
  }

  TEST_CASE("a zero bound is refused") {
    Mtt m = fixtures::copy_free();
    CHECK(error_kind([&] { member_oi_fc(m, CopyBound{0}, term("a(e)"), term("a(e)")); }) ==
          ErrorKind::unsound_bound);
  }

  TEST_CASE("copy-free reversal") {
    Mtt m = fixtures::copy_free();
    CHECK(member_oi_fc(m, CopyBound{1}, term("a(b(e))"), term("a(a(e))")));
    CHECK(member_oi_fc(m, CopyBound{1}, term("a(b(e))"), term("b(a(e))")));
    CHECK_FALSE(member_oi_fc(m, CopyBound{1}, term("a(b(e))"), term("a(b(e))")));
    CHECK_FALSE(member_oi_fc(m, CopyBound{1}, term("a(b(e))"), term("a(e)")));
    CHECK(error_kind([&] { member_oi_fc(m, CopyBound{1}, term("c(e)"), term("e")); }) ==
          ErrorKind::alphabet_mismatch);
  }

  TEST_CASE("the doubling transducer at height one needs c = 2") {
    Mtt m = fixtures::double_mtt();
    for (const Tree& t : translate(m, Mode::oi, term("a(e)")))
      CHECK(member_oi_fc(m, CopyBound{2}, term("a(e)"), t));
    CHECK(member_oi_fc(m, CopyBound{2}, term("a(e)"), term("f(f(e,e),g(e,e))")));
    CHECK_FALSE(member_oi_fc(m, CopyBound{2}, term("a(e)"), term("f(f(e,e),e)")));
  }

  TEST_CASE("unused arguments may be empty under OI") {
    // q0(a(x1)) -> q[x1](p[x1]) where p has no rule on e, q ignores y1
    Mtt m;
    m.input = {{"a", 1}, {"e", 0}};
    m.output = {{"e", 0}};
    auto q0 = m.add_state("q0", 0);
    auto q = m.add_state("q", 1);
    auto p = m.add_state("p", 0);
    m.add_rule(q0, "a", Rhs::call(q, 0, {Rhs::call(p, 0)}));
    m.add_rule(q, "e", Rhs::output("e"));
    validate(m);
    CHECK(member_oi_fc(m, CopyBound{1}, term("a(e)"), term("e")));
    CHECK(oracle_member(m, Mode::oi, term("a(e)"), term("e")) == Verdict::yes);
    CHECK_FALSE(member_io(m, term("a(e)"), term("e")));
  }

  TEST_CASE("run state size respects the subset bound") {
    Mtt m = fixtures::copy_free();
    DagBuild t = build_dag(term("a(b(a(e)))"));
    FcRunState r = run_oi_fc(m, CopyBound{1}, term("a(a(b(e)))"), t.dag);
    CHECK(r.subsets().size() == t.dag.node_count() + 1);
    CHECK(r.entry_count() > 0);
    FcRunState again = run_oi_fc(m, CopyBound{1}, term("a(a(b(e)))"), t.dag);
    CHECK(again == r);
  }

  TEST_CASE("copy-bound estimates") {
    CopyEstimate linear = estimate_copy_bound(fixtures::copy_free(), 4);
    CHECK(linear.bound == 1);
    CHECK(linear.conforming);
    CopyEstimate dbl = estimate_copy_bound(fixtures::double_mtt(), 3);
    CHECK(dbl.bound >= 4);
    CHECK_FALSE(dbl.conforming);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) {
      Mtt m = random::random_two_copying_mtt(rng);
      Budget b;
      b.max_steps = 2'000'000;
      try {
        CHECK(estimate_copy_bound(m, 3, b).bound <= 2);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::budget_exceeded);
      }
    }
  }

  TEST_CASE("agreement with the OI oracle on parameter-linear mtts") {
    std::mt19937_64 rng(11);
    random::Shape shape;
    shape.param_copies = 1;
    auto inputs = enumerate_trees(random::input_alphabet(), 4);
    Budget budget;
    budget.max_set_size = 2000;
    budget.max_steps = 200'000;
    for (int i = 0; i < 25; ++i) {
      Mtt m = random::random_mtt(rng, shape);
      for (const Tree& s : inputs) {
        TreeSet out;
        try {
          out = translate(m, Mode::oi, s, budget);
        } catch (const Error&) {
          continue;
        }
        std::size_t taken = 0;
        for (const Tree& t : out) {
          if (++taken > 4) break;
          CHECK(member_oi_fc(m, CopyBound{1}, s, t));
          for (const Tree& u : random::mutations(t, m.output))
            CHECK(member_oi_fc(m, CopyBound{1}, s, u) == out.contains(u));
        }
      }
    }
  }

  TEST_CASE("membership reads the same relation as the full run") {
    std::mt19937_64 rng(17);
    auto inputs = enumerate_trees(random::input_alphabet(), 4);
    auto targets = enumerate_trees(random::output_alphabet(), 4);
    for (int i = 0; i < 15; ++i) {
      Mtt m = random::random_two_copying_mtt(rng);
      for (std::size_t k = 0; k < inputs.size(); k += 3)
        for (std::size_t j = 0; j < targets.size(); j += 5) {
          const Tree& s = inputs[k];
          DagBuild t = build_dag(targets[j]);
          FcRunState full = run_oi_fc(m, CopyBound{2}, s, t.dag);
          CHECK(member_oi_fc(m, CopyBound{2}, s, targets[j]) == full.contains(m.initial, {}, t.root));
        }
    }
  }
}
