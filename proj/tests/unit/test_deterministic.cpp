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

constexpr std::string_view kDetDouble = R"(mtt DetDouble {
  input  { a:1, e:0 }
  output { f:2, e:0 }
  state start:0 init
  state double:1
  rule start(a(x1)) -> double[x1](double[x1](e))
  rule start(e) -> e
  rule double(e)(y1) -> f(y1,y1)
  rule double(a(x1))(y1) -> double[x1](double[x1](y1))
}
)";

/// Monadic copy a -> a, e -> e.
constexpr std::string_view kIdentity = R"(mtt Id {
  input  { a:1, e:0 }
  output { a:1, e:0 }
  state q0:0 init
  rule q0(a(x1)) -> a(q0[x1])
  rule q0(e) -> e
}
)";

/// Monadic a^n e -> a^(2n) e.
constexpr std::string_view kTwice = R"(mtt Twice {
  input  { a:1, e:0 }
  output { a:1, e:0 }
  state q0:0 init
  rule q0(a(x1)) -> a(a(q0[x1]))
  rule q0(e) -> e
}
)";

/// Erases everything: the output is always e.
constexpr std::string_view kErase = R"(mtt Erase {
  input  { a:1, e:0 }
  output { a:1, e:0 }
  state q0:0 init
  rule q0(a(x1)) -> q0[x1]
  rule q0(e) -> e
}
)";

Tree chain(std::size_t n) {
  Tree t("e");
  for (std::size_t i = 0; i < n; ++i) t = Tree("a", {std::move(t)});
  return t;
}

}  // namespace

TEST_SUITE("deterministic") {
  TEST_CASE("single stage agrees with the IO engine") {
    Mtt m = parse_mtt(kDetDouble);
    for (std::size_t n = 0; n <= 3; ++n) {
      TreeSet out = translate(m, Mode::io, chain(n));
      REQUIRE(out.size() == 1);
      const Tree& t = *out.begin();
      CHECK(member_det({m}, Mode::io, chain(n), t));
      CHECK(member_det({m}, Mode::oi, chain(n), t));
      CHECK(member_io(m, chain(n), t));
      CHECK(member_det({m}, Mode::io, chain(n), term("f(e,e)")) == (t == term("f(e,e)")));
    }
  }

  TEST_CASE("the size bound aborts doubling early") {
    Mtt m = parse_mtt(kDetDouble);
    CHECK_FALSE(member_det({m}, Mode::io, chain(19), term("f(e,e)")));
    DetStats st = last_det_stats();
    CHECK(st.aborted);
    CHECK(st.bound == 2 * 3);
    CHECK(st.nodes_built < 1000);
  }

  TEST_CASE("composition") {
    Mtt id = parse_mtt(kIdentity), twice = parse_mtt(kTwice), erase = parse_mtt(kErase);
    CHECK(member_det({twice, twice}, Mode::io, chain(2), chain(8)));
    CHECK_FALSE(member_det({twice, twice}, Mode::io, chain(2), chain(4)));
    CHECK(member_det({id, twice, id}, Mode::io, chain(3), chain(6)));
    CHECK(member_det({twice, erase}, Mode::io, chain(1), term("e")));
    CHECK(member_det({}, Mode::io, chain(3), chain(3)));
    CHECK_FALSE(member_det({}, Mode::io, chain(3), chain(2)));
  }

  TEST_CASE("an intermediate overflow before a shrinking stage is not guessed") {
    Mtt twice = parse_mtt(kTwice), erase = parse_mtt(kErase);
    std::vector<Mtt> stages{twice, twice, twice, twice, erase};
    // 2^4 * n grows past 2^5 * |t| with |t| = 1 while erase would shrink it
    CHECK(error_kind([&] { member_det(stages, Mode::io, chain(40), term("e")); }) ==
          ErrorKind::budget_exceeded);
  }

  TEST_CASE("an overflow followed by size-monotone stages is a no") {
    Mtt twice = parse_mtt(kTwice);
    CHECK_FALSE(member_det({twice, twice, twice}, Mode::io, chain(40), chain(3)));
    CHECK(last_det_stats().aborted);
  }

  TEST_CASE("nondeterministic or partial stages are refused") {
    CHECK(error_kind([] {
            member_det({fixtures::double_mtt()}, Mode::io, term("a(e)"), term("e"));
          }) == ErrorKind::not_deterministic);
    Mtt partial = parse_mtt(kTwice);
    Mtt p;
    p.input = partial.input;
    p.output = partial.output;
    auto q0 = p.add_state("q0", 0);
    p.add_rule(q0, "e", Rhs::output("e"));
    CHECK(error_kind([&] { member_det({p}, Mode::io, chain(1), term("e")); }) ==
          ErrorKind::not_total);
  }

  TEST_CASE("random deterministic total mtts") {
    std::mt19937_64 rng(99);
    random::Shape shape;
    shape.deterministic = true;
    auto inputs = enumerate_trees(random::input_alphabet(), 5);
    for (int i = 0; i < 20; ++i) {
      Mtt m = random::random_mtt(rng, shape);
      for (const Tree& s : inputs) {
        TreeSet out = translate(m, Mode::io, s);
        REQUIRE(out.size() <= 1);
        for (const Tree& t : out) {
          CHECK(member_det({m}, Mode::io, s, t));
          for (const Tree& u : random::mutations(t, m.output))
            CHECK(member_det({m}, Mode::io, s, u) == member_io(m, s, u));
        }
      }
    }
  }
}
