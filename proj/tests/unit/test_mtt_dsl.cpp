#include <random>

#include "doctest.h"
#include "mttkit/mttkit.hpp"
#include "support/errors.hpp"
#include "support/fixtures.hpp"
#include "support/random_mtt.hpp"

using namespace mttkit;
using mttkit::testing::error_kind;

namespace {

std::string with_rule(const std::string& rule) {
  return "mtt M {\n  input { a:1, e:0 }\n  output { f:2, e:0 }\n  state q0:0 init\n"
         "  state q:1\n  " +
         rule + "\n}\n";
}

}  // namespace

TEST_SUITE("mtt") {
  TEST_CASE("the doubling transducer parses and classifies") {
    Mtt m = fixtures::double_mtt();
    CHECK(m.states.size() == 2);
    CHECK(m.rule_count() == 4);
    CHECK(m.rules_for(m.state_id("double"), "e").size() == 2);
    MttClass c = validate(m);
    CHECK_FALSE(c.deterministic);
    CHECK_FALSE(c.total);         // start(e) has no rule
    CHECK_FALSE(c.linear_input);  // x1 twice in start(a(x1))
    CHECK_FALSE(c.linear_params);
    CHECK(c.max_state_rank == 1);
    CHECK(to_string(c) ==
          "deterministic: false, total: false, linear_input: false, linear_params: false, m: 1");
  }

  TEST_CASE("classification of small handmade mtts") {
    Mtt m;
    m.input = {{"a", 1}, {"e", 0}};
    m.output = {{"a", 1}, {"e", 0}};
    auto q0 = m.add_state("q0", 0);
    m.add_rule(q0, "a", Rhs::output("a", {Rhs::call(q0, 0)}));
    m.add_rule(q0, "e", Rhs::output("e"));
    MttClass c = validate(m);
    CHECK(c.deterministic);
    CHECK(c.total);
    CHECK(c.linear_input);
    CHECK(c.linear_params);
    CHECK(c.max_state_rank == 0);
    CHECK_FALSE(m.add_rule(q0, "e", Rhs::output("e")));  // structural duplicate
    CHECK(m.rule_count() == 2);
  }

  TEST_CASE("structural errors name the rule") {
    Mtt m;
    m.input = {{"a", 1}, {"e", 0}};
    m.output = {{"e", 0}};
    auto q0 = m.add_state("q0", 0);
    CHECK(error_kind([&] { m.add_state("q0", 1); }) == ErrorKind::duplicate_name);
    m.add_rule(q0, "a", Rhs::call(q0, 1));
    CHECK(error_kind([&] { validate(m); }) == ErrorKind::arity_mismatch);

    Mtt n;
    n.input = {{"e", 0}};
    n.output = {{"e", 0}};
    n.add_state("q0", 1);
    CHECK(error_kind([&] { validate(n); }) == ErrorKind::bad_initial_rank);

    Mtt u;
    u.input = {{"e", 0}};
    u.output = {{"e", 0}};
    auto s0 = u.add_state("q0", 0);
    u.add_rule(s0, "e", Rhs::output("zz"));
    CHECK(error_kind([&] { validate(u); }) == ErrorKind::unknown_symbol);

    Mtt p;
    p.input = {{"e", 0}};
    p.output = {{"e", 0}};
    auto p0 = p.add_state("q0", 0);
    p.add_rule(p0, "e", Rhs::param(0));
    CHECK(error_kind([&] { validate(p); }) == ErrorKind::arity_mismatch);

    Mtt s;
    s.input = {{"e", 0}};
    s.output = {{"e", 0}};
    auto t0 = s.add_state("q0", 0);
    s.add_rule(t0, "e", Rhs::call(5, 0));
    CHECK(error_kind([&] { validate(s); }) == ErrorKind::unknown_state);
  }

  TEST_CASE("DSL errors carry positions") {
    CHECK(error_kind([] { parse_mtt(with_rule("rule q0(a(x1)) -> q[x1](e)")); }) == std::nullopt);
    auto syntax = [](const std::string& text) {
      try {
        parse_mtt(text);
      } catch (const SyntaxError& e) {
        return std::pair{e.line(), e.column()};
      }
      return std::pair<std::size_t, std::size_t>{0, 0};
    };
    CHECK(syntax(with_rule("rule q0(a(x1)) => e")).first == 6);
    CHECK(syntax("mtt M {\n  input { a:1 \n}").first > 0);
    CHECK(error_kind([] { parse_mtt(with_rule("rule q0(a(x1)) -> q[x1]")); }) ==
          ErrorKind::arity_mismatch);
    CHECK(error_kind([] { parse_mtt(with_rule("rule q0(a(x1)) -> g(e)")); }) ==
          ErrorKind::unknown_symbol);
    CHECK(error_kind([] { parse_mtt(with_rule("rule nope(a(x1)) -> e")); }) ==
          ErrorKind::unknown_state);
    CHECK(error_kind([] { parse_mtt(with_rule("rule q(e)(y1) -> y2")); }) ==
          ErrorKind::arity_mismatch);
    CHECK(error_kind([] { detect_model_kind("nothing here"); }) == ErrorKind::syntax_error);
  }

  TEST_CASE("model kinds") {
    CHECK(detect_model_kind(fixtures::kDouble) == ModelKind::mtt);
    CHECK(detect_model_kind(fixtures::kPairEquality) == ModelKind::tac_mtt);
    CHECK(detect_model_kind(fixtures::kReverse) == ModelKind::mrtt);
  }

  TEST_CASE("pretty printing round-trips") {
    Mtt d = fixtures::double_mtt();
    Mtt again = parse_mtt(pretty_print(d));
    CHECK(pretty_print(again) == pretty_print(d));
    CHECK(again.rules() == d.rules());

    TacMtt p = fixtures::pair_equality();
    TacMtt p2 = parse_tac_mtt(pretty_print(p));
    CHECK(pretty_print(p2) == pretty_print(p));

    MrMtt r = fixtures::reverse_mrtt();
    MrMtt r2 = parse_mrtt(pretty_print(r));
    CHECK(pretty_print(r2) == pretty_print(r));
    CHECK(r2.rules() == r.rules());

    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
      Mtt m = random::random_mtt(rng);
      Mtt m2 = parse_mtt(pretty_print(m));
      CHECK(m2.rules() == m.rules());
      CHECK(validate(m2) == validate(m));
    }
  }

  TEST_CASE("size of an mtt is the sum of right-hand sides") {
    Mtt d = fixtures::double_mtt();
    // double[x1](double[x1](e)) = 3, f(y1,y1) = 3, g(y1,y1) = 3, double(double(y1)) = 3
    CHECK(d.size() == 12);
    CHECK(d.max_state_rank() == 1);
  }
}
