#pragma once

// Transducers shared by unit and acceptance tests.

#include <string_view>

#include "mttkit/mttkit.hpp"

namespace mttkit::fixtures {

inline constexpr std::string_view kDouble = R"(mtt Double {
  input  { a:1, e:0 }
  output { f:2, g:2, e:0 }
  state start:0 init
  state double:1
  rule start(a(x1)) -> double[x1](double[x1](e))
  rule double(e)(y1) -> f(y1,y1)
  rule double(e)(y1) -> g(y1,y1)
  rule double(a(x1))(y1) -> double[x1](double[x1](y1))
}
)";

inline constexpr std::string_view kReverse = R"(mrtt Rev {
  input  { s:1, z:0 }
  output { r:2, a:1, b:1, e:0, A:1, B:1, E:0 }
  state q0:0/1 init
  state q1:1/2
  rule q0(s(x1)) -> let (z1,z2) = q1[x1](A(E)) in ( r(a(z1), z2) )
  rule q0(s(x1)) -> let (z1,z2) = q1[x1](B(E)) in ( r(b(z1), z2) )
  rule q0(z) -> ( r(e, E) )
  rule q1(s(x1))(y1) -> let (z1,z2) = q1[x1](A(y1)) in ( a(z1), z2 )
  rule q1(s(x1))(y1) -> let (z1,z2) = q1[x1](B(y1)) in ( b(z1), z2 )
  rule q1(z)(y1) -> ( e, y1 )
}
)";

/// {(pi(s,s), e)}: the equality test sits in the rule's look-ahead key.
inline constexpr std::string_view kPairEquality = R"(mtt PairEq {
  input  { pi:2, f:2, a:1, e:0 }
  output { e:0 }
  state q0:0 init
  tac {
    states { p }
    trans e -> p
    trans a(p) -> p
    trans f(p, p) -> p
    trans pi(p, p) -> p
  }
  rule q0(pi(x1,x2)) when (p, p; eq 1 2) -> e
}
)";

/// Monadic reversal with relabeling: copy-free, one parameter.
inline constexpr std::string_view kCopyFree = R"(mtt CopyFree {
  input  { a:1, b:1, e:0 }
  output { a:1, b:1, e:0 }
  state q0:0 init
  state q:1
  rule q0(a(x1)) -> q[x1](a(e))
  rule q0(b(x1)) -> q[x1](b(e))
  rule q0(e) -> e
  rule q(a(x1))(y1) -> q[x1](a(y1))
  rule q(a(x1))(y1) -> q[x1](b(y1))
  rule q(b(x1))(y1) -> q[x1](a(y1))
  rule q(b(x1))(y1) -> q[x1](b(y1))
  rule q(e)(y1) -> y1
}
)";

inline Mtt double_mtt() { return parse_mtt(kDouble); }
inline MrMtt reverse_mrtt() { return parse_mrtt(kReverse); }
inline TacMtt pair_equality() { return parse_tac_mtt(kPairEquality); }
inline Mtt copy_free() { return parse_mtt(kCopyFree); }

inline Tree term(std::string_view text) { return parse_term(text); }

}  // namespace mttkit::fixtures
