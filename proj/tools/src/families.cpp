#include "mttkit_tools/families.hpp"

#include <limits>

#include "mttkit/dsl.hpp"

namespace mttkit::families {

namespace {

constexpr std::string_view kCopyFree = R"(mtt CopyFree {
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

constexpr std::string_view kDouble = R"(mtt Double {
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

const char* chain_label(std::size_t i) { return i % 3 == 0 ? "b" : "a"; }

}  // namespace

std::string_view copy_free_source() { return kCopyFree; }
Mtt copy_free() { return parse_mtt(kCopyFree); }

Tree copy_free_input(std::size_t n) {
  Tree t("e");
  for (std::size_t i = n; i-- > 1;) t = Tree(chain_label(i), {std::move(t)});
  return t;
}

Tree copy_free_output(std::size_t n) {
  Tree t("e");
  for (std::size_t i = 1; i < n; ++i) t = Tree(chain_label(i), {std::move(t)});
  return t;
}

std::string_view double_source() { return kDouble; }
Mtt double_mtt() { return parse_mtt(kDouble); }

Tree double_input(std::size_t n) {
  Tree t("e");
  for (std::size_t i = 0; i < n; ++i) t = Tree("a", {std::move(t)});
  return t;
}

Tree double_output(std::size_t n) {
  Tree t("e");
  const std::size_t height = std::size_t{1} << n;
  for (std::size_t i = 0; i < height; ++i) t = Tree("f", {t, t});
  return t;
}

std::uint64_t double_output_size(std::size_t n) {
  // 2^(2^n + 1) - 1
  if (n >= 6) return std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t exponent = (std::uint64_t{1} << n) + 1;
  return (std::uint64_t{1} << exponent) - 1;
}

}  // namespace mttkit::families
