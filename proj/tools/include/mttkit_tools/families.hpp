#pragma once

// Parametric (mtt, s, t) families used by `mttkit bench` and the benchmarks.

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "mttkit/mtt.hpp"
#include "mttkit/trees.hpp"

namespace mttkit::families {

/// Copy-free monadic reversal with relabeling (m = 1).
std::string_view copy_free_source();
Mtt copy_free();
/// Chain of n nodes over {a, b, e}, root first.
Tree copy_free_input(std::size_t n);
/// The exact reversal of copy_free_input(n): always a member, |t| = n.
Tree copy_free_output(std::size_t n);

/// Doubling transducer: on a^n(e) it produces full binary trees of height 2^n.
std::string_view double_source();
Mtt double_mtt();
Tree double_input(std::size_t n);
/// f-only full binary tree of height 2^n.
Tree double_output(std::size_t n);
/// Node count of double_output(n), saturating at UINT64_MAX.
std::uint64_t double_output_size(std::size_t n);

}  // namespace mttkit::families
