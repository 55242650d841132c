#pragma once

#include <optional>

#include "mttkit/errors.hpp"

namespace mttkit::testing {

/// Kind of the mttkit::Error raised by `f`, or nullopt if it returned.
template <class F>
std::optional<ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace mttkit::testing
