#pragma once

#include <stdexcept>

namespace mdist {

/// A runtime invariant of the pipeline itself was violated (distinct from
/// bad inputs and I/O failures; the CLI maps this to its own exit code).
struct InternalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mdist
