#pragma once

#include <stdexcept>
#include <string>

namespace augtree {

// Bad input, bad configuration, unparsable files.  CLI exit code 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Configured size or depth cap hit.  CLI exit code 1.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal invariant violated; indicates a bug, never bad input.  CLI exit code 2.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace augtree
