#pragma once

#include <stdexcept>
#include <string>

// Error types that callers are expected to branch on.  Everything else in the
// library throws the matching <stdexcept> type directly.

namespace sumlab {

// The group does not have enough elements for the requested construction.
class GroupTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A probe counter went past its configured cap.
class ProbeCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A data structure needed more probes per query than the protocol allows.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sumlab
