#pragma once

#include <stdexcept>
#include <string>

namespace ssg {

/// Input violates an operation's precondition (bad prime, malformed model).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical invariant failed to hold; indicates a bug, not bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The requested computation needs machinery outside the supported range
/// (e.g. a splitting field of degree > 6 over F_{p^2}).
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SSG_CHECK(cond, msg)                                              \
  do {                                                                    \
    if (!(cond)) throw ::ssg::InvariantError(std::string(msg) + " [" #cond "]"); \
  } while (0)

}  // namespace ssg
