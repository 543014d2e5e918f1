#pragma once

#include <stdexcept>
#include <string>

namespace rank16 {

// Raised when an input violates an operation's documented precondition
// (wrong residue class, 8 not dividing h, inadmissible pair, ...).  Callers
// that need to distinguish "refused" from "broken" catch this type.
class precondition_error : public std::invalid_argument {
 public:
  explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace rank16
