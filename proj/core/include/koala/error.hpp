#pragma once

#include <stdexcept>
#include <string>

namespace koala {

// Base of every exception thrown by the library. Callers that only need to
// separate user-facing failures from bugs can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller passed something the contract does not accept.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace koala
