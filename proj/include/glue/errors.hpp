#pragma once

#include <stdexcept>
#include <string>

namespace glue {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class Unsupported : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Checked integer arithmetic left the representable range.
class Overflow : public Error {
 public:
  using Error::Error;
};

// A construction whose correctness is a theorem produced a wrong answer.
class Falsification : public Error {
 public:
  using Error::Error;
};

}  // namespace glue
