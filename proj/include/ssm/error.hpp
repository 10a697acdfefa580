#pragma once

#include <stdexcept>
#include <string>

namespace ssm {

// Base for everything the engine throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected input that is well-formed but semantically unusable:
// incompatible causes, total conflict, missing questionnaire answers.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Unreadable or ill-formed documents. The message carries file and position.
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ssm
