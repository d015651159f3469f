#ifndef SUBJFAIR_ERROR_H_
#define SUBJFAIR_ERROR_H_

#include <stdexcept>
#include <string>

namespace subjfair {

// Base class for every error raised by the library. Subclasses carry enough
// structure for the service layer to pick an HTTP status.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class Conflict : public Error {
 public:
  using Error::Error;
};

// A request names a pair the service never assigned to that judge.
class Unassigned : public Error {
 public:
  using Error::Error;
};

}  // namespace subjfair

#endif  // SUBJFAIR_ERROR_H_
