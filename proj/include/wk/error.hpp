#pragma once

#include <stdexcept>
#include <string>

namespace wk {

enum class ErrorKind {
  InvalidArgument,  // bad parameters, malformed input
  NotFound,         // unknown index, missing witness, missing file
  Domain,           // point or ball outside the sampled box, grid too coarse
  Numerical,        // non-finite values produced
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace wk
