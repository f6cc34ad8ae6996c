#pragma once

#include <stdexcept>
#include <string>

namespace erasim {

// Mirrors the error codes of the public C header.
enum class Errc {
  check = 1,
  usage = 2,
  io = 3,
  limit = 4,
  transport = 5,
  protocol = 6,
  internal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace erasim
