#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace mtd {

using cd = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Exit codes shared by the CLI and thrown errors.
enum class ErrorCode {
  ok = 0,
  io = 1,
  config = 2,
  placement = 3,
  inversion = 4,
  optimizer = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) {
  throw Error(c, msg);
}

inline void require(bool cond, ErrorCode c, const std::string& msg) {
  if (!cond) fail(c, msg);
}

}  // namespace mtd
