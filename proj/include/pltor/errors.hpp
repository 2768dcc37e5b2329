#pragma once

#include <stdexcept>
#include <string>

namespace pltor {

enum class ErrorCode {
  NonManifold,
  OrientationClash,
  BadArity,
  OpenLink,
  NotRealizable,
  Degenerate,
  ResampleExhausted,
  CurvedInput,
  Monodromy,
  GaugeDegenerate,
  ShapeMismatch,
  Singular,
  DegenerateSite,
  WrongLink,
  BadParams,
};

const char* to_string(ErrorCode c);

/// Library error carrying one of the contract error codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode c, const std::string& msg) {
  throw Error(c, msg);
}

}  // namespace pltor
