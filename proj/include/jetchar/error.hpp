#pragma once

#include <stdexcept>
#include <string>

namespace jetchar {

enum class Err {
  NotAUnit,
  IncompatibleTower,
  NotInvertible,
  CapExceeded,
  NotAbelian,
  TwistIncompatible,
  DomainMismatch,
  DepthMismatch,
  NotGeneric,
  NoVeryRegularElement,
  NoInvertibleSolution,
  NotLeviSubsystem,
  UnsupportedKind,
  InvalidTower,
  TwistNotSplit,
  BadInput,
  Internal,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::NotAUnit: return "NotAUnit";
    case Err::IncompatibleTower: return "IncompatibleTower";
    case Err::NotInvertible: return "NotInvertible";
    case Err::CapExceeded: return "CapExceeded";
    case Err::NotAbelian: return "NotAbelian";
    case Err::TwistIncompatible: return "TwistIncompatible";
    case Err::DomainMismatch: return "DomainMismatch";
    case Err::DepthMismatch: return "DepthMismatch";
    case Err::NotGeneric: return "NotGeneric";
    case Err::NoVeryRegularElement: return "NoVeryRegularElement";
    case Err::NoInvertibleSolution: return "NoInvertibleSolution";
    case Err::NotLeviSubsystem: return "NotLeviSubsystem";
    case Err::UnsupportedKind: return "UnsupportedKind";
    case Err::InvalidTower: return "InvalidTower";
    case Err::TwistNotSplit: return "TwistNotSplit";
    case Err::BadInput: return "BadInput";
    case Err::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Err code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace jetchar
