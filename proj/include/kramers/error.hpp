#pragma once

#include <stdexcept>
#include <string>

namespace kramers {

/// Invalid arguments or inconsistent inputs (bad spin, dimension mismatch, unknown parameter).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical invariant broke during a computation (non-Hermitian step, lost unitarity).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double time, double defect)
      : std::runtime_error(what), time_(time), defect_(defect) {}

  double time() const noexcept { return time_; }
  double defect() const noexcept { return defect_; }

 private:
  double time_;
  double defect_;
};

}  // namespace kramers
