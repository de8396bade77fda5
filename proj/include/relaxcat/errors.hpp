#pragma once

#include <stdexcept>
#include <string>

namespace relaxcat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: grid sizes, config keys, unknown names.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A state outside the physically admissible set (e.g. rho <= 0, p <= 0).
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

/// The cell-local implicit source solve failed.
class StiffSolveError : public Error {
 public:
  StiffSolveError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A stepper failed at a given cell (index in interior numbering, -1 if unknown).
class StepError : public Error {
 public:
  StepError(const std::string& what, int cell) : Error(what), cell_(cell) {}
  int cell() const { return cell_; }

 private:
  int cell_;
};

/// A time integration aborted; carries the failing time and cell.
class RunError : public Error {
 public:
  RunError(const std::string& what, double time, int cell)
      : Error(what), time_(time), cell_(cell) {}
  double time() const { return time_; }
  int cell() const { return cell_; }

 private:
  double time_;
  int cell_;
};

}  // namespace relaxcat
