#ifndef HYBRID_ERRORS_HPP
#define HYBRID_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hybrid {

// Config file problems (bad syntax, unknown key, missing section).
// Carries the 1-based line number when known; line 0 means "whole file".
class config_error : public std::runtime_error {
 public:
  config_error(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// A physics precondition of an operation is violated (pole hit, rate zero
// where a finite one is required, ...).
class precondition_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Drift matrix has an eigenvalue with non-negative real part; no steady state.
class instability_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fock-space truncation is (or became) inadequate.
class truncation_error : public std::runtime_error {
 public:
  truncation_error(const std::string& what, int suggested_dim = 0)
      : std::runtime_error(what), suggested_dim_(suggested_dim) {}
  int suggested_dim() const { return suggested_dim_; }

 private:
  int suggested_dim_;
};

// Adaptive integrator could not reach the requested accuracy (step underflow).
class integration_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace hybrid

#endif
