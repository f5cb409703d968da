#pragma once
// Exception taxonomy shared by all modules. The command-line tool maps these
// onto process exit codes, so every throw site picks the category carefully.

#include <stdexcept>
#include <string>

namespace braidflow {

// Malformed or out-of-contract input: bad word syntax, out-of-range indices,
// unusable layouts, unreadable files.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solver, certificate, or integrator failed to reach its tolerance.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A bounded search ran out of budget before reaching a definite answer.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The shape certificates themselves failed (a genuine negative verdict, as
// opposed to a solver breakdown). Subtyped so callers can report "the
// certificate failed" separately from "the numerics failed".
struct CertificationError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace braidflow
