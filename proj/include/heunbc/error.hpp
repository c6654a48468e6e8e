#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heunbc {

// Failure classes surfaced by the library.  The CLI maps these to process
// exit codes, so the granularity here is part of the external contract.
enum class errc {
  invalid_argument,        // malformed input (sizes, non-finite values, ...)
  precondition,            // a documented operation precondition is violated
  degenerate_parameter,    // a parameter hits a pole of the construction
  convergence_failure,     // iteration cap reached; best iterate attached
  division_error,          // polynomial division by the zero polynomial
  insufficient_truncation, // series tail bound above the requested tolerance
  degenerate_integral,     // integral vanishes at every sample point
  evaluation,              // non-finite value met while sampling an integrand
  verification,            // a verification step failed beyond tolerance
};

class error : public std::runtime_error {
public:
  error(errc kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}

  errc kind() const noexcept { return kind_; }

  // Optional payloads, filled where the failure has a useful witness.
  long index = -1;                            // offending index / node
  std::vector<std::complex<double>> iterate;  // best iterate on convergence failure

private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) {
  throw error(kind, msg);
}

[[noreturn]] inline void fail_at(errc kind, const std::string& msg, long index) {
  error e(kind, msg);
  e.index = index;
  throw e;
}

}  // namespace heunbc
