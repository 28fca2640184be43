#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace walkdiv {

// Thrown when an input is legal but the requested computation exceeds a
// configured resource guard (binomial-row size, enumeration work budget,
// series truncation length). Distinct from std::invalid_argument so callers
// can map it to a "resource refusal" exit path instead of a usage error.
class guard_error : public std::runtime_error {
 public:
  explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

// Resource guards for the exact (big-integer) paths. Thresholds are
// configuration, not correctness: exceeding them refuses loudly rather than
// truncating silently.
struct Guards {
  std::uint64_t max_row = 20000;             // largest binomial row length
  std::uint64_t work_budget = 100'000'000;   // term evaluations per call
};

// Compensated (Kahan) accumulator.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace walkdiv
