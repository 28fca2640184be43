#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace walkdiv {

// Per-index truncation of the candidate divisors:
//   Theta(theta):  admit d <= n^theta                (non-decreasing in n)
//   EtaSqrt(eta):  admit d <  eta * sqrt(n / log n)  (n >= 2; nothing at n = 1)
struct Cutoff {
  enum class Kind { Theta, EtaSqrt };

  Kind kind;
  double value;

  static Cutoff theta(double t) {
    if (!(t > 0.0) || t > 0.5) throw std::invalid_argument("Cutoff: theta must be in (0, 1/2]");
    return {Kind::Theta, t};
  }
  static Cutoff eta_sqrt(double e) {
    if (!(e > 0.0)) throw std::invalid_argument("Cutoff: eta must be > 0");
    return {Kind::EtaSqrt, e};
  }

  double bound_at(std::uint64_t n) const {
    if (kind == Kind::Theta) return std::pow(static_cast<double>(n), value);
    if (n < 2) return 0.0;  // log 1 = 0 singularity: no divisors at n = 1
    double x = static_cast<double>(n);
    return value * std::sqrt(x / std::log(x));
  }

  // Largest admissible integer divisor at index n (0 when none >= 1).
  // The Theta boundary d == n^theta is inclusive; a relative slack absorbs
  // floating pow at exact integer boundaries (d=2 at n=4, theta=1/2).
  // The EtaSqrt boundary is strict.
  std::uint64_t max_divisor(std::uint64_t n) const {
    double b = bound_at(n);
    if (kind == Kind::Theta) {
      return static_cast<std::uint64_t>(std::floor(b * (1.0 + 1e-12)));
    }
    if (!(b > 1.0)) return 0;
    return static_cast<std::uint64_t>(std::ceil(b)) - 1;  // strictly below b
  }

  bool admits(std::uint64_t d, std::uint64_t n) const { return d >= 1 && d <= max_divisor(n); }

  std::string spec_string() const {
    return (kind == Kind::Theta ? "theta:" : "eta:") + std::to_string(value);
  }
};

}  // namespace walkdiv
