#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace walkdiv {

// n together with its prime factorization, primes ascending.
struct Factorization {
  std::uint64_t value = 1;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> factors;  // (p, v_p)

  std::uint32_t omega() const { return static_cast<std::uint32_t>(factors.size()); }
  std::uint64_t tau() const;                      // number of divisors
  std::uint32_t valuation(std::uint64_t p) const; // v_p(value)
};

// Deterministic trial division (2, 3, then 6k+-1 wheel). n >= 1.
Factorization factorize(std::uint64_t n);

bool is_prime(std::uint64_t n);  // deterministic Miller-Rabin, full 64-bit range

// v_p(k) for k >= 1.
std::uint32_t valuation(std::uint64_t k, std::uint64_t p);

// Number of y in [1, D] with D | y^2 + k*y.
//
// rho_closed evaluates the multiplicative closed form prime by prime:
//   k = 0:  prod p^floor(v_p(D)/2)
//   k >= 1: prod over p | D of  2*p^v_p(k)      if v_p(k) < v_p(D)/2
//                               p^floor(v_p(D)/2) otherwise
// (the p not dividing k case is the first branch with v_p(k) = 0).
// rho_brute counts directly and serves as the independent oracle.
std::uint64_t rho_closed(std::uint64_t k, const Factorization& D);
std::uint64_t rho_closed(std::uint64_t k, std::uint64_t D);
std::uint64_t rho_brute(std::uint64_t k, std::uint64_t D);

// sum_{D=1}^{N} 2^omega(D) / D, via an omega sieve. Guarded at N <= 1e7.
double two_omega_harmonic_sum(std::uint64_t N);

// omega(D) for all D in [0, N], sieve-based (omega[0] = omega[1] = 0).
std::vector<std::uint8_t> omega_sieve(std::uint64_t N);

// A prescribed set of candidate divisors with pure membership and bounded
// ascending enumeration.
class DivisorSet {
 public:
  enum class Kind { All, Primes, Squarefree, Explicit, Progression };

  static DivisorSet all();
  static DivisorSet primes();
  static DivisorSet squarefree();
  static DivisorSet explicit_list(std::vector<std::uint64_t> values);  // strictly increasing, >= 1
  static DivisorSet progression(std::uint64_t a, std::uint64_t q);     // a, a+q, a+2q, ...

  // Parse "all" | "primes" | "squarefree" | "prog:a,q" | "list:v1,v2,...".
  static DivisorSet parse(const std::string& spec);

  Kind kind() const { return kind_; }
  bool contains(std::uint64_t d) const;  // total for d >= 1

  // Members <= bound, ascending; empty when bound < smallest member.
  std::vector<std::uint64_t> members_up_to(double bound) const;

  std::string spec_string() const;  // round-trips through parse()

 private:
  DivisorSet(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<std::uint64_t> values_;  // Explicit
  std::uint64_t a_ = 1, q_ = 1;        // Progression
};

}  // namespace walkdiv
