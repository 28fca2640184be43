#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace walkdiv::weyl {

// Rational angle a/q in lowest terms (q >= 1). a may be any integer; only
// a mod q matters for the phases.
struct RationalAngle {
  std::int64_t a;
  std::uint64_t q;

  RationalAngle(std::int64_t a_, std::uint64_t q_);
  std::uint64_t a_mod_q() const;  // in [0, q)
};

// T = sum_{x=1}^{M} e^{2 i pi (a/q)(x^2 + k x)}, with every exponent reduced
// mod q in exact integer arithmetic before any trig call.
std::complex<double> quad_exp_sum(const RationalAngle& alpha, std::uint64_t k, std::uint64_t M);

// |T|^2 against 49 (M^2/q + M log q + q log q); log q floors at 0 so q = 1
// yields the trivial 49 M^2.
struct SarkozyCheck {
  double lhs;
  double rhs;
  bool pass;
};
SarkozyCheck sarkozy_check(const RationalAngle& alpha, std::uint64_t k, std::uint64_t M);

// (1/D^2) sum_{j=0}^{D-1} sum_{y=1}^{D} e^{2 i pi j (y^2 + k y) / D}, which
// counts the roots of y(y+k) mod D; rho_ratio is the closed-form count over D.
struct CompleteSumCheck {
  double value;
  double rho_ratio;
};
CompleteSumCheck complete_sum_identity(std::uint64_t k, std::uint64_t D);

// Binomially weighted mean sum_h 2^{-n} C(n,h) a_h versus the worst partial
// sum of the a_h. ratio = |euler_sum| sqrt(n) / max_partial (0 when the
// partials vanish); the two-sided Abel bound keeps it at most 4.
struct EulerCesaroGap {
  std::complex<double> euler_sum;
  double max_partial;
  double ratio;
};
EulerCesaroGap euler_cesaro_gap(std::span<const std::complex<double>> a, std::uint64_t n);

// Central binomial weight 2^{-n} C(n, floor((n+1)/2)).
double euler_central_weight(std::uint64_t n);

// The centered quadratic-phase test sequence a_h = e^{2 i pi a (h^2 + k h) / q} - mean,
// h = 0..n, where mean is the average over a full period.
std::vector<std::complex<double>> quadratic_phase_family(const RationalAngle& alpha,
                                                         std::uint64_t k, std::uint64_t n);

}  // namespace walkdiv::weyl
