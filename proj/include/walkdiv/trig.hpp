#pragma once

#include <cstdint>

#include "walkdiv/exact.hpp"

namespace walkdiv::trig {

// cos(x)^n held as sign * exp(log_mag), so powers with n in the thousands
// neither underflow nor lose the sign. cos^0 = 1 (including at zeros of cos).
struct CosPower {
  double log_mag;  // -inf marks an exact zero
  int sign;        // -1, 0, +1
};
CosPower cos_pow(double x, std::uint64_t n);

// value plus the residual imaginary part of the folded complex sum; the
// symmetry reductions make the imaginary part vanish up to rounding.
struct Folded {
  double value;
  double imag;
};

// P{d | B_n} via the folded cosine sum 1/d + (2/d) sum_{1<=l<d/2} cos(pi n l / d) cos^n(pi l / d).
double prob_divides(std::uint64_t d, std::uint64_t n);

// Theta(d, n)/d: Gaussian-smoothed lattice sum
//   (1/d) sum_{l in Z} e^{i n pi l / d - n pi^2 l^2 / (2 d^2)},
// truncated at the first L with tail factor below tol.
double theta_marginal(std::uint64_t d, std::uint64_t n, double tol);

// Extra fold term present only for even d.
double r_term(const CorrelationPair& pair);
Folded r_term_diag(const CorrelationPair& pair);

// P{d | B_n, delta | B_m} via the first reduced form; for m == n this is
// exactly the single-event probability P{lcm(d, delta) | B_n}.
double joint_prob(const CorrelationPair& pair);
Folded joint_prob_diag(const CorrelationPair& pair);

// Covariance of the indicators via the second reduced form.
double correlation(const CorrelationPair& pair);
Folded correlation_diag(const CorrelationPair& pair);

}  // namespace walkdiv::trig
