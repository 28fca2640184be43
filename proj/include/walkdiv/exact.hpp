#pragma once

#include <cstdint>
#include <vector>

#include "walkdiv/arith.hpp"
#include "walkdiv/common.hpp"
#include "walkdiv/cutoff.hpp"
#include "walkdiv/dyadic.hpp"

namespace walkdiv {

// Index pair for two divisibility events: d | B_n and delta | B_m, m >= n.
struct CorrelationPair {
  std::uint64_t d;
  std::uint64_t n;
  std::uint64_t delta;
  std::uint64_t m;

  void validate() const;  // throws std::invalid_argument
};

namespace exact {

// Row C(n, 0..n) of binomial coefficients.
std::vector<mpz_class> binomial_row(std::uint64_t n, const Guards& g = {});

// P{d | B_n} = sum_{d|h} C(n,h) / 2^n. B_n = 0 counts (d | 0 for every d).
Dyadic prob_divides(std::uint64_t d, std::uint64_t n, const Guards& g = {});

// Same, reusing an already computed binomial row for C(n, .).
Dyadic prob_divides_row(const std::vector<mpz_class>& row, std::uint64_t d);

// P{d | B_n, delta | B_m} over the product decomposition B_m = B_n + B'_{m-n}.
Dyadic joint_prob(const CorrelationPair& pair, const Guards& g = {});

// P{D | B_n * B_m} = sum over h, k with D | h(h+k) of C(n,h) C(m-n,k) / 2^m.
Dyadic product_prob(std::uint64_t D, std::uint64_t n, std::uint64_t m, const Guards& g = {});

// Signed covariance of the two indicators.
Dyadic correlation(const CorrelationPair& pair, const Guards& g = {});

// sum over n <= N, admissible d of P{d | B_n}, exact.
Dyadic mean_divisor_sum(std::uint64_t N, const Cutoff& cutoff, const DivisorSet& set,
                        const Guards& g = {});

// Leading term: sum over the same index set of 1/d.
double mean_divisor_sum_main(std::uint64_t N, const Cutoff& cutoff, const DivisorSet& set);

// E ( sum_{i<=n<=j} H_n )^2 where H_n centers the admissible-divisor count,
// expanded exactly over all index pairs.
Dyadic increment_second_moment(std::uint64_t i, std::uint64_t j, const Cutoff& cutoff,
                               const DivisorSet& set, const Guards& g = {});

}  // namespace exact
}  // namespace walkdiv
