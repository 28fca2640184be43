#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "walkdiv/exact.hpp"
#include "walkdiv/trig.hpp"

using namespace walkdiv;

TEST_CASE("cos_pow conventions") {
  CHECK(trig::cos_pow(1.0, 0).sign == 1);
  CHECK(trig::cos_pow(1.0, 0).log_mag == 0.0);
  auto zero = trig::cos_pow(std::numbers::pi / 2.0, 3);
  // cos(pi/2) rounds to ~6e-17, not exactly 0; the power must still vanish
  CHECK(std::abs(zero.sign * std::exp(zero.log_mag)) < 1e-48);
  auto neg = trig::cos_pow(3.0, 3);  // cos(3) < 0, odd power keeps the sign
  CHECK(neg.sign == -1);
}

TEST_CASE("marginal spot values") {
  CHECK(trig::prob_divides(1, 7) == doctest::Approx(1.0));
  CHECK(trig::prob_divides(2, 2) == doctest::Approx(0.5));
  CHECK(std::abs(trig::prob_divides(3, 3) - 0.25) < 1e-12);
}

TEST_CASE("marginal matches the exact oracle") {
  for (std::uint64_t d = 1; d <= 12; ++d)
    for (std::uint64_t n = 1; n <= 30; ++n)
      CHECK(std::abs(trig::prob_divides(d, n) - exact::prob_divides(d, n).to_double()) < 1e-10);
}

TEST_CASE("marginal survives large powers without underflow") {
  double p = trig::prob_divides(7, 15000);
  CHECK(p > 1.0 / 7 - 1e-6);
  CHECK(p < 1.0 / 7 + 1e-6);
}

TEST_CASE("theta marginal") {
  CHECK_THROWS_AS(trig::theta_marginal(1, 10, 1e-12), std::invalid_argument);
  CHECK_THROWS_AS(trig::theta_marginal(2, 10, 0.0), std::invalid_argument);

  SUBCASE("d = 2 collapses to a half") {
    CHECK(std::abs(trig::theta_marginal(2, 100, 1e-30) - 0.5) < 1e-20);
  }
  SUBCASE("close to the exact marginal at moderate scale") {
    double gap = std::abs(trig::theta_marginal(5, 50, 1e-18) -
                          exact::prob_divides(5, 50).to_double());
    double shape = std::pow(std::log(50.0), 2.5) * std::pow(50.0, -1.5);
    CHECK(gap < shape);  // constant well under 1 at this scale
  }
  SUBCASE("tol refinement changes the value by less than the coarser tol") {
    for (std::uint64_t d : {3ull, 9ull, 31ull}) {
      for (std::uint64_t n : {10ull, 100ull}) {
        double coarse = trig::theta_marginal(d, n, 1e-6);
        double fine = trig::theta_marginal(d, n, 1e-12);
        CHECK(std::abs(coarse - fine) < 1e-6);
        CHECK(std::abs(fine - trig::theta_marginal(d, n, 1e-15)) < 1e-12);
      }
    }
  }
}

TEST_CASE("r term") {
  CHECK(trig::r_term({3, 2, 5, 4}) == 0.0);  // odd d
  CHECK(trig::r_term({2, 1, 2, 2}) == 0.0);  // empty fold range
  CHECK(std::abs(trig::r_term({2, 2, 3, 3}) - 0.125) < 1e-12);
}

TEST_CASE("joint and correlation spot values") {
  CHECK(trig::joint_prob({1, 2, 1, 5}) == doctest::Approx(1.0));
  CHECK(std::abs(trig::joint_prob({2, 1, 2, 2}) - 0.25) < 1e-12);
  CHECK(std::abs(trig::joint_prob({2, 2, 3, 3}) - 0.25) < 1e-12);
  CHECK(trig::correlation({1, 3, 4, 8}) == doctest::Approx(0.0));
  CHECK(trig::correlation({2, 1, 2, 2}) == doctest::Approx(0.0));
  CHECK(std::abs(trig::correlation({2, 2, 3, 3}) - 0.125) < 1e-12);
}

TEST_CASE("oracle equivalence on a small grid") {
  for (std::uint64_t d = 1; d <= 8; ++d)
    for (std::uint64_t dl = 1; dl <= 8; ++dl)
      for (std::uint64_t n = 1; n <= 16; ++n)
        for (std::uint64_t m = n; m <= 16; m += 3) {
          CorrelationPair pair{d, n, dl, m};
          CHECK(std::abs(trig::joint_prob(pair) - exact::joint_prob(pair).to_double()) < 1e-9);
          CHECK(std::abs(trig::correlation(pair) - exact::correlation(pair).to_double()) < 1e-9);
        }
}

TEST_CASE("fold symmetry: imaginary residuals vanish") {
  for (std::uint64_t d = 1; d <= 9; ++d)
    for (std::uint64_t dl = 1; dl <= 9; ++dl)
      for (std::uint64_t n : {1ull, 5ull, 12ull})
        for (std::uint64_t m : {n, n + 1, n + 7}) {
          CorrelationPair pair{d, n, dl, m};
          CHECK(std::abs(trig::joint_prob_diag(pair).imag) < 1e-10);
          CHECK(std::abs(trig::correlation_diag(pair).imag) < 1e-10);
          CHECK(std::abs(trig::r_term_diag(pair).imag) < 1e-10);
        }
}

TEST_CASE("joint minus marginal product equals correlation") {
  for (std::uint64_t d : {2ull, 4ull, 6ull, 9ull})
    for (std::uint64_t dl : {2ull, 3ull, 7ull})
      for (std::uint64_t n : {3ull, 10ull, 24ull})
        for (std::uint64_t m : {n, n + 2, 2 * n}) {
          CorrelationPair pair{d, n, dl, m};
          double lhs = trig::joint_prob(pair) -
                       trig::prob_divides(d, n) * trig::prob_divides(dl, m);
          CHECK(std::abs(lhs - trig::correlation(pair)) < 1e-9);
        }
}
