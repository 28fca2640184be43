#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "walkdiv/arith.hpp"
#include "walkdiv/rng.hpp"

using namespace walkdiv;

namespace {

// independent oracle: factor by naive ascending trial division
std::vector<std::pair<std::uint64_t, std::uint32_t>> naive_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (n % p) continue;
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

std::uint64_t count_divisors(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) ++c;
  return c;
}

}  // namespace

TEST_CASE("factorize basics") {
  auto one = factorize(1);
  CHECK(one.value == 1);
  CHECK(one.factors.empty());
  CHECK(one.omega() == 0);
  CHECK(one.tau() == 1);

  auto twelve = factorize(12);
  CHECK(twelve.factors ==
        std::vector<std::pair<std::uint64_t, std::uint32_t>>{{2, 2}, {3, 1}});
  CHECK(twelve.omega() == 2);
  CHECK(twelve.tau() == 6);

  CHECK(factorize(9991).factors == naive_factor(9991));  // 97 * 103

  CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("factorization invariants on random inputs") {
  CounterRng rng(42);
  for (int i = 0; i < 300; ++i) {
    std::uint64_t n = rng.word(i) % 2'000'000 + 1;
    auto f = factorize(n);
    std::uint64_t prod = 1;
    std::uint64_t last_p = 0;
    for (auto& [p, e] : f.factors) {
      CHECK(p > last_p);
      CHECK(is_prime(p));
      last_p = p;
      for (std::uint32_t j = 0; j < e; ++j) prod *= p;
    }
    CHECK(prod == n);
  }
}

TEST_CASE("divisor stats") {
  CHECK(factorize(360).omega() == 3);
  CHECK(factorize(360).tau() == count_divisors(360));
  CHECK(factorize(360).tau() == 24);
}

TEST_CASE("divisor set enumeration") {
  CHECK(DivisorSet::all().members_up_to(3.9) == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(DivisorSet::primes().members_up_to(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(DivisorSet::progression(3, 4).members_up_to(20) ==
        std::vector<std::uint64_t>{3, 7, 11, 15, 19});
  CHECK(DivisorSet::squarefree().members_up_to(12) ==
        std::vector<std::uint64_t>{1, 2, 3, 5, 6, 7, 10, 11});
  CHECK(DivisorSet::all().members_up_to(0.5).empty());
  CHECK(DivisorSet::explicit_list({2, 5, 9}).members_up_to(6) ==
        std::vector<std::uint64_t>{2, 5});
  CHECK_THROWS_AS(DivisorSet::explicit_list({3, 3}), std::invalid_argument);
}

TEST_CASE("divisor set membership matches enumeration") {
  for (auto spec : {"all", "primes", "squarefree", "prog:3,4", "list:1,4,9,25"}) {
    auto set = DivisorSet::parse(spec);
    auto members = set.members_up_to(60);
    std::size_t idx = 0;
    for (std::uint64_t d = 1; d <= 60; ++d) {
      bool in = idx < members.size() && members[idx] == d;
      if (in) ++idx;
      CHECK(set.contains(d) == in);
    }
    CHECK(DivisorSet::parse(set.spec_string()).spec_string() == set.spec_string());
  }
}

TEST_CASE("rho closed-form spot values") {
  CHECK(rho_closed(3, 5) == 2);
  CHECK(rho_closed(0, 8) == 2);
  CHECK(rho_closed(2, 4) == 2);
  CHECK(rho_closed(6, 36) == 6);
  CHECK_THROWS_AS(rho_closed(2, 0), std::invalid_argument);
}

TEST_CASE("rho brute spot values") {
  CHECK(rho_brute(0, 1) == 1);
  CHECK(rho_brute(2, 4) == 2);
  CHECK(rho_brute(0, 12) == 2);
}

TEST_CASE("rho closed form equals brute count") {
  for (std::uint64_t D = 1; D <= 300; ++D)
    for (std::uint64_t k = 0; k <= 25; ++k) CHECK(rho_closed(k, D) == rho_brute(k, D));
}

TEST_CASE("rho prime-power table for small exponents") {
  // direct small-exponent values: rho_k(p) = 1, rho_k(p^2) = p,
  // rho_k(p^3) = 2p (v_p(k) = 1) or p (v_p(k) >= 2), all with p | k
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
    CHECK(rho_closed(p, p) == 1);
    CHECK(rho_closed(3 * p, p * p) == p);
    CHECK(rho_closed(p, p * p * p) == 2 * p);
    CHECK(rho_closed(p * p, p * p * p) == p);
    // and brute force agrees with all four
    CHECK(rho_brute(p, p) == 1);
    CHECK(rho_brute(3 * p, p * p) == p);
    CHECK(rho_brute(p, p * p * p) == 2 * p);
    CHECK(rho_brute(p * p, p * p * p) == p);
  }
}

TEST_CASE("rho is multiplicative on coprime pairs") {
  CounterRng rng(7);
  int done = 0;
  for (std::uint64_t i = 0; done < 400; ++i) {
    std::uint64_t d1 = rng.word(2 * i) % 500 + 1;
    std::uint64_t d2 = rng.word(2 * i + 1) % 500 + 1;
    if (std::gcd(d1, d2) != 1) continue;
    ++done;
    for (std::uint64_t k : {0ull, 1ull, 6ull, 30ull})
      CHECK(rho_closed(k, d1 * d2) == rho_closed(k, d1) * rho_closed(k, d2));
  }
}

TEST_CASE("rho depends on k only through the p-adic valuation") {
  // same v_p(k) => same rho_k(p^r)
  for (std::uint64_t p : {2ull, 3ull, 5ull}) {
    for (std::uint32_t r = 1; r <= 6; ++r) {
      std::uint64_t pr = 1;
      for (std::uint32_t i = 0; i < r; ++i) pr *= p;
      for (std::uint32_t v = 0; v <= 3; ++v) {
        std::uint64_t pv = 1;
        for (std::uint32_t i = 0; i < v; ++i) pv *= p;
        // k and k' share v_p = v (second factors coprime to p)
        std::uint64_t k1 = pv, k2 = pv * (p + 1);
        CHECK(rho_closed(k1, pr) == rho_closed(k2, pr));
      }
    }
  }
}

TEST_CASE("rho bound by omega and sqrt") {
  for (std::uint64_t D = 1; D <= 3000; ++D) {
    auto f = factorize(D);
    double sqrt_d = std::sqrt(static_cast<double>(D));
    CHECK(static_cast<double>(rho_closed(0, f)) <= sqrt_d + 1e-9);
    for (std::uint64_t k = 1; k <= 12; ++k) {
      double cap = std::ldexp(1.0, f.omega()) * std::min(static_cast<double>(k), sqrt_d);
      CHECK(static_cast<double>(rho_closed(k, f)) <= cap + 1e-9);
    }
  }
}

TEST_CASE("two_omega_harmonic_sum") {
  CHECK(two_omega_harmonic_sum(1) == doctest::Approx(1.0));
  CHECK(two_omega_harmonic_sum(3) == doctest::Approx(8.0 / 3.0));
  double prev = 0.0;
  for (std::uint64_t N : {1ull, 2ull, 5ull, 17ull, 100ull, 1000ull}) {
    double v = two_omega_harmonic_sum(N);
    CHECK(v > prev);
    prev = v;
  }
  double v4 = two_omega_harmonic_sum(10'000);
  double c = v4 / std::pow(std::log(1e4), 3);
  CHECK(c > 0.0);
  CHECK(c < 10.0);
  CHECK_THROWS(two_omega_harmonic_sum(100'000'000));
}
