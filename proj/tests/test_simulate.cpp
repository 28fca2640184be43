#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "walkdiv/exact.hpp"
#include "walkdiv/simulate.hpp"

using namespace walkdiv;
using namespace walkdiv::sim;

namespace {

WalkConfig base_config(std::uint64_t steps) {
  WalkConfig c;
  c.seed = 1234;
  c.steps = steps;
  c.cutoff = Cutoff::theta(0.5);
  c.set = DivisorSet::all();
  return c;
}

}  // namespace

TEST_CASE("subsequence generation and growth checks") {
  SUBCASE("geometric doubling, claim rho = 1") {
    SubsequenceSpec s;
    s.kind = SubsequenceSpec::Kind::Geometric;
    s.nu0 = 1;
    s.ratio = 2.0;
    s.rho_claim = 1.0;
    auto [nu, check] = make_subsequence(s, 1024);
    CHECK(nu == std::vector<std::uint64_t>{1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024});
    CHECK(check.pass);
    CHECK(check.fitted_c == doctest::Approx(1.0));
  }
  SUBCASE("squares, claim rho = 1/2") {
    SubsequenceSpec s;
    s.kind = SubsequenceSpec::Kind::Power;
    s.power = 2;
    s.rho_claim = 0.5;
    auto [nu, check] = make_subsequence(s, 10000);
    CHECK(nu.front() == 1);
    CHECK(nu.back() == 10000);
    CHECK(check.pass);
    CHECK(check.fitted_c >= 2.0);
  }
  SUBCASE("consecutive integers fail a rho = 1/2 claim") {
    SubsequenceSpec s;
    s.kind = SubsequenceSpec::Kind::Explicit;
    for (std::uint64_t v = 1; v <= 100; ++v) s.list.push_back(v);
    s.rho_claim = 0.5;
    auto [nu, check] = make_subsequence(s, 100);
    CHECK(nu.size() == 100);
    CHECK_FALSE(check.pass);
  }
  SUBCASE("empty generation is an error") {
    SubsequenceSpec s;
    s.kind = SubsequenceSpec::Kind::Geometric;
    s.nu0 = 50;
    auto bad = s;
    CHECK_THROWS_AS(make_subsequence(bad, 10), std::invalid_argument);
  }
  SUBCASE("spec strings round-trip") {
    for (auto spec : {"all", "geom:3,1.5", "pow:2", "list:1,4,9"}) {
      CHECK(SubsequenceSpec::parse(spec).spec_string() == spec);
    }
  }
}

TEST_CASE("walk with an empty divisor set accumulates nothing") {
  auto c = base_config(200);
  c.set = DivisorSet::explicit_list({});
  auto r = run_walk(c);
  for (const auto& cp : r.checkpoints) {
    CHECK(cp.s_n == 0);
    CHECK(cp.m_n == 0.0);
  }
}

TEST_CASE("tiny theta admits only d = 1, so the count equals n") {
  auto c = base_config(500);
  c.cutoff = Cutoff::theta(1e-9);
  auto r = run_walk(c);
  for (const auto& cp : r.checkpoints) {
    CHECK(cp.s_n == cp.n);
    CHECK(cp.error == doctest::Approx(0.0));
  }
}

TEST_CASE("injected all-ones bits make the walk deterministic") {
  auto c = base_config(100);
  c.injected_bits = std::vector<std::uint8_t>(100, 1);  // B_n = n
  auto r = run_walk(c);
  // direct count of divisors d <= sqrt(n) of n, accumulated
  std::uint64_t direct = 0;
  std::size_t cp = 0;
  for (std::uint64_t n = 1; n <= 100 && cp < r.checkpoints.size(); ++n) {
    for (std::uint64_t d = 1; d <= c.cutoff.max_divisor(n); ++d)
      if (n % d == 0) ++direct;
    if (r.checkpoints[cp].n == n) {
      CHECK(r.checkpoints[cp].s_n == direct);
      ++cp;
    }
  }
  CHECK(cp == r.checkpoints.size());

  SUBCASE("short injected list is refused") {
    c.injected_bits = std::vector<std::uint8_t>(50, 1);
    CHECK_THROWS_AS(run_walk(c), std::invalid_argument);
  }
}

TEST_CASE("checkpoints ascend and the count is monotone") {
  auto c = base_config(5000);
  auto r = run_walk(c);
  CHECK(r.checkpoints.back().n == 5000);
  for (std::size_t i = 1; i < r.checkpoints.size(); ++i) {
    CHECK(r.checkpoints[i].n > r.checkpoints[i - 1].n);
    CHECK(r.checkpoints[i].s_n >= r.checkpoints[i - 1].s_n);
    CHECK(r.checkpoints[i].m_n >= r.checkpoints[i - 1].m_n);
    CHECK(r.checkpoints[i].error ==
          doctest::Approx(static_cast<double>(r.checkpoints[i].s_n) - r.checkpoints[i].m_n));
  }
}

TEST_CASE("identical seed and config give identical results at any thread count") {
  auto c = base_config(3000);
  c.seed = 99;
  auto r1 = run_walks(c, 6, 0.25, 1);
  auto r8 = run_walks(c, 6, 0.25, 8);
  CHECK(to_json(r1) == to_json(r8));
  CHECK(to_csv(r1) == to_csv(r8));
  auto r1b = run_walks(c, 6, 0.25, 1);
  CHECK(to_json(r1) == to_json(r1b));
}

TEST_CASE("different walk indices get different streams") {
  auto c = base_config(2000);
  auto a = run_walk(c, 0);
  auto b = run_walk(c, 1);
  bool differ = false;
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i)
    if (a.checkpoints[i].s_n != b.checkpoints[i].s_n) differ = true;
  CHECK(differ);
}

TEST_CASE("error envelope") {
  SUBCASE("synthetic power law recovers its slope") {
    WalkReport r;
    r.steps = 100000;
    for (int i = 1; i <= 8; ++i) {
      double m = std::pow(10.0, i);
      Checkpoint cp;
      cp.n = static_cast<std::uint64_t>(m);
      cp.m_n = m;
      cp.error = std::sqrt(m);
      cp.s_n = static_cast<std::uint64_t>(m + cp.error);
      r.checkpoints.push_back(cp);
    }
    auto summary = error_envelope(std::vector<WalkReport>{r}, 0.25);
    CHECK(summary.slopes.size() == 1);
    CHECK(summary.slopes[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(summary.exceedance_fraction == 0.0);
  }
  SUBCASE("all-zero error paths are marked and excluded") {
    WalkReport r;
    r.steps = 1000;
    for (int i = 1; i <= 5; ++i)
      r.checkpoints.push_back({static_cast<std::uint64_t>(10 * i), 0, 10.0 * i, 0.0});
    auto summary = error_envelope(std::vector<WalkReport>{r}, 0.25);
    CHECK(summary.slopes.empty());
    CHECK(summary.median_slope == 0.0);
  }
  SUBCASE("insufficient checkpoints are refused") {
    WalkReport r;
    r.steps = 10;
    r.checkpoints.push_back({10, 5, 5.0, 0.0});
    CHECK_THROWS_AS(error_envelope(std::vector<WalkReport>{r}, 0.25),
                    std::invalid_argument);
  }
}

TEST_CASE("mean consistency: empirical average approaches the exact mean") {
  const std::uint64_t N = 32;
  auto set = DivisorSet::all();
  auto cutoff = Cutoff::theta(0.5);
  double exact_mean = exact::mean_divisor_sum(N, cutoff, set).to_double();

  auto c = base_config(N);
  c.seed = 2024;
  auto result = run_walks(c, 1500, 0.25, 4);
  double sum = 0.0, sum2 = 0.0;
  for (const auto& r : result.reports) {
    double s = static_cast<double>(r.checkpoints.back().s_n);
    sum += s;
    sum2 += s * s;
  }
  double mean = sum / 1500.0;
  double sd = std::sqrt((sum2 / 1500.0 - mean * mean) / 1499.0 * 1500.0);
  double se = sd / std::sqrt(1500.0);
  CHECK(std::abs(mean - exact_mean) <= 4.0 * se);
}

TEST_CASE("increment moment Monte Carlo") {
  auto set = DivisorSet::all();
  SUBCASE("walks guard") {
    CHECK_THROWS_AS(increment_moment_mc(4, 4, Cutoff::theta(0.5), set, 50, 1),
                    std::invalid_argument);
  }
  SUBCASE("no admissible divisors means exactly zero") {
    auto e = increment_moment_mc(2, 3, Cutoff::theta(0.5), set, 200, 1);
    CHECK(e.estimate == 0.0);
    CHECK(e.stderr_ == 0.0);
  }
  SUBCASE("single-index variance is hit exactly") {
    auto e = increment_moment_mc(4, 4, Cutoff::theta(0.5), set, 500, 7);
    CHECK(e.estimate == doctest::Approx(0.25));  // +-1/2 squared, every walk
    CHECK(e.stderr_ == doctest::Approx(0.0));
  }
  SUBCASE("agrees with the exact path within four standard errors") {
    for (auto [i, j] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{4, 8}, {8, 16}}) {
      double exact_v = exact::increment_second_moment(i, j, Cutoff::theta(0.5), set).to_double();
      auto e = increment_moment_mc(i, j, Cutoff::theta(0.5), set, 20000, 11, 0.1, 4);
      CHECK(std::abs(e.estimate - exact_v) <= 4.0 * e.stderr_ + 1e-12);
    }
  }
  SUBCASE("reduced flat-cutoff range, ratio reported") {
    auto cut = Cutoff::theta(0.15);
    double exact_v = exact::increment_second_moment(100, 140, cut, set).to_double();
    auto e = increment_moment_mc(100, 140, cut, set, 5000, 17, 0.1, 4);
    CHECK(std::abs(e.estimate - exact_v) <= 4.0 * e.stderr_ + 1e-12);
    CHECK(e.bound_ratio > 0.0);
    CHECK(std::isfinite(e.bound_ratio));
  }
  SUBCASE("deterministic across thread counts") {
    auto a = increment_moment_mc(4, 10, Cutoff::theta(0.5), set, 2000, 3, 0.1, 1);
    auto b = increment_moment_mc(4, 10, Cutoff::theta(0.5), set, 2000, 3, 0.1, 8);
    CHECK(a.estimate == b.estimate);
    CHECK(a.stderr_ == b.stderr_);
  }
}

TEST_CASE("eta cutoff admits nothing at n = 1 and respects the strict bound") {
  auto cut = Cutoff::eta_sqrt(1.0);
  CHECK(cut.max_divisor(1) == 0);
  for (std::uint64_t n : {2ull, 10ull, 100ull, 1000ull}) {
    std::uint64_t dmax = cut.max_divisor(n);
    double bound = std::sqrt(static_cast<double>(n) / std::log(static_cast<double>(n)));
    if (dmax > 0) CHECK(static_cast<double>(dmax) < bound);
    CHECK(static_cast<double>(dmax + 1) >= bound);
  }
}

TEST_CASE("theta cutoff includes exact integer boundaries") {
  CHECK(Cutoff::theta(0.5).max_divisor(4) == 2);
  CHECK(Cutoff::theta(0.5).max_divisor(9) == 3);
  CHECK(Cutoff::theta(0.5).max_divisor(10000) == 100);
  CHECK(Cutoff::theta(0.25).max_divisor(16) == 2);
  CHECK_THROWS_AS(Cutoff::theta(0.7), std::invalid_argument);
  CHECK_THROWS_AS(Cutoff::eta_sqrt(-1.0), std::invalid_argument);
}
