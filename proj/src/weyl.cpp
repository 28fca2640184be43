#include "walkdiv/weyl.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "walkdiv/arith.hpp"
#include "walkdiv/common.hpp"

namespace walkdiv::weyl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<std::complex<double>> unit_roots(std::uint64_t q) {
  std::vector<std::complex<double>> roots(q);
  for (std::uint64_t t = 0; t < q; ++t)
    roots[t] = std::polar(1.0, kTwoPi * static_cast<double>(t) / static_cast<double>(q));
  return roots;
}

struct KahanComplex {
  Kahan re, im;
  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
};

}  // namespace

RationalAngle::RationalAngle(std::int64_t a_, std::uint64_t q_) : a(a_), q(q_) {
  if (q == 0) throw std::invalid_argument("RationalAngle: q must be >= 1");
  if (q > (1ull << 31)) throw std::invalid_argument("RationalAngle: q too large for exact phases");
  if (std::gcd(static_cast<std::uint64_t>(a < 0 ? -a : a), q) != 1)
    throw std::invalid_argument("RationalAngle: a/q must be in lowest terms");
}

std::uint64_t RationalAngle::a_mod_q() const {
  std::int64_t r = a % static_cast<std::int64_t>(q);
  if (r < 0) r += static_cast<std::int64_t>(q);
  return static_cast<std::uint64_t>(r);
}

std::complex<double> quad_exp_sum(const RationalAngle& alpha, std::uint64_t k, std::uint64_t M) {
  if (M < 1) throw std::invalid_argument("quad_exp_sum: M must be >= 1");
  const std::uint64_t q = alpha.q;
  const std::uint64_t am = alpha.a_mod_q();
  // root table only when small enough to be worth the memory
  std::vector<std::complex<double>> roots;
  if (q <= 65536) roots = unit_roots(q);
  KahanComplex acc;
  const std::uint64_t km = k % q;
  for (std::uint64_t x = 1; x <= M; ++x) {
    std::uint64_t xm = x % q;
    std::uint64_t w = (xm * xm + km * xm) % q;  // q < 2^31 keeps this in range
    std::uint64_t t = (am * w) % q;
    acc.add(roots.empty()
                ? std::polar(1.0, kTwoPi * static_cast<double>(t) / static_cast<double>(q))
                : roots[t]);
  }
  return acc.value();
}

SarkozyCheck sarkozy_check(const RationalAngle& alpha, std::uint64_t k, std::uint64_t M) {
  std::complex<double> t = quad_exp_sum(alpha, k, M);
  double lhs = std::norm(t);
  double lq = std::max(std::log(static_cast<double>(alpha.q)), 0.0);
  double m = static_cast<double>(M);
  double rhs = 49.0 * (m * m / static_cast<double>(alpha.q) + m * lq +
                       static_cast<double>(alpha.q) * lq);
  return {lhs, rhs, lhs <= rhs};
}

CompleteSumCheck complete_sum_identity(std::uint64_t k, std::uint64_t D) {
  if (D < 1) throw std::invalid_argument("complete_sum_identity: D must be >= 1");
  if (D > 100'000) throw guard_error("complete_sum_identity: D beyond double-loop guard (1e5)");
  auto roots = unit_roots(D);
  const std::uint64_t km = k % D;
  Kahan re, im;
  for (std::uint64_t y = 1; y <= D; ++y) {
    std::uint64_t w = (y % D) * ((y + km) % D) % D;
    // j runs over 0..D-1; the phase index steps by w each time
    std::uint64_t p = 0;
    for (std::uint64_t j = 0; j < D; ++j) {
      re.add(roots[p].real());
      im.add(roots[p].imag());
      p += w;
      if (p >= D) p -= D;
    }
  }
  double dd = static_cast<double>(D);
  double value = re.value() / (dd * dd);
  return {value, static_cast<double>(rho_closed(k, D)) / dd};
}

double euler_central_weight(std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("euler_central_weight: n must be >= 1");
  std::uint64_t nu = (n + 1) / 2;
  double lw = std::lgamma(static_cast<double>(n) + 1.0) -
              std::lgamma(static_cast<double>(nu) + 1.0) -
              std::lgamma(static_cast<double>(n - nu) + 1.0) -
              static_cast<double>(n) * std::numbers::ln2;
  return std::exp(lw);
}

EulerCesaroGap euler_cesaro_gap(std::span<const std::complex<double>> a, std::uint64_t n) {
  if (a.size() < n + 1) throw std::invalid_argument("euler_cesaro_gap: sequence shorter than n+1");
  KahanComplex euler;
  const double ln2n = static_cast<double>(n) * std::numbers::ln2;
  const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
  std::complex<double> partial = 0.0;
  double max_partial = 0.0;
  for (std::uint64_t h = 0; h <= n; ++h) {
    double lw = lgn - std::lgamma(static_cast<double>(h) + 1.0) -
                std::lgamma(static_cast<double>(n - h) + 1.0) - ln2n;
    euler.add(std::exp(lw) * a[h]);
    partial += a[h];
    max_partial = std::max(max_partial, std::abs(partial));
  }
  std::complex<double> e = euler.value();
  double ratio =
      max_partial > 0.0 ? std::abs(e) * std::sqrt(static_cast<double>(n)) / max_partial : 0.0;
  return {e, max_partial, ratio};
}

std::vector<std::complex<double>> quadratic_phase_family(const RationalAngle& alpha,
                                                         std::uint64_t k, std::uint64_t n) {
  const std::uint64_t q = alpha.q;
  const std::uint64_t am = alpha.a_mod_q();
  const std::uint64_t km = k % q;
  auto roots = unit_roots(q);
  auto phase = [&](std::uint64_t h) {
    std::uint64_t hm = h % q;
    return roots[(am * ((hm * hm + km * hm) % q)) % q];
  };
  KahanComplex mean_acc;
  for (std::uint64_t y = 1; y <= q; ++y) mean_acc.add(phase(y));
  std::complex<double> mean = mean_acc.value() / static_cast<double>(q);
  std::vector<std::complex<double>> out(n + 1);
  for (std::uint64_t h = 0; h <= n; ++h) out[h] = phase(h) - mean;
  return out;
}

}  // namespace walkdiv::weyl
