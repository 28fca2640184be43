#include "walkdiv/trig.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace walkdiv::trig {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogFloor = -690.0;  // below exp(-690) ~ 1e-300 a term is dropped
constexpr double kImagTol = 1e-10;

double eval(const CosPower& c) {
  if (c.sign == 0 || c.log_mag < kLogFloor) return 0.0;
  return c.sign * std::exp(c.log_mag);
}

struct KahanComplex {
  Kahan re, im;
  void add(double phase, double mag) {
    if (mag == 0.0) return;
    re.add(mag * std::cos(phase));
    im.add(mag * std::sin(phase));
  }
};

void check_imag(double imag, const char* where) {
  if (std::abs(imag) > kImagTol)
    throw std::logic_error(std::string(where) + ": fold symmetry violated, imag = " +
                           std::to_string(imag));
}

}  // namespace

CosPower cos_pow(double x, std::uint64_t n) {
  if (n == 0) return {0.0, 1};
  double c = std::cos(x);
  if (c == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
  int sign = (c < 0.0 && (n & 1)) ? -1 : 1;
  return {static_cast<double>(n) * std::log(std::abs(c)), sign};
}

double prob_divides(std::uint64_t d, std::uint64_t n) {
  if (d < 1) throw std::invalid_argument("prob_divides: d must be >= 1");
  if (n < 1) throw std::invalid_argument("prob_divides: n must be >= 1");
  Kahan acc;
  for (std::uint64_t l = 1; 2 * l < d; ++l) {
    double x = kPi * static_cast<double>(l) / static_cast<double>(d);
    double mag = eval(cos_pow(x, n));
    if (mag == 0.0) continue;
    acc.add(std::cos(kPi * static_cast<double>(n) * static_cast<double>(l) /
                     static_cast<double>(d)) *
            mag);
  }
  return 1.0 / d + 2.0 / d * acc.value();
}

double theta_marginal(std::uint64_t d, std::uint64_t n, double tol) {
  if (d < 2) throw std::invalid_argument("theta_marginal: d must be >= 2");
  if (n < 1) throw std::invalid_argument("theta_marginal: n must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("theta_marginal: tol must be > 0");
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  auto tail = [&](double l) { return std::exp(-nn * kPi * kPi * l * l / (2.0 * dd * dd)); };
  std::uint64_t L = 1;
  while (tail(static_cast<double>(L)) >= tol) {
    if (++L > 1'000'000)
      throw std::invalid_argument("theta_marginal: truncation does not converge (d too large)");
  }
  Kahan acc;
  acc.add(1.0);  // l = 0
  for (std::uint64_t l = 1; l <= L; ++l) {
    double ll = static_cast<double>(l);
    // +l and -l fold into a cosine; imaginary parts cancel exactly
    acc.add(2.0 * std::cos(kPi * nn * ll / dd) * tail(ll));
  }
  return acc.value() / dd;
}

Folded r_term_diag(const CorrelationPair& pair) {
  pair.validate();
  if (pair.d % 2 == 1) return {0.0, 0.0};
  const double d = static_cast<double>(pair.d);
  const double dl = static_cast<double>(pair.delta);
  const double n = static_cast<double>(pair.n);
  const double m = static_cast<double>(pair.m);
  const std::uint64_t gap = pair.m - pair.n;
  KahanComplex acc;
  for (std::uint64_t hh = 1; 2 * hh < pair.delta; ++hh) {
    for (int sh : {+1, -1}) {
      double h = sh * static_cast<double>(hh);
      CosPower outer = cos_pow(kPi * h / dl, gap);
      CosPower inner = cos_pow(kPi / 2.0 + kPi * h / dl, pair.n);
      double mag = eval(outer) * eval(inner);
      acc.add(kPi * (n / 2.0 + h * m / dl), mag);
    }
  }
  return {acc.re.value() / (d * dl), acc.im.value() / (d * dl)};
}

double r_term(const CorrelationPair& pair) {
  Folded f = r_term_diag(pair);
  check_imag(f.imag, "r_term");
  return f.value;
}

Folded joint_prob_diag(const CorrelationPair& pair) {
  pair.validate();
  if (pair.m == pair.n) {
    // both events condition the same sum; the joint event is lcm divisibility
    return {prob_divides(std::lcm(pair.d, pair.delta), pair.n), 0.0};
  }
  const double d = static_cast<double>(pair.d);
  const double dl = static_cast<double>(pair.delta);
  const double n = static_cast<double>(pair.n);
  const double m = static_cast<double>(pair.m);
  const std::uint64_t gap = pair.m - pair.n;
  KahanComplex acc;
  for (std::uint64_t hh = 1; 2 * hh < pair.delta; ++hh) {
    for (std::uint64_t jj = 1; 2 * jj < pair.d; ++jj) {
      for (int sh : {+1, -1}) {
        double h = sh * static_cast<double>(hh);
        CosPower outer = cos_pow(kPi * h / dl, gap);
        if (outer.sign == 0 || outer.log_mag < kLogFloor) continue;
        for (int sj : {+1, -1}) {
          double j = sj * static_cast<double>(jj);
          CosPower inner = cos_pow(kPi * (j / d + h / dl), pair.n);
          double mag = eval(outer) * eval(inner);
          acc.add(kPi * (j * n / d + h * m / dl), mag);
        }
      }
    }
  }
  double pd = prob_divides(pair.d, pair.n);
  double pdl = prob_divides(pair.delta, pair.m);
  Folded r = r_term_diag(pair);
  double value = acc.re.value() / (d * dl) + r.value + pdl / d + pd / dl - 1.0 / (d * dl);
  return {value, acc.im.value() / (d * dl) + r.imag};
}

double joint_prob(const CorrelationPair& pair) {
  Folded f = joint_prob_diag(pair);
  check_imag(f.imag, "joint_prob");
  return f.value;
}

Folded correlation_diag(const CorrelationPair& pair) {
  pair.validate();
  if (pair.m == pair.n) {
    double joint = prob_divides(std::lcm(pair.d, pair.delta), pair.n);
    return {joint - prob_divides(pair.d, pair.n) * prob_divides(pair.delta, pair.m), 0.0};
  }
  const double d = static_cast<double>(pair.d);
  const double dl = static_cast<double>(pair.delta);
  const double n = static_cast<double>(pair.n);
  const double m = static_cast<double>(pair.m);
  const std::uint64_t gap = pair.m - pair.n;
  KahanComplex acc;
  for (std::uint64_t hh = 1; 2 * hh < pair.delta; ++hh) {
    for (std::uint64_t jj = 1; 2 * jj < pair.d; ++jj) {
      for (int sh : {+1, -1}) {
        double h = sh * static_cast<double>(hh);
        CosPower outer = cos_pow(kPi * h / dl, gap);
        if (outer.sign == 0 || outer.log_mag < kLogFloor) continue;
        double outer_v = eval(outer);
        for (int sj : {+1, -1}) {
          double j = sj * static_cast<double>(jj);
          double combined = eval(cos_pow(kPi * (j / d + h / dl), pair.n));
          double split = eval(cos_pow(kPi * j / d, pair.n)) * eval(cos_pow(kPi * h / dl, pair.n));
          acc.add(kPi * (j * n / d + h * m / dl), outer_v * (combined - split));
        }
      }
    }
  }
  Folded r = r_term_diag(pair);
  return {acc.re.value() / (d * dl) + r.value, acc.im.value() / (d * dl) + r.imag};
}

double correlation(const CorrelationPair& pair) {
  Folded f = correlation_diag(pair);
  check_imag(f.imag, "correlation");
  return f.value;
}

}  // namespace walkdiv::trig
