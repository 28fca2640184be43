#include "walkdiv/arith.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "walkdiv/common.hpp"

namespace walkdiv {

std::uint64_t Factorization::tau() const {
  std::uint64_t t = 1;
  for (auto& [p, e] : factors) t *= (e + 1);
  return t;
}

std::uint32_t Factorization::valuation(std::uint64_t p) const {
  for (auto& [q, e] : factors)
    if (q == p) return e;
  return 0;
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: 0 has no factorization");
  Factorization f;
  f.value = n;
  auto pull = [&](std::uint64_t p) {
    if (n % p) return;
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.factors.emplace_back(p, e);
  };
  pull(2);
  pull(3);
  for (std::uint64_t p = 5; p <= n / p; p += 6) {
    pull(p);
    pull(p + 2);
  }
  if (n > 1) f.factors.emplace_back(n, 1);
  return f;
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // this base set decides primality for every 64-bit integer
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint32_t valuation(std::uint64_t k, std::uint64_t p) {
  if (k == 0) throw std::invalid_argument("valuation: k must be >= 1");
  std::uint32_t v = 0;
  while (k % p == 0) {
    k /= p;
    ++v;
  }
  return v;
}

std::uint64_t rho_closed(std::uint64_t k, const Factorization& D) {
  if (D.value == 0) throw std::invalid_argument("rho: D must be >= 1");
  std::uint64_t r = 1;
  for (auto& [p, e] : D.factors) {
    std::uint64_t half = 1;  // p^floor(e/2)
    for (std::uint32_t i = 0; i < e / 2; ++i) half *= p;
    if (k == 0) {
      r *= half;
      continue;
    }
    std::uint32_t v = valuation(k, p);
    if (2ull * v < e) {
      std::uint64_t pv = 1;
      for (std::uint32_t i = 0; i < v; ++i) pv *= p;
      r *= 2 * pv;
    } else {
      r *= half;
    }
  }
  return r;
}

std::uint64_t rho_closed(std::uint64_t k, std::uint64_t D) {
  return rho_closed(k, factorize(D));
}

std::uint64_t rho_brute(std::uint64_t k, std::uint64_t D) {
  if (D == 0) throw std::invalid_argument("rho: D must be >= 1");
  std::uint64_t km = k % D;
  std::uint64_t count = 0;
  for (std::uint64_t y = 1; y <= D; ++y) {
    if (mulmod(y % D, (y + km) % D, D) == 0) ++count;
  }
  return count;
}

std::vector<std::uint8_t> omega_sieve(std::uint64_t N) {
  std::vector<std::uint8_t> om(N + 1, 0);
  for (std::uint64_t p = 2; p <= N; ++p) {
    if (om[p] != 0) continue;  // p composite iff already touched
    for (std::uint64_t m = p; m <= N; m += p) om[m] += 1;
  }
  return om;
}

double two_omega_harmonic_sum(std::uint64_t N) {
  if (N == 0) throw std::invalid_argument("two_omega_harmonic_sum: N >= 1");
  if (N > 10'000'000) throw guard_error("two_omega_harmonic_sum: N beyond sieve guard (1e7)");
  auto om = omega_sieve(N);
  Kahan acc;
  for (std::uint64_t D = 1; D <= N; ++D) {
    acc.add(std::ldexp(1.0, om[D]) / static_cast<double>(D));
  }
  return acc.value();
}

// ---- DivisorSet ----

DivisorSet DivisorSet::all() { return DivisorSet(Kind::All); }
DivisorSet DivisorSet::primes() { return DivisorSet(Kind::Primes); }
DivisorSet DivisorSet::squarefree() { return DivisorSet(Kind::Squarefree); }

DivisorSet DivisorSet::explicit_list(std::vector<std::uint64_t> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1) throw std::invalid_argument("DivisorSet: entries must be >= 1");
    if (i > 0 && values[i] <= values[i - 1])
      throw std::invalid_argument("DivisorSet: explicit list must be strictly increasing");
  }
  DivisorSet s(Kind::Explicit);
  s.values_ = std::move(values);
  return s;
}

DivisorSet DivisorSet::progression(std::uint64_t a, std::uint64_t q) {
  if (a < 1 || q < 1) throw std::invalid_argument("DivisorSet: progression needs a >= 1, q >= 1");
  DivisorSet s(Kind::Progression);
  s.a_ = a;
  s.q_ = q;
  return s;
}

DivisorSet DivisorSet::parse(const std::string& spec) {
  if (spec == "all") return all();
  if (spec == "primes") return primes();
  if (spec == "squarefree") return squarefree();
  auto split_nums = [](const std::string& body) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos < body.size()) {
      std::size_t comma = body.find(',', pos);
      if (comma == std::string::npos) comma = body.size();
      out.push_back(std::stoull(body.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    return out;
  };
  if (spec.rfind("prog:", 0) == 0) {
    auto nums = split_nums(spec.substr(5));
    if (nums.size() != 2) throw std::invalid_argument("DivisorSet: expected prog:a,q");
    return progression(nums[0], nums[1]);
  }
  if (spec.rfind("list:", 0) == 0) {
    return explicit_list(split_nums(spec.substr(5)));
  }
  throw std::invalid_argument("DivisorSet: unknown spec '" + spec + "'");
}

bool DivisorSet::contains(std::uint64_t d) const {
  if (d < 1) return false;
  switch (kind_) {
    case Kind::All:
      return true;
    case Kind::Primes:
      return is_prime(d);
    case Kind::Squarefree: {
      if (d == 1) return true;
      auto f = factorize(d);
      for (auto& [p, e] : f.factors)
        if (e >= 2) return false;
      return true;
    }
    case Kind::Explicit:
      return std::binary_search(values_.begin(), values_.end(), d);
    case Kind::Progression:
      return d >= a_ && (d - a_) % q_ == 0;
  }
  return false;
}

std::vector<std::uint64_t> DivisorSet::members_up_to(double bound) const {
  std::vector<std::uint64_t> out;
  if (!(bound >= 1.0) || !std::isfinite(bound)) return out;
  std::uint64_t b = static_cast<std::uint64_t>(bound);
  switch (kind_) {
    case Kind::All:
      out.reserve(b);
      for (std::uint64_t d = 1; d <= b; ++d) out.push_back(d);
      break;
    case Kind::Primes: {
      std::vector<bool> comp(b + 1, false);
      for (std::uint64_t p = 2; p <= b; ++p) {
        if (comp[p]) continue;
        out.push_back(p);
        for (std::uint64_t m = p * p; m <= b; m += p) comp[m] = true;
      }
      break;
    }
    case Kind::Squarefree: {
      std::vector<bool> sq(b + 1, false);
      for (std::uint64_t p = 2; p * p <= b; ++p) {
        for (std::uint64_t m = p * p; m <= b; m += p * p) sq[m] = true;
      }
      for (std::uint64_t d = 1; d <= b; ++d)
        if (!sq[d]) out.push_back(d);
      break;
    }
    case Kind::Explicit: {
      auto it = std::upper_bound(values_.begin(), values_.end(), b);
      out.assign(values_.begin(), it);
      break;
    }
    case Kind::Progression:
      for (std::uint64_t d = a_; d <= b; d += q_) out.push_back(d);
      break;
  }
  return out;
}

std::string DivisorSet::spec_string() const {
  switch (kind_) {
    case Kind::All:
      return "all";
    case Kind::Primes:
      return "primes";
    case Kind::Squarefree:
      return "squarefree";
    case Kind::Progression:
      return "prog:" + std::to_string(a_) + "," + std::to_string(q_);
    case Kind::Explicit: {
      std::string s = "list:";
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(values_[i]);
      }
      return s;
    }
  }
  return "?";
}

}  // namespace walkdiv
