#include "walkdiv/dyadic.hpp"

#include <cmath>

namespace walkdiv {

Dyadic::Dyadic(mpz_class num, std::uint64_t exp) : num_(std::move(num)), exp_(exp) {
  sign_ = mpz_sgn(num_.get_mpz_t());
  if (sign_ < 0) num_ = -num_;
  canonicalize();
}

void Dyadic::canonicalize() {
  if (sign_ == 0) {
    num_ = 0;
    exp_ = 0;
    return;
  }
  if (exp_ == 0) return;
  // strip common factors of two, at most exp_ of them
  mp_bitcnt_t low = mpz_scan1(num_.get_mpz_t(), 0);
  std::uint64_t shift = low < exp_ ? static_cast<std::uint64_t>(low) : exp_;
  if (shift > 0) {
    mpz_tdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), shift);
    exp_ -= shift;
  }
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  if (sign_ == 0) return o;
  if (o.sign_ == 0) return *this;
  std::uint64_t e = exp_ > o.exp_ ? exp_ : o.exp_;
  mpz_class a = num_;
  mpz_class b = o.num_;
  if (e > exp_) mpz_mul_2exp(a.get_mpz_t(), a.get_mpz_t(), e - exp_);
  if (e > o.exp_) mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), e - o.exp_);
  if (sign_ < 0) a = -a;
  if (o.sign_ < 0) b = -b;
  return Dyadic(a + b, e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

Dyadic Dyadic::operator-() const {
  Dyadic r = *this;
  r.sign_ = -r.sign_;
  return r;
}

Dyadic Dyadic::operator*(const Dyadic& o) const {
  if (sign_ == 0 || o.sign_ == 0) return Dyadic();
  mpz_class p = num_ * o.num_;
  if (sign_ * o.sign_ < 0) p = -p;
  return Dyadic(std::move(p), exp_ + o.exp_);
}

int Dyadic::compare(const Dyadic& o) const {
  Dyadic diff = *this - o;
  return diff.sign_;
}

double Dyadic::to_double() const {
  if (sign_ == 0) return 0.0;
  long ex = 0;
  double mant = mpz_get_d_2exp(&ex, num_.get_mpz_t());  // num ~ mant * 2^ex
  double total = static_cast<double>(ex) - static_cast<double>(exp_);
  // ldexp saturates/underflows cleanly outside double range
  if (total < -1500) return 0.0;
  if (total > 1500) return sign_ > 0 ? HUGE_VAL : -HUGE_VAL;
  return sign_ * std::ldexp(mant, static_cast<int>(total));
}

std::string Dyadic::fraction_string() const {
  if (sign_ == 0) return "0";
  std::string s = sign_ < 0 ? "-" : "";
  s += num_.get_str();
  if (exp_ == 1) {
    s += "/2";
  } else if (exp_ >= 2) {
    s += "/2^" + std::to_string(exp_);
  }
  return s;
}

}  // namespace walkdiv
