#pragma once

#include <cstdint>
#include <gmpxx.h>

#include <string>

namespace walkdiv {

// Exact signed dyadic rational sign * num / 2^exp.
//
// Canonical form: num odd, or exp == 0. Zero is (sign 0, num 0, exp 0).
// This is the value space of every probability of the form
// (count of binomial outcomes) / 2^n, so results stay exact end to end.
class Dyadic {
 public:
  Dyadic() = default;  // zero

  // value = num / 2^exp, num may be negative.
  Dyadic(mpz_class num, std::uint64_t exp);

  static Dyadic zero() { return Dyadic(); }
  static Dyadic one() { return Dyadic(1, 0); }

  int sign() const { return sign_; }
  const mpz_class& numerator() const { return num_; }  // >= 0
  std::uint64_t exponent() const { return exp_; }
  bool is_zero() const { return sign_ == 0; }

  Dyadic operator+(const Dyadic& o) const;
  Dyadic operator-(const Dyadic& o) const;
  Dyadic operator*(const Dyadic& o) const;
  Dyadic operator-() const;
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }

  bool operator==(const Dyadic& o) const {
    return sign_ == o.sign_ && exp_ == o.exp_ && num_ == o.num_;
  }
  bool operator!=(const Dyadic& o) const { return !(*this == o); }

  // <0, 0, >0 like a three-way compare of values.
  int compare(const Dyadic& o) const;
  bool operator<(const Dyadic& o) const { return compare(o) < 0; }
  bool operator<=(const Dyadic& o) const { return compare(o) <= 0; }
  bool operator>(const Dyadic& o) const { return compare(o) > 0; }
  bool operator>=(const Dyadic& o) const { return compare(o) >= 0; }

  // Nearest double; underflows to 0 (the exponent can exceed double range).
  double to_double() const;

  // "0", "p", "-p", "p/2", "p/2^e".
  std::string fraction_string() const;

 private:
  void canonicalize();

  int sign_ = 0;
  mpz_class num_ = 0;
  std::uint64_t exp_ = 0;
};

}  // namespace walkdiv
