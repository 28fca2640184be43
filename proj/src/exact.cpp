#include "walkdiv/exact.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace walkdiv {

void CorrelationPair::validate() const {
  if (d < 1 || delta < 1) throw std::invalid_argument("CorrelationPair: divisors must be >= 1");
  if (n < 1 || m < n) throw std::invalid_argument("CorrelationPair: need m >= n >= 1");
}

namespace exact {

std::vector<mpz_class> binomial_row(std::uint64_t n, const Guards& g) {
  if (n > g.max_row) throw guard_error("binomial row length exceeds guard");
  std::vector<mpz_class> row(n + 1);
  row[0] = 1;
  for (std::uint64_t h = 0; h < n; ++h) {
    // C(n, h+1) = C(n, h) * (n - h) / (h + 1), division exact
    row[h + 1] = row[h] * static_cast<unsigned long>(n - h);
    mpz_divexact_ui(row[h + 1].get_mpz_t(), row[h + 1].get_mpz_t(),
                    static_cast<unsigned long>(h + 1));
  }
  return row;
}

Dyadic prob_divides_row(const std::vector<mpz_class>& row, std::uint64_t d) {
  if (d < 1) throw std::invalid_argument("prob_divides: d must be >= 1");
  std::uint64_t n = row.size() - 1;
  mpz_class sum = 0;
  for (std::uint64_t h = 0; h <= n; h += d) sum += row[h];
  return Dyadic(sum, n);
}

Dyadic prob_divides(std::uint64_t d, std::uint64_t n, const Guards& g) {
  if (d < 1) throw std::invalid_argument("prob_divides: d must be >= 1");
  if (n < 1) throw std::invalid_argument("prob_divides: n must be >= 1");
  return prob_divides_row(binomial_row(n, g), d);
}

namespace {

// sums of C(len, k) over k in each residue class mod q
std::vector<mpz_class> residue_sums(const std::vector<mpz_class>& row, std::uint64_t q) {
  std::vector<mpz_class> rs(q, mpz_class(0));
  for (std::uint64_t k = 0; k < row.size(); ++k) rs[k % q] += row[k];
  return rs;
}

}  // namespace

Dyadic joint_prob(const CorrelationPair& pair, const Guards& g) {
  pair.validate();
  std::uint64_t gap = pair.m - pair.n;
  if (pair.n > g.max_row || gap > g.max_row) throw guard_error("joint_prob exceeds row guard");
  if (pair.delta > 10'000'000) throw guard_error("joint_prob residue table too large");
  auto row_n = binomial_row(pair.n, g);
  auto row_g = binomial_row(gap, g);
  auto rs = residue_sums(row_g, pair.delta);
  mpz_class sum = 0;
  for (std::uint64_t h = 0; h <= pair.n; h += pair.d) {
    // need h + k ≡ 0 (mod delta)
    sum += row_n[h] * rs[(pair.delta - h % pair.delta) % pair.delta];
  }
  return Dyadic(sum, pair.m);
}

Dyadic product_prob(std::uint64_t D, std::uint64_t n, std::uint64_t m, const Guards& g) {
  if (D < 1) throw std::invalid_argument("product_prob: D must be >= 1");
  CorrelationPair{1, n, 1, m}.validate();
  std::uint64_t gap = m - n;
  if (n > g.max_row || gap > g.max_row) throw guard_error("product_prob exceeds row guard");
  if (D > 10'000'000) throw guard_error("product_prob residue tables too large");
  auto row_n = binomial_row(n, g);
  auto row_g = binomial_row(gap, g);
  // D | h(h+k)  <=>  (D / gcd(h, D)) | h + k, so bucket k by residue mod each
  // divisor q of D that can arise as D / gcd(h, D).
  std::map<std::uint64_t, std::vector<mpz_class>> rs_by_q;
  mpz_class sum = 0;
  for (std::uint64_t h = 0; h <= n; ++h) {
    std::uint64_t q = D / std::gcd(h, D);
    auto it = rs_by_q.find(q);
    if (it == rs_by_q.end()) it = rs_by_q.emplace(q, residue_sums(row_g, q)).first;
    sum += row_n[h] * it->second[(q - h % q) % q];
  }
  return Dyadic(sum, m);
}

Dyadic correlation(const CorrelationPair& pair, const Guards& g) {
  pair.validate();
  return joint_prob(pair, g) -
         prob_divides(pair.d, pair.n, g) * prob_divides(pair.delta, pair.m, g);
}

Dyadic mean_divisor_sum(std::uint64_t N, const Cutoff& cutoff, const DivisorSet& set,
                        const Guards& g) {
  if (N > g.max_row) throw guard_error("mean_divisor_sum exceeds row guard");
  std::uint64_t work = 0;
  Dyadic total;
  for (std::uint64_t n = 1; n <= N; ++n) {
    auto members = set.members_up_to(static_cast<double>(cutoff.max_divisor(n)));
    if (members.empty()) continue;
    work += n + 1;
    if (work > g.work_budget) throw guard_error("mean_divisor_sum exceeds work budget");
    auto row = binomial_row(n, g);
    for (std::uint64_t d : members) total += prob_divides_row(row, d);
  }
  return total;
}

double mean_divisor_sum_main(std::uint64_t N, const Cutoff& cutoff, const DivisorSet& set) {
  Kahan acc;
  for (std::uint64_t n = 1; n <= N; ++n) {
    for (std::uint64_t d : set.members_up_to(static_cast<double>(cutoff.max_divisor(n))))
      acc.add(1.0 / static_cast<double>(d));
  }
  return acc.value();
}

Dyadic increment_second_moment(std::uint64_t i, std::uint64_t j, const Cutoff& cutoff,
                               const DivisorSet& set, const Guards& g) {
  if (i < 1 || j < i) throw std::invalid_argument("increment_second_moment: need j >= i >= 1");
  std::vector<std::vector<std::uint64_t>> adm(j - i + 1);
  std::uint64_t total_div = 0;
  for (std::uint64_t n = i; n <= j; ++n) {
    adm[n - i] = set.members_up_to(static_cast<double>(cutoff.max_divisor(n)));
    total_div += adm[n - i].size();
  }
  if (total_div * total_div > g.work_budget)
    throw guard_error("increment_second_moment exceeds work budget");

  std::map<std::pair<std::uint64_t, std::uint64_t>, Dyadic> marg;
  auto marginal = [&](std::uint64_t d, std::uint64_t n) -> const Dyadic& {
    auto key = std::make_pair(d, n);
    auto it = marg.find(key);
    if (it == marg.end()) it = marg.emplace(key, prob_divides(d, n, g)).first;
    return it->second;
  };

  Dyadic total;
  for (std::uint64_t n = i; n <= j; ++n) {
    for (std::uint64_t m = n; m <= j; ++m) {
      Dyadic cell;
      for (std::uint64_t d : adm[n - i]) {
        for (std::uint64_t dl : adm[m - i]) {
          Dyadic delta = joint_prob({d, n, dl, m}, g) - marginal(d, n) * marginal(dl, m);
          cell += delta;
        }
      }
      if (m > n) cell += cell;  // symmetric pair (n, m) and (m, n)
      total += cell;
    }
  }
  return total;
}

}  // namespace exact
}  // namespace walkdiv
