#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace walkdiv::bounds {

using Json = nlohmann::ordered_json;

// Catalog of the quantitative inequalities checked on parameter grids.
enum class InequalityId {
  ThetaUniform,     // sup_d |P{d|B_n} - Theta(d,n)/d| <= C (log n)^{5/2} n^{-3/2}
  MarginalGap,      // |P{d|B_n} - 1/d| <= C d/n for 2 <= d <= sqrt(n)
  MarginalFast,     // sup over the alpha-window of |P - 1/d| <= C n^{-alpha+eps}
  DTimesP,          // d P{d|B_n} <= C for 2 <= d <= sqrt(n)
  WeakDepNear,      // |corr| <= C n (log(m-n)/(m-n))^{1/c}, n + n^c <= m <= 2n
  WeakDepFar,       // |corr| <= C n (log n / n)^{1/2c} (log(m-n)/(m-n))^{1/2}, m >= 2n
  DeltaContinuity,  // |corr(m) - corr(m')| <= C sqrt(log(m-n)/(m-n))
  ProdApprox,       // |P{D|BnBm} - binomial rho mean| <= C (D^{1+eps}/n)^{1/2}
  StrongDepJoint,   // joint <= C[(m-n) 2^omega(d dl)/(d dl) + (d dl)^{(1+eps)/2}/sqrt(n)]
  RhoBound,         // rho_k(D) <= 2^omega(D) min(k, sqrt(D)); rho_0(D) <= sqrt(D)
  Harmonic2Omega,   // sum_{D<=N} 2^omega(D)/D <= C (log N)^3
  IncrementA,       // E(sum H_n)^2 <= C sum n^eps        (Theta cutoff)
  IncrementB,       // E(sum H_n)^2 <= C sum (log n)^4    (EtaSqrt cutoff)
};

std::string to_string(InequalityId id);
InequalityId parse_inequality_id(const std::string& name);
std::vector<InequalityId> all_inequality_ids();

using Params = std::map<std::string, double>;

// Free constants with the relations c small, alpha > alpha' > max(3/2, 1/c),
// delta0 > sqrt(2); slack is the fitted-constant stability tolerance.
Params default_params(InequalityId id);

// Desk-scale default grid for the id (axis name -> values).
Json default_grid(InequalityId id);

struct BoundCheckRecord {
  InequalityId id;
  Json grid;
  Params params;
  double worst_ratio = 0.0;
  double fitted_constant = 0.0;
  bool pass = true;
  Json witnesses;  // one worst-case tuple per outermost scale

  Json to_json() const;  // exactly {id, grid, params, worst_ratio,
                                   //          fitted_constant, pass, witnesses}
};

// Evaluate lhs and rhs shape over the grid; the fitted constant is the
// smallest C with lhs <= C * rhs_shape everywhere. Deterministic.
BoundCheckRecord check_inequality(InequalityId id, const Json& grid = {},
                                  const Params& params = {});

// constant = max(lhs / rhs_shape), max_index = argmax (first on ties).
struct EnvelopeFit {
  double constant;
  std::size_t max_index;
};
struct EnvelopePoint {
  double x;
  double lhs;
  double rhs_shape;  // must be > 0
};
EnvelopeFit fit_envelope(const std::vector<EnvelopePoint>& series);

}  // namespace walkdiv::bounds
