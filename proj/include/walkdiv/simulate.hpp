#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "walkdiv/arith.hpp"
#include "walkdiv/cutoff.hpp"

namespace walkdiv::sim {

// Which walk indices accumulate divisor counts.
struct SubsequenceSpec {
  enum class Kind { AllIntegers, Geometric, Power, Explicit };

  Kind kind = Kind::AllIntegers;
  std::uint64_t nu0 = 1;     // Geometric start
  double ratio = 2.0;        // Geometric ratio (> 1)
  std::uint32_t power = 1;   // Power exponent (nu_k = k^power)
  std::vector<std::uint64_t> list;
  std::optional<double> rho_claim;  // claimed gap growth nu_{k+1}-nu_k >= C nu_k^rho

  static SubsequenceSpec parse(const std::string& spec);  // "all"|"geom:v0,r"|"pow:e"|"list:..."
  std::string spec_string() const;
};

struct GrowthCheck {
  bool pass = true;
  double fitted_c = 0.0;  // largest C valid over the generated range
};

// Generate nu_k <= limit and, when a rho claim is present, fit the largest C
// with gap >= C nu^rho. The claim passes only if the fitted C is stable
// between the first and second half of the range (10% slack): on a finite
// range "some C > 0" always exists, so stability is the meaningful test.
std::pair<std::vector<std::uint64_t>, GrowthCheck> make_subsequence(const SubsequenceSpec& spec,
                                                                    std::uint64_t limit);

struct Checkpoint {
  std::uint64_t n;
  std::uint64_t s_n;  // accumulated divisor count
  double m_n;         // accumulated main-term mean sum 1/d
  double error;       // s_n - m_n
};

struct Envelope {
  double slope = 0.0;      // -inf marks an all-zero error path (excluded from medians)
  double intercept = 0.0;
  double r2 = 0.0;
};

struct WalkConfig {
  std::uint64_t seed = 0;
  std::uint64_t steps = 1000;
  Cutoff cutoff = Cutoff::theta(0.5);
  DivisorSet set = DivisorSet::all();
  SubsequenceSpec subsequence;
  std::uint32_t checkpoint_count = 10;
  std::optional<std::vector<std::uint8_t>> injected_bits;  // overrides the RNG
};

struct WalkReport {
  std::uint64_t seed = 0;
  std::uint64_t walk_index = 0;
  std::uint64_t steps = 0;
  std::vector<Checkpoint> checkpoints;
  Envelope envelope;
};

WalkReport run_walk(const WalkConfig& config, std::uint64_t walk_index = 0);

// Aggregate over a batch of walks.
struct EnvelopeSummary {
  std::vector<double> slopes;      // finite per-walk slopes, walk order
  double median_slope = 0.0;
  double exceedance_fraction = 0.0;  // share of (walk, checkpoint) pairs with |error| > M^(1/2+eps)
  double eps = 0.0;
};

// Least-squares slope of log|error| against log M per walk (checkpoints with
// error = 0 or M <= 1 excluded), plus the exceedance fraction.
EnvelopeSummary error_envelope(std::span<const WalkReport> reports, double eps);

struct SimulationResult {
  WalkConfig config;
  std::uint32_t walks = 1;
  double eps = 0.25;
  std::vector<WalkReport> reports;
  EnvelopeSummary summary;
  GrowthCheck growth;
};

// Runs `walks` independent streams derived from config.seed; deterministic in
// content regardless of `threads`.
SimulationResult run_walks(const WalkConfig& config, std::uint32_t walks, double eps,
                           std::uint32_t threads);

std::string to_json(const SimulationResult& r);
std::string to_csv(const SimulationResult& r);  // header n,S_n,M_n,error

struct MomentEstimate {
  double estimate;
  double stderr_;
  double bound_ratio;
};

// Monte Carlo estimate of E (sum_{i<=n<=j} H_n)^2 with exact centering
// probabilities; bound_ratio divides by sum n^eps (Theta cutoff) or
// sum (log n)^4 (EtaSqrt cutoff).
MomentEstimate increment_moment_mc(std::uint64_t i, std::uint64_t j, const Cutoff& cutoff,
                                   const DivisorSet& set, std::uint64_t walks, std::uint64_t seed,
                                   double eps = 0.1, std::uint32_t threads = 1);

}  // namespace walkdiv::sim
