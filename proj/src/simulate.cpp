#include "walkdiv/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "walkdiv/exact.hpp"
#include "walkdiv/rng.hpp"

namespace walkdiv::sim {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kMaxDivisorsPerIndex = 10'000'000;

// Ascending member list of a divisor set, extended lazily as the cutoff bound
// grows; prefix sums of 1/d give the main-term mean increment in O(log).
class MemberCache {
 public:
  explicit MemberCache(const DivisorSet& set) : set_(set) {}

  // index of the last member <= dmax, plus prefix 1/d sum up to it
  std::pair<std::size_t, double> up_to(std::uint64_t dmax) {
    if (dmax > high_water_) {
      members_ = set_.members_up_to(static_cast<double>(dmax));
      if (members_.size() > kMaxDivisorsPerIndex)
        throw guard_error("cutoff admits more than 1e7 divisors at a single index");
      prefix_.resize(members_.size());
      double acc = 0.0;
      for (std::size_t i = 0; i < members_.size(); ++i) {
        acc += 1.0 / static_cast<double>(members_[i]);
        prefix_[i] = acc;
      }
      high_water_ = dmax;
    }
    auto it = std::upper_bound(members_.begin(), members_.end(), dmax);
    std::size_t count = static_cast<std::size_t>(it - members_.begin());
    return {count, count ? prefix_[count - 1] : 0.0};
  }

  std::span<const std::uint64_t> members(std::size_t count) const {
    return {members_.data(), count};
  }

 private:
  const DivisorSet& set_;
  std::uint64_t high_water_ = 0;
  std::vector<std::uint64_t> members_;
  std::vector<double> prefix_;
};

std::vector<std::uint64_t> checkpoint_grid(std::uint64_t steps, std::uint32_t count) {
  std::vector<std::uint64_t> cps;
  for (std::uint32_t k = 0; k < count; ++k) {
    double e = static_cast<double>(k + 1) / static_cast<double>(count);
    std::uint64_t n =
        static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(steps), e)));
    n = std::clamp<std::uint64_t>(n, 1, steps);
    if (cps.empty() || n > cps.back()) cps.push_back(n);
  }
  if (cps.empty() || cps.back() != steps) cps.push_back(steps);
  return cps;
}

Envelope fit_loglog(const std::vector<Checkpoint>& cps) {
  std::vector<double> xs, ys;
  for (const auto& c : cps) {
    if (c.error != 0.0 && c.m_n > 1.0) {
      xs.push_back(std::log(c.m_n));
      ys.push_back(std::log(std::abs(c.error)));
    }
  }
  if (xs.size() < 2) return {kNegInf, 0.0, 0.0};
  double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) return {kNegInf, 0.0, 0.0};
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0, ybar = sy / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double fit = slope * xs[i] + intercept;
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return {slope, intercept, r2};
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

SubsequenceSpec SubsequenceSpec::parse(const std::string& spec) {
  SubsequenceSpec s;
  if (spec == "all" || spec.empty()) return s;
  if (spec.rfind("geom:", 0) == 0) {
    auto body = spec.substr(5);
    auto comma = body.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("subsequence: expected geom:v0,ratio");
    s.kind = Kind::Geometric;
    s.nu0 = std::stoull(body.substr(0, comma));
    s.ratio = std::stod(body.substr(comma + 1));
    if (s.nu0 < 1 || !(s.ratio > 1.0)) throw std::invalid_argument("subsequence: need v0 >= 1, ratio > 1");
    return s;
  }
  if (spec.rfind("pow:", 0) == 0) {
    s.kind = Kind::Power;
    s.power = static_cast<std::uint32_t>(std::stoul(spec.substr(4)));
    if (s.power < 1) throw std::invalid_argument("subsequence: power >= 1");
    return s;
  }
  if (spec.rfind("list:", 0) == 0) {
    s.kind = Kind::Explicit;
    std::string body = spec.substr(5);
    std::size_t pos = 0;
    while (pos < body.size()) {
      std::size_t comma = body.find(',', pos);
      if (comma == std::string::npos) comma = body.size();
      s.list.push_back(std::stoull(body.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    return s;
  }
  throw std::invalid_argument("subsequence: unknown spec '" + spec + "'");
}

std::string SubsequenceSpec::spec_string() const {
  switch (kind) {
    case Kind::AllIntegers:
      return "all";
    case Kind::Geometric: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "geom:%llu,%.17g", static_cast<unsigned long long>(nu0), ratio);
      return buf;
    }
    case Kind::Power:
      return "pow:" + std::to_string(power);
    case Kind::Explicit: {
      std::string s = "list:";
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(list[i]);
      }
      return s;
    }
  }
  return "?";
}

std::pair<std::vector<std::uint64_t>, GrowthCheck> make_subsequence(const SubsequenceSpec& spec,
                                                                    std::uint64_t limit) {
  std::vector<std::uint64_t> nu;
  switch (spec.kind) {
    case SubsequenceSpec::Kind::AllIntegers:
      for (std::uint64_t n = 1; n <= limit; ++n) nu.push_back(n);
      break;
    case SubsequenceSpec::Kind::Geometric: {
      if (spec.nu0 > limit) break;
      std::uint64_t v = spec.nu0;
      while (v <= limit) {
        nu.push_back(v);
        std::uint64_t next = static_cast<std::uint64_t>(
            std::floor(static_cast<long double>(v) * static_cast<long double>(spec.ratio)));
        v = std::max(next, v + 1);
      }
      break;
    }
    case SubsequenceSpec::Kind::Power:
      for (std::uint64_t k = 1;; ++k) {
        std::uint64_t v = 1;
        bool over = false;
        for (std::uint32_t e = 0; e < spec.power; ++e) {
          if (v > limit / k) {
            over = true;
            break;
          }
          v *= k;
        }
        if (over || v > limit) break;
        nu.push_back(v);
      }
      break;
    case SubsequenceSpec::Kind::Explicit:
      for (std::uint64_t v : spec.list) {
        if (v > limit) break;
        if (!nu.empty() && v <= nu.back())
          throw std::invalid_argument("subsequence: explicit list must be strictly increasing");
        nu.push_back(v);
      }
      break;
  }
  if (nu.empty()) throw std::invalid_argument("subsequence: empty over the given limit");

  GrowthCheck check;
  if (spec.rho_claim && nu.size() >= 2) {
    double rho = *spec.rho_claim;
    auto min_c = [&](std::size_t lo, std::size_t hi) {  // over gaps k in [lo, hi)
      double c = std::numeric_limits<double>::infinity();
      for (std::size_t k = lo; k < hi; ++k) {
        double gap = static_cast<double>(nu[k + 1] - nu[k]);
        c = std::min(c, gap / std::pow(static_cast<double>(nu[k]), rho));
      }
      return c;
    };
    std::size_t gaps = nu.size() - 1;
    check.fitted_c = min_c(0, gaps);
    if (gaps >= 2) {
      double head = min_c(0, gaps / 2);
      double tail = min_c(gaps / 2, gaps);
      check.pass = check.fitted_c > 0.0 && tail >= 0.9 * head;
    } else {
      check.pass = check.fitted_c > 0.0;
    }
  }
  return {std::move(nu), check};
}

WalkReport run_walk(const WalkConfig& config, std::uint64_t walk_index) {
  if (config.steps < 1) throw std::invalid_argument("run_walk: steps must be >= 1");
  if (config.checkpoint_count < 1) throw std::invalid_argument("run_walk: checkpoint_count >= 1");
  if (config.injected_bits && config.injected_bits->size() < config.steps)
    throw std::invalid_argument("run_walk: injected bit list shorter than walk");

  auto [subseq, growth] = make_subsequence(config.subsequence, config.steps);
  (void)growth;
  auto cps = checkpoint_grid(config.steps, config.checkpoint_count);

  CounterRng rng(CounterRng::stream_key(config.seed, walk_index));
  MemberCache cache(config.set);

  WalkReport report;
  report.seed = config.seed;
  report.walk_index = walk_index;
  report.steps = config.steps;

  std::uint64_t walk_sum = 0;   // B_n
  std::uint64_t s = 0;          // accumulated divisor count
  double m = 0.0;               // accumulated main-term mean
  std::size_t next_sub = 0;
  std::size_t next_cp = 0;
  for (std::uint64_t n = 1; n <= config.steps; ++n) {
    walk_sum += config.injected_bits ? (*config.injected_bits)[n - 1] : rng.bit(n - 1);
    if (next_sub < subseq.size() && subseq[next_sub] == n) {
      ++next_sub;
      std::uint64_t dmax = config.cutoff.max_divisor(n);
      if (dmax >= 1) {
        auto [count, mean_inc] = cache.up_to(dmax);
        m += mean_inc;
        for (std::uint64_t d : cache.members(count)) {
          if (walk_sum % d == 0) ++s;
        }
      }
    }
    if (next_cp < cps.size() && cps[next_cp] == n) {
      ++next_cp;
      report.checkpoints.push_back({n, s, m, static_cast<double>(s) - m});
    }
  }
  report.envelope = fit_loglog(report.checkpoints);
  return report;
}

EnvelopeSummary error_envelope(std::span<const WalkReport> reports, double eps) {
  for (const auto& r : reports) {
    std::size_t usable = 0;
    for (const auto& c : r.checkpoints)
      if (c.m_n > 1.0) ++usable;
    if (usable < 4) throw std::invalid_argument("error_envelope: need >= 4 checkpoints with M > 1");
  }
  EnvelopeSummary out;
  out.eps = eps;
  std::uint64_t pairs = 0, exceed = 0;
  for (const auto& r : reports) {
    Envelope env = fit_loglog(r.checkpoints);
    if (std::isfinite(env.slope)) out.slopes.push_back(env.slope);
    for (const auto& c : r.checkpoints) {
      if (c.m_n <= 1.0) continue;
      ++pairs;
      if (std::abs(c.error) > std::pow(c.m_n, 0.5 + eps)) ++exceed;
    }
  }
  out.median_slope = median(out.slopes);
  out.exceedance_fraction = pairs ? static_cast<double>(exceed) / static_cast<double>(pairs) : 0.0;
  return out;
}

namespace {

void parallel_walks(std::uint32_t walks, std::uint32_t threads,
                    const std::function<void(std::uint32_t)>& body) {
  threads = std::max(1u, std::min(threads, walks));
  if (threads == 1) {
    for (std::uint32_t w = 0; w < walks; ++w) body(w);
    return;
  }
  std::atomic<std::uint32_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (std::uint32_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::uint32_t w = next.fetch_add(1); w < walks; w = next.fetch_add(1)) body(w);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

SimulationResult run_walks(const WalkConfig& config, std::uint32_t walks, double eps,
                           std::uint32_t threads) {
  if (walks < 1) throw std::invalid_argument("run_walks: walks must be >= 1");
  SimulationResult result;
  result.config = config;
  result.walks = walks;
  result.eps = eps;
  result.reports.resize(walks);
  result.growth = make_subsequence(config.subsequence, config.steps).second;
  parallel_walks(walks, threads,
                 [&](std::uint32_t w) { result.reports[w] = run_walk(config, w); });
  bool enough = true;
  for (const auto& r : result.reports) {
    std::size_t usable = 0;
    for (const auto& c : r.checkpoints)
      if (c.m_n > 1.0) ++usable;
    if (usable < 4) enough = false;
  }
  if (enough) {
    result.summary = error_envelope(result.reports, eps);
  } else {
    result.summary.eps = eps;  // too short for an envelope; leave it empty
  }
  return result;
}

namespace {

std::string round_trip(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

ordered_json checkpoint_json(const Checkpoint& c) {
  return ordered_json{{"n", c.n}, {"S_n", c.s_n}, {"M_n", c.m_n}, {"error", c.error}};
}

ordered_json envelope_json(const Envelope& e) {
  ordered_json j;
  if (std::isfinite(e.slope))
    j["slope"] = e.slope;
  else
    j["slope"] = "-inf";  // all-zero error path
  j["intercept"] = e.intercept;
  j["r2"] = e.r2;
  return j;
}

}  // namespace

std::string to_json(const SimulationResult& r) {
  ordered_json j;
  j["config"] = ordered_json{{"seed", r.config.seed},
                             {"steps", r.config.steps},
                             {"cutoff", r.config.cutoff.spec_string()},
                             {"set", r.config.set.spec_string()},
                             {"subsequence", r.config.subsequence.spec_string()},
                             {"walks", r.walks},
                             {"checkpoints", r.config.checkpoint_count},
                             {"eps", r.eps},
                             {"injected_bits", r.config.injected_bits.has_value()}};
  if (r.config.subsequence.rho_claim) {
    j["config"]["rho_claim"] = *r.config.subsequence.rho_claim;
    j["config"]["growth_check"] =
        ordered_json{{"pass", r.growth.pass}, {"fitted_c", r.growth.fitted_c}};
  }
  if (r.config.cutoff.kind == Cutoff::Kind::EtaSqrt) {
    // the correlation window machinery needs eta below pi/(delta1 sqrt(alpha))
    // with delta1 > 2 and alpha = 11 at the default c
    double threshold = std::numbers::pi / (2.0 * std::sqrt(11.0));
    j["config"]["eta_window_threshold"] = threshold;
    j["config"]["eta_within_window"] = r.config.cutoff.value <= threshold;
  }
  j["reports"] = ordered_json::array();
  for (const auto& rep : r.reports) {
    ordered_json cps = ordered_json::array();
    for (const auto& c : rep.checkpoints) cps.push_back(checkpoint_json(c));
    j["reports"].push_back(ordered_json{{"seed", rep.seed},
                                        {"walk_index", rep.walk_index},
                                        {"steps", rep.steps},
                                        {"checkpoints", cps},
                                        {"envelope", envelope_json(rep.envelope)}});
  }
  j["aggregate"] = ordered_json{{"median_slope", r.summary.median_slope},
                                {"exceedance_fraction", r.summary.exceedance_fraction},
                                {"eps", r.summary.eps},
                                {"fitted_slopes", r.summary.slopes}};
  return j.dump(2);
}

std::string to_csv(const SimulationResult& r) {
  std::string out = "n,S_n,M_n,error\n";
  for (const auto& rep : r.reports) {
    for (const auto& c : rep.checkpoints) {
      out += std::to_string(c.n);
      out += ',';
      out += std::to_string(c.s_n);
      out += ',';
      out += round_trip(c.m_n);
      out += ',';
      out += round_trip(c.error);
      out += '\n';
    }
  }
  return out;
}

MomentEstimate increment_moment_mc(std::uint64_t i, std::uint64_t j, const Cutoff& cutoff,
                                   const DivisorSet& set, std::uint64_t walks, std::uint64_t seed,
                                   double eps, std::uint32_t threads) {
  if (i < 1 || j < i) throw std::invalid_argument("increment_moment_mc: need j >= i >= 1");
  if (walks < 100) throw std::invalid_argument("increment_moment_mc: walks must be >= 100");

  // admissible divisors and exact centering probabilities per index
  std::vector<std::vector<std::uint64_t>> adm(j - i + 1);
  std::vector<double> centered(j - i + 1, 0.0);
  bool any = false;
  for (std::uint64_t n = i; n <= j; ++n) {
    adm[n - i] = set.members_up_to(static_cast<double>(cutoff.max_divisor(n)));
    double p = 0.0;
    for (std::uint64_t d : adm[n - i]) p += exact::prob_divides(d, n).to_double();
    centered[n - i] = p;
    if (!adm[n - i].empty()) any = true;
  }

  std::vector<double> x2(walks);
  if (any) {
    parallel_walks(static_cast<std::uint32_t>(walks), threads, [&](std::uint32_t w) {
      CounterRng rng(CounterRng::stream_key(seed, w));
      std::uint64_t walk_sum = 0;
      double x = 0.0;
      for (std::uint64_t n = 1; n <= j; ++n) {
        walk_sum += rng.bit(n - 1);
        if (n < i) continue;
        std::uint64_t hits = 0;
        for (std::uint64_t d : adm[n - i])
          if (walk_sum % d == 0) ++hits;
        x += static_cast<double>(hits) - centered[n - i];
      }
      x2[w] = x * x;
    });
  }

  Kahan mean_acc;
  for (double v : x2) mean_acc.add(v);
  double estimate = mean_acc.value() / static_cast<double>(walks);
  Kahan var_acc;
  for (double v : x2) var_acc.add((v - estimate) * (v - estimate));
  double stderr_ = std::sqrt(var_acc.value() / static_cast<double>(walks - 1)) /
                   std::sqrt(static_cast<double>(walks));

  Kahan denom;
  for (std::uint64_t n = i; n <= j; ++n) {
    if (cutoff.kind == Cutoff::Kind::Theta) {
      denom.add(std::pow(static_cast<double>(n), eps));
    } else {
      double ln = std::log(static_cast<double>(n));
      denom.add(ln * ln * ln * ln);
    }
  }
  double ratio = denom.value() > 0.0
                     ? estimate / denom.value()
                     : (estimate == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return {estimate, stderr_, ratio};
}

}  // namespace walkdiv::sim
