#include "walkdiv.h"

#include <complex>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "walkdiv/bounds.hpp"
#include "walkdiv/exact.hpp"
#include "walkdiv/simulate.hpp"
#include "walkdiv/trig.hpp"
#include "walkdiv/weyl.hpp"

using namespace walkdiv;
using ordered_json = nlohmann::ordered_json;

struct wd_dyadic {
  Dyadic value;
};
struct wd_set {
  DivisorSet set;
};
struct wd_report {
  sim::SimulationResult result;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
wd_status guarded(F&& f) {
  try {
    f();
    return WD_OK;
  } catch (const guard_error& e) {
    g_last_error = e.what();
    return WD_ERR_RESOURCE;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return WD_ERR_INVALID;
  } catch (const std::out_of_range& e) {
    g_last_error = e.what();
    return WD_ERR_INVALID;
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return WD_ERR_INVALID;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return WD_ERR_NOMEM;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return WD_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Cutoff make_cutoff(wd_cutoff c) {
  if (c.kind == WD_CUTOFF_THETA) return Cutoff::theta(c.value);
  if (c.kind == WD_CUTOFF_ETA_SQRT) return Cutoff::eta_sqrt(c.value);
  throw std::invalid_argument("unknown cutoff kind");
}

sim::SubsequenceSpec make_subseq(const char* spec, double rho_claim) {
  auto s = sim::SubsequenceSpec::parse(spec ? spec : "all");
  if (rho_claim >= 0.0) s.rho_claim = rho_claim;
  return s;
}

}  // namespace

extern "C" {

const char* wd_status_name(wd_status s) {
  switch (s) {
    case WD_OK: return "ok";
    case WD_ERR_INVALID: return "invalid argument";
    case WD_ERR_RESOURCE: return "resource refusal";
    case WD_ERR_NOMEM: return "out of memory";
    case WD_ERR_INTERNAL: return "internal error";
  }
  return "?";
}

const char* wd_last_error(void) { return g_last_error.c_str(); }

void wd_string_free(char* s) { std::free(s); }

void wd_dyadic_free(wd_dyadic* v) { delete v; }
int wd_dyadic_sign(const wd_dyadic* v) { return v->value.sign(); }
uint64_t wd_dyadic_exponent(const wd_dyadic* v) { return v->value.exponent(); }
double wd_dyadic_double(const wd_dyadic* v) { return v->value.to_double(); }
char* wd_dyadic_fraction(const wd_dyadic* v) { return dup_string(v->value.fraction_string()); }

wd_status wd_prob_exact(uint64_t d, uint64_t n, wd_dyadic** out) {
  return guarded([&] { *out = new wd_dyadic{exact::prob_divides(d, n)}; });
}

wd_status wd_joint_exact(uint64_t d, uint64_t n, uint64_t delta, uint64_t m, wd_dyadic** out) {
  return guarded([&] { *out = new wd_dyadic{exact::joint_prob({d, n, delta, m})}; });
}

wd_status wd_product_exact(uint64_t bigD, uint64_t n, uint64_t m, wd_dyadic** out) {
  return guarded([&] { *out = new wd_dyadic{exact::product_prob(bigD, n, m)}; });
}

wd_status wd_correlation_exact(uint64_t d, uint64_t n, uint64_t delta, uint64_t m,
                               wd_dyadic** out) {
  return guarded([&] { *out = new wd_dyadic{exact::correlation({d, n, delta, m})}; });
}

wd_status wd_prob_trig(uint64_t d, uint64_t n, double* out) {
  return guarded([&] { *out = trig::prob_divides(d, n); });
}

wd_status wd_theta_marginal(uint64_t d, uint64_t n, double tol, double* out) {
  return guarded([&] { *out = trig::theta_marginal(d, n, tol); });
}

wd_status wd_joint_trig(uint64_t d, uint64_t n, uint64_t delta, uint64_t m, double* out) {
  return guarded([&] { *out = trig::joint_prob({d, n, delta, m}); });
}

wd_status wd_r_term(uint64_t d, uint64_t n, uint64_t delta, uint64_t m, double* out) {
  return guarded([&] { *out = trig::r_term({d, n, delta, m}); });
}

wd_status wd_correlation_trig(uint64_t d, uint64_t n, uint64_t delta, uint64_t m, double* out) {
  return guarded([&] { *out = trig::correlation({d, n, delta, m}); });
}

wd_status wd_rho_closed(uint64_t k, uint64_t bigD, uint64_t* out) {
  return guarded([&] { *out = rho_closed(k, bigD); });
}

wd_status wd_rho_brute(uint64_t k, uint64_t bigD, uint64_t* out) {
  return guarded([&] { *out = rho_brute(k, bigD); });
}

wd_status wd_factor_json(uint64_t n, char** json_out) {
  return guarded([&] {
    auto f = factorize(n);
    ordered_json j;
    j["value"] = f.value;
    j["factors"] = ordered_json::array();
    for (auto& [p, e] : f.factors) j["factors"].push_back({p, e});
    j["omega"] = f.omega();
    j["tau"] = f.tau();
    *json_out = dup_string(j.dump());
  });
}

wd_status wd_two_omega_harmonic(uint64_t n_top, double* out) {
  return guarded([&] { *out = two_omega_harmonic_sum(n_top); });
}

wd_status wd_quad_exp_sum(int64_t a, uint64_t q, uint64_t k, uint64_t m_top, double* re,
                          double* im) {
  return guarded([&] {
    auto t = weyl::quad_exp_sum({a, q}, k, m_top);
    *re = t.real();
    *im = t.imag();
  });
}

wd_status wd_sarkozy_check(int64_t a, uint64_t q, uint64_t k, uint64_t m_top, double* lhs,
                           double* rhs, int* pass) {
  return guarded([&] {
    auto c = weyl::sarkozy_check({a, q}, k, m_top);
    *lhs = c.lhs;
    *rhs = c.rhs;
    *pass = c.pass ? 1 : 0;
  });
}

wd_status wd_complete_sum_identity(uint64_t k, uint64_t bigD, double* value, double* rho_ratio) {
  return guarded([&] {
    auto c = weyl::complete_sum_identity(k, bigD);
    *value = c.value;
    *rho_ratio = c.rho_ratio;
  });
}

wd_status wd_euler_cesaro_gap(const double* re, const double* im, size_t len, uint64_t n,
                              double* sum_re, double* sum_im, double* max_partial, double* ratio) {
  return guarded([&] {
    std::vector<std::complex<double>> a(len);
    for (size_t i = 0; i < len; ++i) a[i] = {re[i], im ? im[i] : 0.0};
    auto g = weyl::euler_cesaro_gap(a, n);
    *sum_re = g.euler_sum.real();
    *sum_im = g.euler_sum.imag();
    *max_partial = g.max_partial;
    *ratio = g.ratio;
  });
}

wd_status wd_euler_central_weight(uint64_t n, double* out) {
  return guarded([&] { *out = weyl::euler_central_weight(n); });
}

wd_status wd_euler_quadratic_gap(int64_t a, uint64_t q, uint64_t k, uint64_t n, double* sum_re,
                                 double* sum_im, double* max_partial, double* ratio) {
  return guarded([&] {
    auto family = weyl::quadratic_phase_family({a, q}, k, n);
    auto g = weyl::euler_cesaro_gap(family, n);
    *sum_re = g.euler_sum.real();
    *sum_im = g.euler_sum.imag();
    *max_partial = g.max_partial;
    *ratio = g.ratio;
  });
}

wd_status wd_set_parse(const char* spec, wd_set** out) {
  return guarded([&] {
    if (!spec) throw std::invalid_argument("set spec is null");
    *out = new wd_set{DivisorSet::parse(spec)};
  });
}

void wd_set_free(wd_set* s) { delete s; }

int wd_set_contains(const wd_set* s, uint64_t d) { return s->set.contains(d) ? 1 : 0; }

wd_status wd_set_members_json(const wd_set* s, double bound, char** json_out) {
  return guarded([&] {
    ordered_json j;
    j["set"] = s->set.spec_string();
    j["bound"] = bound;
    j["members"] = s->set.members_up_to(bound);
    *json_out = dup_string(j.dump());
  });
}

wd_status wd_mean_divisor_sum_exact(uint64_t n_top, wd_cutoff cutoff, const wd_set* set,
                                    wd_dyadic** out) {
  return guarded([&] {
    *out = new wd_dyadic{exact::mean_divisor_sum(n_top, make_cutoff(cutoff), set->set)};
  });
}

wd_status wd_mean_divisor_sum_main(uint64_t n_top, wd_cutoff cutoff, const wd_set* set,
                                   double* out) {
  return guarded(
      [&] { *out = exact::mean_divisor_sum_main(n_top, make_cutoff(cutoff), set->set); });
}

wd_status wd_increment_second_moment(uint64_t i, uint64_t j, wd_cutoff cutoff, const wd_set* set,
                                     wd_dyadic** out) {
  return guarded([&] {
    *out = new wd_dyadic{exact::increment_second_moment(i, j, make_cutoff(cutoff), set->set)};
  });
}

wd_status wd_increment_moment_mc(uint64_t i, uint64_t j, wd_cutoff cutoff, const wd_set* set,
                                 uint64_t walks, uint64_t seed, double eps, uint32_t threads,
                                 double* estimate, double* stderr_out, double* bound_ratio) {
  return guarded([&] {
    auto e = sim::increment_moment_mc(i, j, make_cutoff(cutoff), set->set, walks, seed, eps,
                                      threads);
    *estimate = e.estimate;
    *stderr_out = e.stderr_;
    *bound_ratio = e.bound_ratio;
  });
}

wd_status wd_simulate(uint64_t seed, uint64_t steps, wd_cutoff cutoff, const wd_set* set,
                      const char* subseq_spec, double rho_claim, uint32_t walks,
                      uint32_t checkpoints, double eps, uint32_t threads,
                      const uint8_t* injected_bits, size_t injected_len, wd_report** out) {
  return guarded([&] {
    sim::WalkConfig config;
    config.seed = seed;
    config.steps = steps;
    config.cutoff = make_cutoff(cutoff);
    config.set = set->set;
    config.subsequence = make_subseq(subseq_spec, rho_claim);
    config.checkpoint_count = checkpoints;
    if (injected_bits)
      config.injected_bits = std::vector<uint8_t>(injected_bits, injected_bits + injected_len);
    *out = new wd_report{sim::run_walks(config, walks, eps, threads)};
  });
}

void wd_report_free(wd_report* r) { delete r; }

char* wd_report_json(const wd_report* r) { return dup_string(sim::to_json(r->result)); }

char* wd_report_csv(const wd_report* r) { return dup_string(sim::to_csv(r->result)); }

wd_status wd_make_subsequence(const char* subseq_spec, double rho_claim, uint64_t limit,
                              char** json_out) {
  return guarded([&] {
    auto [nu, check] = sim::make_subsequence(make_subseq(subseq_spec, rho_claim), limit);
    ordered_json j;
    j["sequence"] = nu;
    j["growth_check"] = ordered_json{{"pass", check.pass}, {"fitted_c", check.fitted_c}};
    *json_out = dup_string(j.dump());
  });
}

wd_status wd_check_inequality(const char* id, const char* grid_json, const char* params_json,
                              char** record_json) {
  return guarded([&] {
    if (!id) throw std::invalid_argument("inequality id is null");
    auto iid = bounds::parse_inequality_id(id);
    walkdiv::bounds::Json grid;
    if (grid_json && *grid_json) grid = walkdiv::bounds::Json::parse(grid_json);
    bounds::Params params;
    if (params_json && *params_json) {
      auto pj = nlohmann::json::parse(params_json);
      for (auto& [k, v] : pj.items()) params[k] = v.get<double>();
    }
    *record_json = dup_string(bounds::check_inequality(iid, grid, params).to_json().dump());
  });
}

}  // extern "C"
