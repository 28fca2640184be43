#include <doctest.h>

#include <cmath>
#include <set>

#include "walkdiv/bounds.hpp"

using namespace walkdiv::bounds;

TEST_CASE("fit_envelope") {
  CHECK_THROWS_AS(fit_envelope({}), std::invalid_argument);
  CHECK_THROWS_AS(fit_envelope({{1.0, 2.0, 0.0}}), std::invalid_argument);

  auto single = fit_envelope({{1.0, 2.0, 1.0}});
  CHECK(single.constant == doctest::Approx(2.0));
  CHECK(single.max_index == 0);

  // ties break at the first index
  auto flat = fit_envelope({{1, 3, 3}, {2, 5, 5}, {3, 7, 7}});
  CHECK(flat.constant == doctest::Approx(1.0));
  CHECK(flat.max_index == 0);

  auto mid = fit_envelope({{1, 1, 1}, {2, 6, 2}, {3, 2, 4}});
  CHECK(mid.constant == doctest::Approx(3.0));
  CHECK(mid.max_index == 1);
}

TEST_CASE("id names round-trip") {
  for (auto id : all_inequality_ids()) CHECK(parse_inequality_id(to_string(id)) == id);
  CHECK_THROWS_AS(parse_inequality_id("NO_SUCH"), std::invalid_argument);
}

TEST_CASE("record schema has exactly the documented fields") {
  auto rec = check_inequality(InequalityId::RhoBound, Json{{"D_max", 50}, {"k_max", 5}});
  auto j = rec.to_json();
  std::set<std::string> keys;
  for (auto& [k, v] : j.items()) keys.insert(k);
  CHECK(keys == std::set<std::string>{"id", "grid", "params", "worst_ratio", "fitted_constant",
                                      "pass", "witnesses"});
  CHECK(j["id"] == "RHO_BOUND");
}

TEST_CASE("rho bound record passes with the pinned constant") {
  auto rec = check_inequality(InequalityId::RhoBound, Json{{"D_max", 500}, {"k_max", 20}});
  CHECK(rec.pass);
  CHECK(rec.worst_ratio <= 1.0);
  CHECK(rec.fitted_constant <= 1.0);
  CHECK(rec.fitted_constant > 0.0);
}

TEST_CASE("harmonic sum record") {
  auto rec = check_inequality(InequalityId::Harmonic2Omega, Json{{"N", {100, 1000, 10000}}});
  CHECK(rec.pass);
  CHECK(std::isfinite(rec.fitted_constant));
  CHECK(rec.fitted_constant > 0.0);
  CHECK(rec.witnesses.size() == 3);
}

TEST_CASE("theta uniform record on a reduced grid") {
  auto rec = check_inequality(InequalityId::ThetaUniform, Json{{"n", {32, 64, 128}}});
  CHECK(rec.pass);
  // per-scale fitted constants present and shrinking overall
  double first = rec.witnesses[0]["fitted"].get<double>();
  double last = rec.witnesses[2]["fitted"].get<double>();
  CHECK(first > 0.0);
  CHECK(last < first);
}

TEST_CASE("marginal gap stays within a doubling across scales") {
  auto rec = check_inequality(InequalityId::MarginalGap, Json{{"n", {64, 256}}}, {{"slack", 1.0}});
  CHECK(rec.pass);
  double c0 = rec.witnesses[0]["fitted"].get<double>();
  double c1 = rec.witnesses[1]["fitted"].get<double>();
  CHECK(c1 <= 2.0 * c0);
}

TEST_CASE("vacuous window yields a vacuous pass") {
  // enormous alpha empties the admissible-divisor window
  auto rec = check_inequality(InequalityId::MarginalFast, Json{{"n", {64}}}, {{"alpha", 1e6}});
  CHECK(rec.pass);
  CHECK(rec.fitted_constant == 0.0);
  CHECK(rec.worst_ratio == 0.0);
}

TEST_CASE("records are deterministic") {
  auto a = check_inequality(InequalityId::ProdApprox,
                            Json{{"n", {50, 100}}, {"D", {4, 6}}, {"gap", {3, 5}}});
  auto b = check_inequality(InequalityId::ProdApprox,
                            Json{{"n", {50, 100}}, {"D", {4, 6}}, {"gap", {3, 5}}});
  CHECK(a.to_json().dump() == b.to_json().dump());
}

TEST_CASE("delta continuity record is finite") {
  auto rec = check_inequality(InequalityId::DeltaContinuity,
                              Json{{"n", {24}}, {"m", {36, 44, 52}}, {"d_max", 5}});
  CHECK(std::isfinite(rec.fitted_constant));
  CHECK(rec.pass);
}

TEST_CASE("strong dependence joint record reports a stable constant") {
  auto rec = check_inequality(InequalityId::StrongDepJoint,
                              Json{{"n", {60, 120}}, {"gap_max", 6}, {"d_max", 5}});
  CHECK(std::isfinite(rec.fitted_constant));
  CHECK(rec.fitted_constant > 0.0);
}

TEST_CASE("increment records") {
  auto a = check_inequality(InequalityId::IncrementA, Json{{"i", {8, 16}}, {"j", {16, 32}}});
  CHECK(std::isfinite(a.fitted_constant));
  auto b = check_inequality(InequalityId::IncrementB, Json{{"i", {8, 16}}, {"j", {16, 32}}});
  CHECK(std::isfinite(b.fitted_constant));
}

TEST_CASE("weak dependence records evaluate without error") {
  auto near = check_inequality(InequalityId::WeakDepNear, Json{{"n", {48, 96}}});
  CHECK(std::isfinite(near.fitted_constant));
  auto far = check_inequality(InequalityId::WeakDepFar,
                              Json{{"n", {24, 48}}, {"m_over_n", {2, 3}}});
  CHECK(std::isfinite(far.fitted_constant));
  // the record notes which path supplied each worst point
  for (const auto& w : far.witnesses) {
    if (w.contains("path")) CHECK((w["path"] == "exact" || w["path"] == "trig"));
  }
}

TEST_CASE("near-range record is stable inside its regime") {
  // with c = 0.5 the gap floor n^c clears the d == delta resonance band and
  // the fitted constant decreases across scales
  auto rec = check_inequality(InequalityId::WeakDepNear, Json{{"n", {512, 1024}}},
                              {{"c", 0.5}});
  CHECK(rec.pass);
  double c0 = rec.witnesses[0]["fitted"].get<double>();
  double c1 = rec.witnesses[1]["fitted"].get<double>();
  CHECK(c1 < c0);
  // derived constants keep alpha > alpha' > max(3/2, 1/c)
  CHECK(rec.params.at("alpha") == doctest::Approx(3.0));
  CHECK(rec.params.at("alpha_prime") == doctest::Approx(2.5));
}

TEST_CASE("fast-marginal gaps register below double-rounding scale") {
  auto rec = check_inequality(InequalityId::MarginalFast, Json{{"n", {128, 256}}});
  // true gaps inside the window shrink super-polynomially; the exact dyadic
  // path must see ~2^-n, not the ~1e-17 rounding floor of 1/d
  for (const auto& w : rec.witnesses) {
    if (w.contains("lhs")) CHECK(w["lhs"].get<double>() < 1e-30);
  }
}
