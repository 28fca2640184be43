// walkdiv CLI: every library operation behind one binary with JSON/CSV/plain
// output for scripted experiments and regression baselines.
//
// Exit codes: 0 success, 2 usage error, 1 guard/resource refusal.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "walkdiv.h"

using ordered_json = nlohmann::ordered_json;

namespace {

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(wd_status s) {
  throw CliError{s == WD_ERR_INVALID ? 2 : 1,
                 std::string(wd_status_name(s)) + ": " + wd_last_error()};
}

void check(wd_status s) {
  if (s != WD_OK) fail(s);
}

std::string take_string(char* s) {
  if (!s) throw CliError{1, "out of memory"};
  std::string out(s);
  wd_string_free(s);
  return out;
}

struct DyadicBox {
  wd_dyadic* v = nullptr;
  ~DyadicBox() { wd_dyadic_free(v); }
  std::string fraction() const { return take_string(wd_dyadic_fraction(v)); }
  double decimal() const { return wd_dyadic_double(v); }
};

struct SetBox {
  wd_set* s = nullptr;
  ~SetBox() { wd_set_free(s); }
};

struct ReportBox {
  wd_report* r = nullptr;
  ~ReportBox() { wd_report_free(r); }
};

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Common output shaping: json object, one-row csv, or a single plain value.
struct Result {
  ordered_json fields;
  std::string plain;

  std::string render(const std::string& mode) const {
    if (mode == "plain") return plain + "\n";
    if (mode == "csv") {
      std::string head, row;
      for (auto& [k, v] : fields.items()) {
        if (!head.empty()) {
          head += ',';
          row += ',';
        }
        head += k;
        row += v.is_string() ? v.get<std::string>() : v.dump();
      }
      return head + "\n" + row + "\n";
    }
    return fields.dump(2) + "\n";
  }
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw CliError{1, "cannot open output file " + out_path};
  f << text;
}

wd_cutoff cutoff_from(std::optional<double> theta, std::optional<double> eta) {
  if (theta && eta) throw CliError{2, "give either --theta or --eta, not both"};
  if (eta) return {WD_CUTOFF_ETA_SQRT, *eta};
  return {WD_CUTOFF_THETA, theta.value_or(0.5)};
}

std::string read_set_spec(const std::string& set_flag) {
  // file:PATH loads an explicit divisor list, one integer per line
  if (set_flag.rfind("file:", 0) != 0) return set_flag;
  std::ifstream f(set_flag.substr(5));
  if (!f) throw CliError{2, "cannot open set file " + set_flag.substr(5)};
  std::string spec = "list:";
  std::uint64_t v;
  bool first = true;
  while (f >> v) {
    if (!first) spec += ',';
    spec += std::to_string(v);
    first = false;
  }
  return spec;
}

std::vector<std::uint8_t> read_bits(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CliError{2, "cannot open bit file " + path};
  std::vector<std::uint8_t> bits;
  char c;
  while (f.get(c)) {
    if (c == '0' || c == '1') bits.push_back(c == '1');
  }
  return bits;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divisor statistics of Bernoulli random walks"};
  app.require_subcommand(1);

  std::string output = "json", out_path;
  std::uint64_t d = 1, delta = 1, n = 1, m = 1, bigD = 1, k = 0, bigM = 1, limit = 100, seed = 0,
                walks_u64 = 0, harmonic = 0;
  std::int64_t a = 0;
  std::uint64_t q = 1;
  std::optional<double> theta, eta, eps;
  double tol = 1e-12, rho_claim = -1.0, alpha = -1.0, cparam = -1.0, members_bound = -1.0;
  std::uint32_t walks = 1, checkpoints = 10, threads = 1;
  std::string set_flag = "all", subseq = "all", method = "exact", mode = "sum", id = "all";
  std::string grid_json, bits_path, from_report;
  bool factor_flag = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--output", output)->check(CLI::IsMember({"json", "csv", "plain"}));
    sub->add_option("--out", out_path);
    return sub;
  };

  auto* prob = add_common(app.add_subcommand("prob", "P{d | B_n}"));
  prob->add_option("--d", d)->required();
  prob->add_option("--n", n)->required();
  prob->add_option("--method", method)->check(CLI::IsMember({"exact", "trig", "theta"}));
  prob->add_option("--tol", tol);

  auto* joint = add_common(app.add_subcommand("joint", "P{d | B_n, delta | B_m}"));
  joint->add_option("--d", d)->required();
  joint->add_option("--n", n)->required();
  joint->add_option("--delta", delta)->required();
  joint->add_option("--m", m)->required();
  joint->add_option("--method", method)->check(CLI::IsMember({"exact", "trig"}));

  auto* product = add_common(app.add_subcommand("product", "P{D | B_n B_m}"));
  product->add_option("--D", bigD)->required();
  product->add_option("--n", n)->required();
  product->add_option("--m", m)->required();

  auto* corr = add_common(app.add_subcommand("corr", "covariance of the two indicators"));
  corr->add_option("--d", d)->required();
  corr->add_option("--n", n)->required();
  corr->add_option("--delta", delta)->required();
  corr->add_option("--m", m)->required();
  corr->add_option("--method", method)->check(CLI::IsMember({"exact", "trig"}));

  auto* rho = add_common(app.add_subcommand("rho", "root count of y(y+k) mod D; also --factor, --harmonic, --members"));
  rho->add_option("--k", k);
  rho->add_option("--D", bigD);
  rho->add_flag("--factor", factor_flag, "factor D instead");
  rho->add_option("--harmonic", harmonic, "sum_{D<=N} 2^omega(D)/D instead");
  rho->add_option("--members", members_bound, "list --set members up to this bound instead");
  rho->add_option("--set", set_flag);

  auto* theta_cmd = add_common(app.add_subcommand("theta", "Gaussian lattice-sum marginal"));
  theta_cmd->add_option("--d", d)->required();
  theta_cmd->add_option("--n", n)->required();
  theta_cmd->add_option("--tol", tol);

  auto* weyl = add_common(app.add_subcommand("weyl", "quadratic exponential sums"));
  weyl->add_option("--mode", mode)->check(CLI::IsMember({"sum", "sarkozy", "complete", "euler"}));
  weyl->add_option("--a", a);
  weyl->add_option("--q", q);
  weyl->add_option("--k", k);
  weyl->add_option("--M", bigM);
  weyl->add_option("--D", bigD);
  weyl->add_option("--n", n);

  auto* bounds = add_common(app.add_subcommand("bounds", "inequality checks on grids"));
  bounds->add_option("--id", id, "inequality id or 'all'");
  bounds->add_option("--grid", grid_json, "grid override as JSON");
  bounds->add_option("--eps", eps);
  bounds->add_option("--alpha", alpha);
  bounds->add_option("--c", cparam);
  bounds->add_option("--theta", theta);
  bounds->add_option("--eta", eta);

  auto* simulate = add_common(app.add_subcommand("simulate", "seeded divisor-count walks"));
  simulate->add_option("--n", n, "walk length N")->required();
  simulate->add_option("--seed", seed);
  simulate->add_option("--walks", walks);
  simulate->add_option("--checkpoints", checkpoints);
  simulate->add_option("--theta", theta);
  simulate->add_option("--eta", eta);
  simulate->add_option("--set", set_flag);
  simulate->add_option("--subseq", subseq);
  simulate->add_option("--rho-claim", rho_claim);
  simulate->add_option("--eps", eps);
  simulate->add_option("--threads", threads);
  simulate->add_option("--bits", bits_path, "injected 0/1 bit file (overrides the RNG)");
  simulate->add_option("--method", method)->check(CLI::IsMember({"exact", "main"}));

  auto* increments = add_common(app.add_subcommand("increments", "second moment of summed centered counts"));
  increments->add_option("--n", n, "range start i");
  increments->add_option("--m", m, "range end j");
  increments->add_option("--theta", theta);
  increments->add_option("--eta", eta);
  increments->add_option("--set", set_flag);
  increments->add_option("--walks", walks_u64, "Monte Carlo walks (>= 100 enables MC)");
  increments->add_option("--seed", seed);
  increments->add_option("--eps", eps);
  increments->add_option("--threads", threads);
  increments->add_option("--from-report", from_report, "re-emit checkpoints from a simulate JSON report");

  auto* subseq_cmd = add_common(app.add_subcommand("subseq", "generate a walk subsequence"));
  subseq_cmd->add_option("--subseq", subseq)->required();
  subseq_cmd->add_option("--limit", limit);
  subseq_cmd->add_option("--rho-claim", rho_claim);

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      std::cout << app.help();
      return 0;
    } catch (const CLI::ParseError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return 2;
    }

    Result res;

    if (prob->parsed()) {
      res.fields["d"] = d;
      res.fields["n"] = n;
      res.fields["method"] = method;
      if (method == "exact") {
        DyadicBox v;
        check(wd_prob_exact(d, n, &v.v));
        res.fields["value"] = v.fraction();
        res.fields["decimal"] = v.decimal();
        res.plain = v.fraction();
      } else {
        double v;
        check(method == "trig" ? wd_prob_trig(d, n, &v) : wd_theta_marginal(d, n, tol, &v));
        if (method == "theta") res.fields["tol"] = tol;
        res.fields["value"] = v;
        res.plain = format17(v);
      }
    } else if (joint->parsed() || corr->parsed()) {
      bool is_corr = corr->parsed();
      res.fields["d"] = d;
      res.fields["n"] = n;
      res.fields["delta"] = delta;
      res.fields["m"] = m;
      res.fields["method"] = method;
      if (method == "exact") {
        DyadicBox v;
        check(is_corr ? wd_correlation_exact(d, n, delta, m, &v.v)
                      : wd_joint_exact(d, n, delta, m, &v.v));
        res.fields["value"] = v.fraction();
        res.fields["decimal"] = v.decimal();
        res.plain = v.fraction();
      } else {
        double v;
        check(is_corr ? wd_correlation_trig(d, n, delta, m, &v)
                      : wd_joint_trig(d, n, delta, m, &v));
        res.fields["value"] = v;
        res.plain = format17(v);
      }
    } else if (product->parsed()) {
      DyadicBox v;
      check(wd_product_exact(bigD, n, m, &v.v));
      res.fields["D"] = bigD;
      res.fields["n"] = n;
      res.fields["m"] = m;
      res.fields["value"] = v.fraction();
      res.fields["decimal"] = v.decimal();
      res.plain = v.fraction();
    } else if (rho->parsed()) {
      if (members_bound >= 0.0) {
        SetBox set;
        check(wd_set_parse(read_set_spec(set_flag).c_str(), &set.s));
        char* j;
        check(wd_set_members_json(set.s, members_bound, &j));
        res.fields = ordered_json::parse(take_string(j));
        res.plain = res.fields["members"].dump();
      } else if (harmonic > 0) {
        double v;
        check(wd_two_omega_harmonic(harmonic, &v));
        res.fields["N"] = harmonic;
        res.fields["sum"] = v;
        res.plain = format17(v);
      } else if (factor_flag) {
        char* j;
        check(wd_factor_json(bigD, &j));
        res.fields = ordered_json::parse(take_string(j));
        res.plain = res.fields["factors"].dump();
      } else {
        std::uint64_t r;
        check(wd_rho_closed(k, bigD, &r));
        res.fields["k"] = k;
        res.fields["D"] = bigD;
        res.fields["rho"] = r;
        res.fields["method"] = "closed";
        bool verified = false;
        if (bigD <= 1'000'000) {
          std::uint64_t rb;
          check(wd_rho_brute(k, bigD, &rb));
          verified = rb == r;
        }
        res.fields["verified_brute"] = verified;
        res.plain = std::to_string(r);
      }
    } else if (theta_cmd->parsed()) {
      double v;
      check(wd_theta_marginal(d, n, tol, &v));
      res.fields["d"] = d;
      res.fields["n"] = n;
      res.fields["tol"] = tol;
      res.fields["value"] = v;
      res.plain = format17(v);
    } else if (weyl->parsed()) {
      if (mode == "sum" || mode == "sarkozy") {
        double re, im;
        check(wd_quad_exp_sum(a, q, k, bigM, &re, &im));
        res.fields["a"] = a;
        res.fields["q"] = q;
        res.fields["k"] = k;
        res.fields["M"] = bigM;
        res.fields["re"] = re;
        res.fields["im"] = im;
        res.fields["abs2"] = re * re + im * im;
        res.plain = format17(re) + (im < 0 ? "" : "+") + format17(im) + "i";
        if (mode == "sarkozy") {
          double lhs, rhs;
          int pass;
          check(wd_sarkozy_check(a, q, k, bigM, &lhs, &rhs, &pass));
          res.fields["lhs"] = lhs;
          res.fields["rhs"] = rhs;
          res.fields["pass"] = pass != 0;
          res.plain = pass ? "pass" : "FAIL";
        }
      } else if (mode == "complete") {
        double value, ratio;
        check(wd_complete_sum_identity(k, bigD, &value, &ratio));
        res.fields["k"] = k;
        res.fields["D"] = bigD;
        res.fields["value"] = value;
        res.fields["rho_ratio"] = ratio;
        res.fields["gap"] = std::abs(value - ratio);
        res.plain = format17(value);
      } else {  // euler
        double re, im, max_partial, ratio;
        check(wd_euler_quadratic_gap(a, q, k, n, &re, &im, &max_partial, &ratio));
        res.fields["a"] = a;
        res.fields["q"] = q;
        res.fields["k"] = k;
        res.fields["n"] = n;
        res.fields["euler_re"] = re;
        res.fields["euler_im"] = im;
        res.fields["max_partial"] = max_partial;
        res.fields["ratio"] = ratio;
        res.plain = format17(ratio);
      }
    } else if (bounds->parsed()) {
      ordered_json params = ordered_json::object();
      if (eps) params["eps"] = *eps;
      if (alpha > 0) params["alpha"] = alpha;
      if (cparam > 0) params["c"] = cparam;
      if (theta) params["theta"] = *theta;
      if (eta) params["eta"] = *eta;
      std::string params_str = params.empty() ? "" : params.dump();
      std::vector<std::string> ids;
      if (id == "all") {
        ids = {"THETA_UNIFORM",    "MARGINAL_GAP",  "MARGINAL_FAST", "D_TIMES_P",
               "WEAK_DEP_NEAR",    "WEAK_DEP_FAR",  "DELTA_CONTINUITY", "PROD_APPROX",
               "STRONG_DEP_JOINT", "RHO_BOUND",     "HARMONIC_2OMEGA", "INCREMENT_A",
               "INCREMENT_B"};
      } else {
        ids = {id};
      }
      ordered_json records = ordered_json::array();
      std::string plain, csv = "id,worst_ratio,fitted_constant,pass\n";
      for (const std::string& one : ids) {
        char* rec;
        check(wd_check_inequality(one.c_str(), grid_json.empty() ? nullptr : grid_json.c_str(),
                                  params_str.empty() ? nullptr : params_str.c_str(), &rec));
        ordered_json r = ordered_json::parse(take_string(rec));
        csv += one + "," + r["worst_ratio"].dump() + "," + r["fitted_constant"].dump() + "," +
               r["pass"].dump() + "\n";
        plain += one + " " + (r["pass"].get<bool>() ? "pass" : "FAIL") +
                 " fitted=" + r["fitted_constant"].dump() + "\n";
        records.push_back(std::move(r));
      }
      std::string text = output == "csv"    ? csv
                         : output == "plain" ? plain
                                             : (records.size() == 1 ? records[0] : records).dump(2) + "\n";
      emit(text, out_path);
      return 0;
    } else if (simulate->parsed()) {
      SetBox set;
      check(wd_set_parse(read_set_spec(set_flag).c_str(), &set.s));
      wd_cutoff cut = cutoff_from(theta, eta);
      if (walks == 0) {
        // deterministic mean path only
        res.fields["N"] = n;
        res.fields["mode"] = method;
        if (method == "exact") {
          DyadicBox v;
          check(wd_mean_divisor_sum_exact(n, cut, set.s, &v.v));
          res.fields["value"] = v.fraction();
          res.fields["decimal"] = v.decimal();
          res.plain = v.fraction();
        } else {
          double v;
          check(wd_mean_divisor_sum_main(n, cut, set.s, &v));
          res.fields["value"] = v;
          res.plain = format17(v);
        }
      } else {
        std::vector<std::uint8_t> bits;
        if (!bits_path.empty()) bits = read_bits(bits_path);
        ReportBox rep;
        check(wd_simulate(seed, n, cut, set.s, subseq.c_str(), rho_claim, walks, checkpoints,
                          eps.value_or(0.25), threads, bits.empty() ? nullptr : bits.data(), bits.size(),
                          &rep.r));
        std::string text = output == "csv" ? take_string(wd_report_csv(rep.r))
                                           : take_string(wd_report_json(rep.r)) + "\n";
        if (output == "plain") text = take_string(wd_report_csv(rep.r));
        emit(text, out_path);
        return 0;
      }
    } else if (increments->parsed()) {
      if (!from_report.empty()) {
        std::ifstream f(from_report);
        if (!f) throw CliError{2, "cannot open report " + from_report};
        ordered_json rep = ordered_json::parse(f);
        std::string csv = "n,S_n,M_n,error\n";
        for (const auto& walk : rep.at("reports")) {
          for (const auto& c : walk.at("checkpoints")) {
            csv += c.at("n").dump() + "," + c.at("S_n").dump() + "," + c.at("M_n").dump() + "," +
                   c.at("error").dump() + "\n";
          }
        }
        emit(csv, out_path);
        return 0;
      }
      SetBox set;
      check(wd_set_parse(read_set_spec(set_flag).c_str(), &set.s));
      wd_cutoff cut = cutoff_from(theta, eta);
      res.fields["i"] = n;
      res.fields["j"] = m;
      DyadicBox v;
      check(wd_increment_second_moment(n, m, cut, set.s, &v.v));
      res.fields["exact"] = v.fraction();
      res.fields["exact_decimal"] = v.decimal();
      res.plain = v.fraction();
      if (walks_u64 >= 100) {
        double est, se, ratio;
        check(wd_increment_moment_mc(n, m, cut, set.s, walks_u64, seed, eps.value_or(0.1), threads, &est, &se,
                                     &ratio));
        res.fields["mc_estimate"] = est;
        res.fields["mc_stderr"] = se;
        res.fields["bound_ratio"] = ratio;
      }
    } else if (subseq_cmd->parsed()) {
      char* j;
      check(wd_make_subsequence(subseq.c_str(), rho_claim, limit, &j));
      res.fields = ordered_json::parse(take_string(j));
      res.plain = res.fields["sequence"].dump();
    }

    emit(res.render(output), out_path);
    return 0;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
