// gsbp: reproduction experiments for geometric stick-breaking occupancy.
//
// Subcommands: weights, expect, expand, mc, verify.
// Exit codes: 0 success, 1 check failure, 2 usage error.

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gsbp/expansions.hpp"
#include "gsbp/montecarlo.hpp"
#include "gsbp/occupancy.hpp"
#include "gsbp/priors.hpp"
#include "gsbp/quadrature.hpp"
#include "gsbp/special.hpp"
#include "gsbp/tail_measure.hpp"
#include "gsbp/weights.hpp"
#include "json.hpp"

namespace {

using gsbp::SuccessPrior;
using gsbp::SuccessProbability;
using gsbp::WeightFamily;
using nlohmann::json;

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add_row(std::vector<json> cells) { rows.push_back(std::move(cells)); }
};

std::string csv_cell(const json& v) {
  if (v.is_number_float()) return fmt17(v.get<double>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string quoted = "\"";
    for (char c : s) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    return quoted;
  }
  return s;
}

void write_table(const Table& t, const std::string& out,
                 const std::string& format) {
  std::string text;
  if (format == "csv") {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      if (i) text += ',';
      text += t.columns[i];
    }
    text += '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) text += ',';
        text += csv_cell(row[i]);
      }
      text += '\n';
    }
  } else {  // json
    json arr = json::array();
    for (const auto& row : t.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
        obj[t.columns[i]] = row[i];
      }
      arr.push_back(std::move(obj));
    }
    text = arr.dump(2);
    text += '\n';
  }
  if (out.empty() || out == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw CLI::ValidationError("--out", "cannot open " + out);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
  }
}

bool color_allowed() {
  return std::getenv("NO_COLOR") == nullptr && isatty(fileno(stderr));
}

void status_line(bool ok, const std::string& msg) {
  if (color_allowed()) {
    std::fprintf(stderr, "%s%s\x1b[0m\n", ok ? "\x1b[32m" : "\x1b[31m",
                 msg.c_str());
  } else {
    std::fprintf(stderr, "%s\n", msg.c_str());
  }
}

SuccessPrior parse_prior(const std::string& spec) {
  if (spec == "uniform") return SuccessPrior::uniform();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string head = spec.substr(0, colon);
    const std::string arg = spec.substr(colon + 1);
    try {
      if (head == "loggamma") return SuccessPrior::log_gamma(std::stoi(arg));
      if (head == "rho") return SuccessPrior::log_gamma_rho(std::stod(arg));
    } catch (const std::exception&) {
    }
  }
  throw CLI::ValidationError(
      "--prior", "expected uniform, loggamma:m, or rho:v, got " + spec);
}

void check_grid(const std::vector<double>& grid, const std::string& name) {
  if (grid.empty()) throw CLI::ValidationError(name, "grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw CLI::ValidationError(name, "grid must be strictly increasing");
    }
  }
}

struct OutputOpts {
  std::string path = "-";
  std::string format = "csv";
};

void add_output_flags(CLI::App* cmd, OutputOpts* o) {
  cmd->add_option("--out", o->path, "Output path ('-' for stdout)")
      ->capture_default_str();
  cmd->add_option("--format", o->format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

// ---------------------------------------------------------------- weights --

int run_weights(int family, double p, long long count, const OutputOpts& out) {
  const WeightFamily fam(family);
  const SuccessProbability sp(p);
  Table t;
  t.columns = {"j", "weight", "cumulative", "tail", "total_check"};
  double cum = 0.0;
  for (long long j = 1; j <= count; ++j) {
    const double w = gsbp::weight(fam, sp, j);
    cum += w;
    const double tail = gsbp::tail_mass(fam, sp, j);
    t.add_row({j, w, cum, tail, cum + tail});
  }
  write_table(t, out.path, out.format);
  return 0;
}

// ----------------------------------------------------------------- expect --

int run_expect(int family, bool have_p, double p, const std::string& prior_spec,
               const std::vector<double>& n_grid, double eps,
               const OutputOpts& out) {
  const WeightFamily fam(family);
  Table t;
  t.columns = {"n",   "expected_Kn", "poissonized_phi",
               "gap", "bound",       "within_bound"};
  bool all_ok = true;
  for (double n : n_grid) {
    double e, f;
    if (have_p) {
      const SuccessProbability sp(p);
      e = gsbp::expected_Kn_given_p(fam, sp, n, eps);
      f = gsbp::phi_given_p(fam, sp, n, eps);
    } else {
      const SuccessPrior prior = parse_prior(prior_spec);
      e = gsbp::expected_Kn(prior, fam, n, eps);
      f = gsbp::phi(prior, fam, n, eps);
    }
    const double gap = std::fabs(e - f);
    const double bound = 2.0 / n * f + 4.0 * eps;
    const bool ok = gap <= bound;
    all_ok = all_ok && ok;
    t.add_row({n, e, f, gap, bound, ok ? "pass" : "fail"});
  }
  write_table(t, out.path, out.format);
  if (!all_ok) status_line(false, "FAILED: Poissonization bound violated");
  return all_ok ? 0 : 1;
}

// ----------------------------------------------------------------- expand --

void append_report(Table* t, const gsbp::ExpansionReport& rep,
                   const std::string& method, double budget,
                   const std::vector<json>& extra = {}) {
  if (t->columns.empty()) {
    t->columns = {"argument"};
    for (const auto& term : rep.terms) t->columns.push_back(term.label);
    t->columns.insert(t->columns.end(),
                      {"predicted_total", "reference", "residual",
                       "normalized_residual", "method", "error_budget"});
    if (!extra.empty()) t->columns.push_back("s3_minus_s2_over_LlogL");
  }
  std::vector<json> row = {rep.argument};
  for (const auto& term : rep.terms) row.push_back(term.value);
  row.insert(row.end(), {rep.predicted_total, rep.reference_value, rep.residual,
                         rep.normalized_residual, method, budget});
  for (const json& e : extra) row.push_back(e);
  t->add_row(std::move(row));
}

int run_expand(const std::string& prop, int m, double rho, bool have_p,
               double p, const std::vector<double>& n_grid,
               const std::vector<double>& t_grid,
               const std::vector<double>& x_grid, double eps,
               const OutputOpts& out) {
  Table t;
  auto need = [](bool cond, const std::string& msg) {
    if (!cond) throw CLI::ValidationError("expand", msg);
  };
  if (prop == "fixed-p") {
    need(have_p && !n_grid.empty(), "fixed-p needs --p and --n-grid");
    for (double n : n_grid) {
      append_report(&t, gsbp::expand_fixed_p(SuccessProbability(p), n, eps),
                    "direct-sum", eps);
    }
  } else if (prop == "uniform-s2" || prop == "loggamma-m") {
    const int mm = (prop == "uniform-s2") ? 0 : m;
    need(!t_grid.empty() || !x_grid.empty(), prop + " needs --t-grid or --x-grid");
    for (double x : x_grid) {
      const auto rep = gsbp::expand_loggamma_m_tail(mm, x);
      append_report(&t, rep, "level-walk", 1e-6 * std::fabs(rep.reference_value));
    }
    for (double tt : t_grid) {
      append_report(&t, gsbp::expand_loggamma_m_mean(mm, tt, eps),
                    "poissonized-quadrature", 2.0 * eps);
    }
  } else if (prop == "rho") {
    need(!t_grid.empty(), "rho needs --t-grid");
    for (double tt : t_grid) {
      append_report(&t, gsbp::expand_rho_mean(rho, tt, eps),
                    "poissonized-quadrature", 2.0 * eps);
    }
  } else if (prop == "negbin-s3") {
    need(!t_grid.empty() || !x_grid.empty(),
         "negbin-s3 needs --t-grid or --x-grid");
    for (double x : x_grid) {
      const auto rep = gsbp::expand_negbin_s3_tail(x);
      append_report(&t, rep, "level-walk", 1e-6 * std::fabs(rep.reference_value));
    }
    for (double tt : t_grid) {
      const auto rep = gsbp::expand_negbin_s3_mean(tt, eps);
      const double L = std::log(tt);
      const double phi2 = gsbp::phi(SuccessPrior::uniform(),
                                    WeightFamily::geometric(), tt, eps);
      const double pair =
          (rep.reference_value - phi2) / (L * std::log(L));
      append_report(&t, rep, "poissonized-quadrature", 2.0 * eps, {pair});
    }
  } else {
    throw CLI::ValidationError("--proposition", "unknown proposition " + prop);
  }
  write_table(t, out.path, out.format);
  return 0;
}

// --------------------------------------------------------------------- mc --

int run_mc(int family, const std::string& prior_spec, long long n,
           long long reps, unsigned long long seed, double eps,
           const OutputOpts& out) {
  const gsbp::McConfig cfg{n, reps, seed, parse_prior(prior_spec),
                           WeightFamily(family)};
  const gsbp::McResult r = gsbp::mc_mean_Kn(cfg);
  const double exact = gsbp::expected_Kn(parse_prior(prior_spec),
                                         WeightFamily(family),
                                         static_cast<double>(n), eps);
  const double diff = std::fabs(r.mean_Kn - exact);
  const bool ok = diff <= 3.0 * r.std_error || diff <= 1e-9;
  Table t;
  t.columns = {"n",          "reps",       "seed",     "mc_mean",
               "std_error",  "quadrature", "abs_diff", "three_se",
               "within_three_se"};
  t.add_row({n, r.reps, r.seed, r.mean_Kn, r.std_error, exact, diff,
             3.0 * r.std_error, ok ? "pass" : "fail"});
  write_table(t, out.path, out.format);
  if (!ok) status_line(false, "FAILED: Monte Carlo outside three standard errors");
  return ok ? 0 : 1;
}

// ----------------------------------------------------------------- verify --

struct Check {
  std::string name;
  double value;
  double tol;
};

int run_verify(double tol_scale, const OutputOpts& out) {
  std::vector<Check> checks;

  {  // first moment of the round-length distribution function
    const double head = gsbp::integrate_doubling(gsbp::one_minus_f, 0.0, 60.0,
                                                 1e-12, 1e-12, 64, 1 << 14, 60, 0)
                            .value;
    checks.push_back({"gamma-identity",
                      std::fabs(head + 0.5 * std::exp(-60.0) - gsbp::euler_gamma),
                      1e-8});
  }
  {  // tail window of 1 - f
    double worst = 0.0;
    for (double tt = 15.0; tt <= 40.0; tt += 0.25) {
      worst = std::max(worst,
                       std::fabs(gsbp::one_minus_f(tt) * std::exp(tt) - 0.5));
    }
    checks.push_back({"f-tail-window", worst, 0.05});
  }
  {  // F against its asymptote, scaled by the allowed envelope
    double worst = 0.0;
    for (double x = 5.0; x <= 40.0; x += 0.5) {
      worst = std::max(worst, std::fabs(gsbp::F_cap(x) - (x - gsbp::euler_gamma)) /
                                  (2.0 * std::exp(-x)));
    }
    checks.push_back({"F-asymptote", worst, 1.0});
  }
  {  // Lambert round trips, both branches
    double worst = 0.0;
    for (double z : {-0.36, -0.2, -1e-3, -1e-9, 0.5, 3.0, 1e6}) {
      const double w = gsbp::lambert_w(gsbp::LambertBranch::principal, z);
      if (z >= -0.36787944117144233) {
        worst = std::max(worst, std::fabs(w * std::exp(w) - z) /
                                    std::max(std::fabs(z), 1e-300));
      }
    }
    for (double z : {-0.36, -0.1, -1e-4, -1e-12, -1e-100}) {
      const double w = gsbp::lambert_w(gsbp::LambertBranch::minus_one, z);
      worst = std::max(worst,
                       std::fabs(w * std::exp(w) - z) / std::fabs(z));
    }
    checks.push_back({"lambert-roundtrip", worst, 1e-12});
  }
  {  // partial sums plus tails reach 1
    double worst = 0.0;
    for (int s : {2, 3, 4, 5}) {
      for (double pv : {0.2, 0.7}) {
        const WeightFamily fam(s);
        const SuccessProbability sp(pv);
        double cum = 0.0;
        for (long long j = 1; j <= 120; ++j) cum += gsbp::weight(fam, sp, j);
        worst = std::max(worst,
                         std::fabs(cum + gsbp::tail_mass(fam, sp, 120) - 1.0));
      }
    }
    checks.push_back({"weights-normalization", worst, 1e-12});
  }
  {  // closed three-rod inversion really inverts
    double worst = 0.0;
    for (double pv : {0.1, 0.5, 0.9}) {
      for (double frac : {0.9, 1e-3, 1e-7}) {
        const double x = 0.5 * pv * (1.0 + pv) * frac;
        const double mm = gsbp::m_given_p_s3(x, SuccessProbability(pv));
        const double back = 0.5 * pv * std::exp(mm * std::log1p(-pv)) *
                            (1.0 + (mm + 1.0) * pv);
        worst = std::max(worst, std::fabs(back - x) / x);
      }
    }
    checks.push_back({"s3-inversion", worst, 1e-10});
  }
  {  // staircase count straddles the mean level by at most one
    double worst = 0.0;
    for (int s : {2, 3}) {
      for (double x : {1e-3, 1e-6}) {
        const double nu =
            gsbp::nu_arrow(SuccessPrior::uniform(), WeightFamily(s), x).value;
        const double mean =
            gsbp::m_of_x(SuccessPrior::uniform(), WeightFamily(s), x);
        worst = std::max(worst, std::fabs(nu - mean - 0.5));
      }
    }
    checks.push_back({"tail-bracketing", worst, 0.5000001});
  }
  {  // empirical de Haan constant of the uniform geometric tail
    auto tail = [](double x) {
      return gsbp::nu_arrow(SuccessPrior::uniform(), WeightFamily::geometric(), x)
          .value;
    };
    const double c = gsbp::de_haan_estimate(
        tail, 1e-10, 2.0, [](double x) { return std::log(x); });
    checks.push_back({"de-haan-uniform", std::fabs(c - 1.0), 0.1});
  }
  {  // Poissonization gap against its bound
    double worst = 0.0;
    for (double n : {10.0, 1000.0}) {
      const auto g = gsbp::poissonization_gap(WeightFamily::geometric(),
                                              SuccessProbability(0.5), n, 1e-9);
      worst = std::max(worst, g.gap / g.bound);
    }
    checks.push_back({"poissonization", worst, 1.0});
  }
  {  // the fixed-point iteration contracts
    const SuccessProbability sp(0.4);
    const double star = gsbp::m_given_p_s3(0.216, sp);
    const double e1 = std::fabs(gsbp::m_iterative_s3(0.216, sp, 1) - star);
    const double e2 = std::fabs(gsbp::m_iterative_s3(0.216, sp, 2) - star);
    checks.push_back({"iteration-contraction", e2 / e1, 0.9});
  }
  {  // halving eps moves the occupancy mean by less than eps
    const double a = gsbp::expected_Kn_given_p(WeightFamily(3),
                                               SuccessProbability(3e-4), 500.0,
                                               1e-6);
    const double b = gsbp::expected_Kn_given_p(WeightFamily(3),
                                               SuccessProbability(3e-4), 500.0,
                                               5e-7);
    checks.push_back({"eps-certification", std::fabs(a - b), 1e-6});
  }

  Table t;
  t.columns = {"check", "value", "tolerance", "status"};
  std::string first_fail;
  for (const Check& c : checks) {
    const double tol = c.tol * tol_scale;
    const bool ok = c.value <= tol;
    if (!ok && first_fail.empty()) first_fail = c.name;
    t.add_row({c.name, c.value, tol, ok ? "pass" : "fail"});
  }
  write_table(t, out.path, out.format);
  if (!first_fail.empty()) {
    status_line(false, "FAILED: " + first_fail);
    return 1;
  }
  status_line(true, "all checks passed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Occupancy counts of geometric stick-breaking species models"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI file");

  // weights
  auto* cw = app.add_subcommand("weights", "Print the leading box weights");
  int w_family = 2;
  double w_p = 0.5;
  long long w_count = 20;
  OutputOpts w_out;
  cw->add_option("--family", w_family, "Number of rods s >= 2")
      ->capture_default_str();
  cw->add_option("--p", w_p, "Success probability in (0,1)")->required();
  cw->add_option("--count", w_count, "Rows to print")->capture_default_str();
  add_output_flags(cw, &w_out);

  // expect
  auto* ce = app.add_subcommand(
      "expect", "Exact E(K_n) next to the Poissonized mean and its bound");
  int e_family = 2;
  double e_p = 0.0;
  std::string e_prior = "uniform";
  std::vector<double> e_ngrid;
  double e_eps = 1e-9;
  OutputOpts e_out;
  ce->add_option("--family", e_family, "Number of rods s >= 2")
      ->capture_default_str();
  auto* e_popt = ce->add_option("--p", e_p, "Fixed success probability");
  ce->add_option("--prior", e_prior, "uniform | loggamma:m | rho:v")
      ->capture_default_str();
  ce->add_option("--n-grid", e_ngrid, "Sample sizes, comma separated")
      ->delimiter(',')
      ->required();
  ce->add_option("--eps", e_eps, "Absolute error budget")->capture_default_str();
  add_output_flags(ce, &e_out);

  // expand
  auto* cx = app.add_subcommand(
      "expand", "Asymptotic expansions next to computed references");
  std::string x_prop;
  int x_m = 1;
  double x_rho = 0.5;
  double x_p = 0.0;
  std::vector<double> x_ngrid, x_tgrid, x_xgrid;
  double x_eps = 1e-7;
  OutputOpts x_out;
  cx->add_option("--proposition", x_prop,
                 "fixed-p | uniform-s2 | loggamma-m | rho | negbin-s3")
      ->required();
  cx->add_option("--m", x_m, "LogGamma order")->capture_default_str();
  cx->add_option("--rho", x_rho, "Fractional shape minus one")
      ->capture_default_str();
  auto* x_popt = cx->add_option("--p", x_p, "Fixed success probability");
  cx->add_option("--n-grid", x_ngrid, "Sample sizes")->delimiter(',');
  cx->add_option("--t-grid", x_tgrid, "Poisson times")->delimiter(',');
  cx->add_option("--x-grid", x_xgrid, "Tail thresholds")->delimiter(',');
  cx->add_option("--eps", x_eps, "Absolute error budget")->capture_default_str();
  add_output_flags(cx, &x_out);

  // mc
  auto* cm = app.add_subcommand(
      "mc", "Monte Carlo occupancy mean against quadrature");
  int m_family = 2;
  std::string m_prior = "uniform";
  long long m_n = 1000;
  long long m_reps = 10000;
  unsigned long long m_seed = 42;
  double m_eps = 1e-7;
  OutputOpts m_out;
  cm->add_option("--family", m_family, "Number of rods s >= 2")
      ->capture_default_str();
  cm->add_option("--prior", m_prior, "uniform | loggamma:m | rho:v")
      ->capture_default_str();
  cm->add_option("--n", m_n, "Draws per replicate")->capture_default_str();
  cm->add_option("--reps", m_reps, "Replicates")->capture_default_str();
  cm->add_option("--seed", m_seed, "Base seed")->capture_default_str();
  cm->add_option("--eps", m_eps, "Quadrature error budget")
      ->capture_default_str();
  add_output_flags(cm, &m_out);

  // verify
  auto* cv = app.add_subcommand("verify", "Run the invariant suite");
  double v_scale = 1.0;
  OutputOpts v_out;
  cv->add_option("--tol-scale", v_scale,
                 "Multiply every tolerance (0 forces failure)")
      ->capture_default_str();
  add_output_flags(cv, &v_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cw->parsed()) return run_weights(w_family, w_p, w_count, w_out);
    if (ce->parsed()) {
      check_grid(e_ngrid, "--n-grid");
      return run_expect(e_family, e_popt->count() > 0, e_p, e_prior, e_ngrid,
                        e_eps, e_out);
    }
    if (cx->parsed()) {
      if (!x_ngrid.empty()) check_grid(x_ngrid, "--n-grid");
      if (!x_tgrid.empty()) check_grid(x_tgrid, "--t-grid");
      if (!x_xgrid.empty()) check_grid(x_xgrid, "--x-grid");
      return run_expand(x_prop, x_m, x_rho, x_popt->count() > 0, x_p, x_ngrid,
                        x_tgrid, x_xgrid, x_eps, x_out);
    }
    if (cm->parsed()) return run_mc(m_family, m_prior, m_n, m_reps, m_seed,
                                    m_eps, m_out);
    if (cv->parsed()) return run_verify(v_scale, v_out);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
