// Command-line front end: verification campaigns, convexity scans, and
// single-point curvature queries over warped product metrics
//   F = |ybar| sqrt(phi(z, r)),  z = y0/|ybar|,  r = |xbar|.
//
// Exit codes: 0 all requested checks pass, 1 a check failed, 2 usage or
// domain error (also convexity violations under --strict).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "warped/campaign.hpp"
#include "warped/curvature.hpp"
#include "warped/errors.hpp"
#include "warped/expr.hpp"
#include "warped/families.hpp"
#include "warped/fd_oracle.hpp"
#include "warped/point.hpp"
#include "warped/rng.hpp"
#include "warped/scalars.hpp"
#include "warped/tensor.hpp"
#include "warped/version.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;
using namespace warped;

struct FamilyOptions {
  std::string preset;
  std::string family;
  std::string h, G, f, g, kernel, p1, q1, p2, q2;
  double b = 0.0;
  double c = 1.0;
  double rho = 1.0;
  double r_min = -1.0;  // negative: keep the family default
};

void add_family_flags(CLI::App* cmd, FamilyOptions& fo) {
  // Family flags follow the math names, so "--h" must not collide with the
  // short help flag; help stays reachable as --help on these subcommands.
  cmd->set_help_flag("--help", "Print this help message and exit");
  cmd->add_option("--preset", fo.preset, "Named preset family")
      ->check(CLI::IsMember(MetricFamily::preset_names()));
  cmd->add_option("--family", fo.family, "Family kind")
      ->check(CLI::IsMember({"flat", "g-family", "randers", "kernel", "custom"}));
  cmd->add_option("--h,--warp", fo.h, "Warp function h(r) (g-family, kernel)");
  cmd->add_option("--G", fo.G, "Profile G(t) (flat, g-family)");
  cmd->add_option("--f", fo.f, "Randers f(r)");
  cmd->add_option("--g", fo.g, "Randers g(r)");
  cmd->add_option("--b", fo.b, "Randers drift constant b");
  cmd->add_option("--kernel", fo.kernel, "Kernel k(t) defining G_c(t) = c + int_0^t (t-tau) k(tau) dtau");
  cmd->add_option("--c", fo.c, "Kernel family offset c = G_c(0)");
  cmd->add_option("--p1", fo.p1, "Custom phi = P1(z) Q1(r) + P2(z) Q2(r)");
  cmd->add_option("--q1", fo.q1, "Custom Q1(r)");
  cmd->add_option("--p2", fo.p2, "Custom P2(z)");
  cmd->add_option("--q2", fo.q2, "Custom Q2(r)");
  cmd->add_option("--rho", fo.rho, "Ball radius rho (domain r < rho)")->check(CLI::PositiveNumber);
  cmd->add_option("--r-min", fo.r_min, "Inner radius guard (default 0.05 rho)");
}

FuncPtr need(const std::string& text, const char* flag) {
  if (text.empty()) throw DomainError(std::string("missing required expression flag ") + flag);
  return parse_expression(text);
}

MetricFamily build_family(const FamilyOptions& fo) {
  if (!fo.preset.empty() && !fo.family.empty())
    throw DomainError("--preset and --family are mutually exclusive");
  MetricFamily fam = [&] {
    if (!fo.preset.empty()) return MetricFamily::preset(fo.preset, fo.rho);
    if (fo.family == "flat") return MetricFamily::flat(need(fo.G, "--G"), fo.rho);
    if (fo.family == "g-family")
      return MetricFamily::g_family(need(fo.h, "--warp"), need(fo.G, "--G"), fo.rho);
    if (fo.family == "randers")
      return MetricFamily::randers(need(fo.f, "--f"), need(fo.g, "--g"), fo.b, fo.rho);
    if (fo.family == "kernel")
      return MetricFamily::kernel_family(need(fo.kernel, "--kernel"), fo.c, need(fo.h, "--warp"),
                                         fo.rho);
    if (fo.family == "custom") {
      FuncPtr p2 = fo.p2.empty() ? constant_function(0.0) : parse_expression(fo.p2);
      FuncPtr q2 = fo.q2.empty() ? constant_function(0.0) : parse_expression(fo.q2);
      return MetricFamily::custom("custom", need(fo.p1, "--p1"), need(fo.q1, "--q1"), p2, q2,
                                  fo.rho);
    }
    throw DomainError("select a family with --preset or --family");
  }();
  if (fo.r_min >= 0.0) fam.set_r_min(fo.r_min);
  return fam;
}

struct CampaignFlags {
  FamilyOptions fam;
  CampaignSpec spec;
  std::vector<double> r_range, y0_range, ybar_range, x0_range;
  std::vector<std::string> checks;
  std::string out, per_point, format = "json";
};

void add_campaign_flags(CLI::App* cmd, CampaignFlags& cf) {
  add_family_flags(cmd, cf.fam);
  cmd->add_option("--n", cf.spec.n, "Fiber dimension n (total dimension n+1)")
      ->check(CLI::Range(2, 16));
  cmd->add_option("--samples", cf.spec.samples, "Sample count")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", cf.spec.seed, "RNG seed");
  cmd->add_option("--r-range", cf.r_range, "Sampled r interval")->expected(2);
  cmd->add_option("--y0-range", cf.y0_range, "Sampled y0 interval")->expected(2);
  cmd->add_option("--ybar-range", cf.ybar_range, "Sampled |ybar| interval")->expected(2);
  cmd->add_option("--x0-range", cf.x0_range, "Sampled x0 interval")->expected(2);
  cmd->add_option("--checks", cf.checks, "Checks to run")->delimiter(',');
  for (const auto& name : known_checks()) {
    if (name == "oracle") continue;
    cmd->add_option_function<double>(
        "--tol-" + name, [&cf, name](double v) { cf.spec.tolerances[name] = v; },
        "Tolerance override for " + name);
  }
  for (const char* name : {"oracle-g", "oracle-spray", "oracle-berwald", "oracle-douglas",
                           "oracle-landsberg"}) {
    std::string s = name;
    cmd->add_option_function<double>(
        "--tol-" + s, [&cf, s](double v) { cf.spec.tolerances[s] = v; },
        "Tolerance override for " + s);
  }
  cmd->add_option("--threads", cf.spec.threads, "Worker threads (0: hardware)");
  cmd->add_flag("--strict", cf.spec.strict, "Convexity violations become domain errors");
  cmd->add_option("--out", cf.out, "Write the report to this path instead of stdout");
  cmd->add_option("--per-point", cf.per_point, "Write per-point CSV to this path");
  cmd->add_option("--format", cf.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--fd-step-y", cf.spec.fd.step_y_rel, "Relative FD step in y (2nd order)");
  cmd->add_option("--fd-step-x", cf.spec.fd.step_x_rel, "Relative FD step in x");
  cmd->add_option("--fd-step-y3", cf.spec.fd.step_y3_rel, "Relative FD step in y (3rd order)");
  cmd->add_option("--fd-levels", cf.spec.fd.richardson_levels, "Richardson extrapolation levels")
      ->check(CLI::Range(0, 6));
}

int run_verify(CampaignFlags& cf) {
  if (cf.r_range.size() == 2) {
    cf.spec.ranges.r_lo = cf.r_range[0];
    cf.spec.ranges.r_hi = cf.r_range[1];
  }
  if (cf.y0_range.size() == 2) {
    cf.spec.ranges.y0_lo = cf.y0_range[0];
    cf.spec.ranges.y0_hi = cf.y0_range[1];
  }
  if (cf.ybar_range.size() == 2) {
    cf.spec.ranges.ybar_lo = cf.ybar_range[0];
    cf.spec.ranges.ybar_hi = cf.ybar_range[1];
  }
  if (cf.x0_range.size() == 2) {
    cf.spec.ranges.x0_lo = cf.x0_range[0];
    cf.spec.ranges.x0_hi = cf.x0_range[1];
  }
  cf.spec.checks = cf.checks;
  const MetricFamily fam = build_family(cf.fam);
  const CampaignReport rep = run_campaign(fam, cf.spec);

  const std::string text = cf.format == "csv" ? rep.summary_csv() : rep.to_json(true);
  if (cf.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(cf.out);
    if (!os) throw DomainError("cannot open output path " + cf.out);
    os << text;
  }
  if (!cf.per_point.empty()) {
    std::ofstream os(cf.per_point);
    if (!os) throw DomainError("cannot open per-point path " + cf.per_point);
    os << rep.per_point_csv();
  }
  if (cf.spec.strict && rep.convexity_violations > 0) {
    std::cerr << "strict: " << rep.convexity_violations << " convexity violation(s)\n";
    return 2;
  }
  return rep.pass ? 0 : 1;
}

ordered_json matrix_json(const SquareMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.dim; ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.dim; ++j) row.push_back(m.at(i, j));
    rows.push_back(row);
  }
  return rows;
}

ordered_json rank4_json(const Rank4& t) {
  const int m = t.n + 1;
  ordered_json ja = ordered_json::array();
  for (int a = 0; a < m; ++a) {
    ordered_json jb = ordered_json::array();
    for (int b = 0; b < m; ++b) {
      ordered_json jc = ordered_json::array();
      for (int c = 0; c < m; ++c) {
        ordered_json jd = ordered_json::array();
        for (int d = 0; d < m; ++d) jd.push_back(t.at(a, b, c, d));
        jc.push_back(jd);
      }
      jb.push_back(jc);
    }
    ja.push_back(jb);
  }
  return ja;
}

ordered_json rank3_json(const Rank3& t) {
  const int m = t.n + 1;
  ordered_json ja = ordered_json::array();
  for (int a = 0; a < m; ++a) {
    ordered_json jb = ordered_json::array();
    for (int b = 0; b < m; ++b) {
      ordered_json jc = ordered_json::array();
      for (int c = 0; c < m; ++c) jc.push_back(t.at(a, b, c));
      jb.push_back(jc);
    }
    ja.push_back(jb);
  }
  return ja;
}

struct PointFlags {
  FamilyOptions fam;
  double x0 = 0.0, y0 = 1.0;
  std::vector<double> xbar, ybar;
};

int run_point(PointFlags& pf) {
  const MetricFamily fam = build_family(pf.fam);
  if (pf.xbar.size() != pf.ybar.size())
    throw InvalidPointError("xbar and ybar must have the same dimension");
  const int n = static_cast<int>(pf.xbar.size());
  const EvalPoint p = make_point(n, pf.x0, pf.xbar, pf.y0, pf.ybar);
  fam.check_r(p.r);

  const DerivedScalars S = derived_scalars(fam, p.z, p.r, n);
  const FundamentalTensor ft = fundamental_tensor(S, p);
  const std::vector<double> G = spray(S, p);
  const std::vector<double> Ghat = spray_trace_corrected(S, p);
  const Rank4 D = douglas_tensor(S, p);
  const Rank4 B = berwald_tensor(S, p);
  const Rank3 L = landsberg_tensor(S, p);
  const OdeResiduals ode = douglas_ode_residuals(S);
  const RicciResiduals ricci = ricci_flat_residuals(S);

  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["family"] = fam.description();
  {
    ordered_json pj;
    pj["x0"] = p.x0;
    pj["xbar"] = p.xbar;
    pj["y0"] = p.y0;
    pj["ybar"] = p.ybar;
    pj["z"] = p.z;
    pj["r"] = p.r;
    pj["u"] = p.u;
    pj["s"] = p.s;
    j["point"] = pj;
  }
  {
    ordered_json sj;
    sj["phi"] = S.phi.value();
    sj["omega"] = S.Omega.value();
    sj["lambda"] = S.Lambda.value();
    sj["U"] = S.U.value();
    sj["V"] = S.V.value();
    sj["W"] = S.W.value();
    sj["E"] = S.E.value();
    sj["H"] = S.H.value();
    sj["R"] = S.R.value();
    sj["T"] = S.T.value();
    j["scalars"] = sj;
  }
  j["F2"] = finsler_norm_squared(S, p);
  j["g"] = matrix_json(ft.g);
  j["ginv"] = matrix_json(ft.ginv);
  j["det"] = ft.det;
  j["det_closed"] = ft.det_closed;
  j["spray"] = G;
  j["spray_trace_corrected"] = Ghat;
  j["spray_divergence"] = spray_divergence(S, p);
  j["douglas"] = rank4_json(D);
  j["berwald"] = rank4_json(B);
  j["landsberg"] = rank3_json(L);
  {
    ordered_json nj;
    nj["douglas"] = normalized_sup(D, p);
    nj["berwald"] = normalized_sup(B, p);
    nj["landsberg"] = normalized_sup(L, p);
    j["norms"] = nj;
  }
  {
    ordered_json oj;
    oj["eqR"] = ode.first;
    oj["eqT"] = ode.second;
    oj["eqW"] = ode.third;
    j["ode_residuals"] = oj;
  }
  {
    ordered_json rj;
    rj["P"] = ricci.P;
    rj["Q"] = ricci.Q;
    j["ricci_residuals"] = rj;
  }
  j["projflat_residual"] = projective_flat_residual(fam, p, ProjFlatConfig{});
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct ScanFlags {
  FamilyOptions fam;
  ConvexityGrid grid;
  std::vector<double> z_range, r_range;
};

int run_scan(ScanFlags& sf) {
  const MetricFamily fam = build_family(sf.fam);
  if (sf.z_range.size() == 2) {
    sf.grid.z_lo = sf.z_range[0];
    sf.grid.z_hi = sf.z_range[1];
  }
  if (sf.r_range.size() == 2) {
    sf.grid.r_lo = sf.r_range[0];
    sf.grid.r_hi = sf.r_range[1];
  }
  const ConvexityReport rep = convexity_check(fam, sf.grid);

  ordered_json j;
  j["tool_version"] = kToolVersion;
  j["family"] = fam.description();
  j["ok"] = rep.ok;
  j["min_omega"] = rep.min_omega;
  j["min_lambda"] = rep.min_lambda;
  {
    ordered_json a;
    a["z"] = rep.argmin_omega_z;
    a["r"] = rep.argmin_omega_r;
    j["argmin_omega"] = a;
  }
  {
    ordered_json a;
    a["z"] = rep.argmin_lambda_z;
    a["r"] = rep.argmin_lambda_r;
    j["argmin_lambda"] = a;
  }
  j["failure_count"] = rep.failure_count;
  if (rep.has_failure) {
    ordered_json f;
    f["z"] = rep.first_fail_z;
    f["r"] = rep.first_fail_r;
    j["first_failure"] = f;
  }
  j["eigen_spots"] = rep.eigen_spots;
  j["eigen_consistent"] = rep.eigen_consistent;
  std::cout << j.dump(2) << "\n";
  return rep.ok && rep.eigen_consistent ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification harness for warped product Finsler metrics "
               "F = |ybar| sqrt(phi(y0/|ybar|, |xbar|))"};
  app.set_version_flag("--version", std::string(warped::kToolVersion));
  app.require_subcommand(1);

  CampaignFlags verify_flags;
  CLI::App* verify = app.add_subcommand("verify", "Run a sampled verification campaign");
  add_campaign_flags(verify, verify_flags);

  CampaignFlags oracle_flags;
  oracle_flags.spec.samples = 20;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Compare closed forms against finite differences (verify --checks oracle)");
  add_campaign_flags(oracle, oracle_flags);

  PointFlags point_flags;
  CLI::App* point = app.add_subcommand("point", "Full tensor dump at one explicit point");
  add_family_flags(point, point_flags.fam);
  point->add_option("--x0", point_flags.x0, "Base x0 coordinate");
  point->add_option("--xbar", point_flags.xbar, "Base xbar coordinates")
      ->delimiter(',')
      ->required();
  point->add_option("--y0", point_flags.y0, "Fiber y0 coordinate");
  point->add_option("--ybar", point_flags.ybar, "Fiber ybar coordinates")
      ->delimiter(',')
      ->required();

  ScanFlags scan_flags;
  CLI::App* scan = app.add_subcommand("scan-convexity", "Grid scan of Omega and Lambda");
  add_family_flags(scan, scan_flags.fam);
  scan->add_option("--z-range", scan_flags.z_range, "Scanned z interval")->expected(2);
  scan->add_option("--r-range", scan_flags.r_range, "Scanned r interval")->expected(2);
  scan->add_option("--nz", scan_flags.grid.nz, "Grid nodes in z")->check(CLI::PositiveNumber);
  scan->add_option("--nr", scan_flags.grid.nr, "Grid nodes in r")->check(CLI::PositiveNumber);
  scan->add_option("--n", scan_flags.grid.n, "Fiber dimension for eigenvalue spot checks")
      ->check(CLI::Range(2, 16));
  scan->add_option("--seed", scan_flags.grid.seed, "Spot-check seed");
  scan->add_option("--eigen-spots", scan_flags.grid.eigen_spots,
                   "Nodes where the assembled tensor is diagonalized");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) return run_verify(verify_flags);
    if (oracle->parsed()) {
      if (oracle_flags.checks.empty()) oracle_flags.checks = {"oracle"};
      return run_verify(oracle_flags);
    }
    if (point->parsed()) return run_point(point_flags);
    if (scan->parsed()) return run_scan(scan_flags);
  } catch (const warped::WarpedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
