#include "warped/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "warped/curvature.hpp"
#include "warped/rng.hpp"
#include "warped/scalars.hpp"
#include "warped/tensor.hpp"
#include "warped/version.hpp"

namespace warped {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::vector<std::string> kChecks = {"metric",  "douglas",   "berwald", "landsberg",
                                          "ricci",   "projflat",  "convexity", "oracle"};

const std::vector<std::string> kOracleExpansion = {"oracle-g", "oracle-spray", "oracle-berwald",
                                                   "oracle-douglas", "oracle-landsberg"};

std::vector<std::string> expand_checks(const std::vector<std::string>& requested) {
  std::vector<std::string> out;
  for (const auto& c : requested) {
    if (c == "oracle") {
      for (const auto& o : kOracleExpansion)
        if (std::find(out.begin(), out.end(), o) == out.end()) out.push_back(o);
      continue;
    }
    if (std::find(kChecks.begin(), kChecks.end(), c) == kChecks.end()) {
      std::ostringstream os;
      os << "unknown check \"" << c << "\"; available:";
      for (const auto& k : kChecks) os << " " << k;
      throw DomainError(os.str());
    }
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

struct PointOutcome {
  bool sampled = false;
  bool violation = false;
  bool error = false;
  std::string note;
  EvalPoint pt;
  std::map<std::string, double> values;
};

double sup_diff(const Rank4& a, const Rank4& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) m = std::fmax(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

double sup_diff(const Rank3& a, const Rank3& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) m = std::fmax(m, std::abs(a.v[i] - b.v[i]));
  return m;
}

// Deviation between a closed-form quantity and its oracle: relative to the
// closed-form magnitude when that is large, absolute when it is small. Both
// inputs are already scale-normalized.
double deviation(double diff, double closed_mag) { return diff / std::fmax(1.0, closed_mag); }

void eval_point(const MetricFamily& fam, const CampaignSpec& spec,
                const std::vector<std::string>& checks, int index, PointOutcome& out) {
  Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(index)));
  const int n = spec.n;
  const double r = rng.uniform(spec.ranges.r_lo, spec.ranges.r_hi);
  const double x0 = rng.uniform(spec.ranges.x0_lo, spec.ranges.x0_hi);
  const std::vector<double> xdir = rng.unit_vector(n);
  const double uu = rng.uniform(spec.ranges.ybar_lo, spec.ranges.ybar_hi);
  const std::vector<double> ydir = rng.unit_vector(n);
  const double y0 = rng.uniform(spec.ranges.y0_lo, spec.ranges.y0_hi);

  std::vector<double> xbar(n), ybar(n);
  for (int i = 0; i < n; ++i) {
    xbar[i] = r * xdir[i];
    ybar[i] = uu * ydir[i];
  }
  out.pt = make_point(n, x0, std::move(xbar), y0, std::move(ybar));
  out.sampled = true;
  const EvalPoint& p = out.pt;

  auto wants = [&](const std::string& c) {
    return std::find(checks.begin(), checks.end(), c) != checks.end();
  };

  // Convexity gate first: scalars only, no divisions, violations reported
  // rather than thrown.
  double omega = 0.0, lambda = 0.0, phi0 = 0.0;
  try {
    const JetZR phi2 = fam.phi_jet(p.z, p.r, 2, 0, false);
    phi0 = phi2.d(0, 0);
    const double p1 = phi2.d(1, 0), p2 = phi2.d(2, 0);
    omega = 2.0 * phi0 - p.z * p1;
    lambda = 2.0 * phi0 * p2 - p1 * p1;
  } catch (const WarpedError& e) {
    out.error = true;
    out.note = std::string("evaluation failed: ") + e.what();
    return;
  }
  const double viol = std::fmax(0.0, std::fmax(-omega, -lambda));
  if (wants("convexity")) out.values["convexity"] = viol;
  const auto fam_viol = fam.convexity_violation(p.z, p.r);
  const bool degenerate =
      std::abs(omega) < kDegenerateEps || std::abs(lambda) < kDegenerateEps || !(phi0 > 0.0);
  if (viol > 0.0 || fam_viol || degenerate) {
    out.violation = true;
    std::ostringstream os;
    os << "convexity violated at sample " << index << " (z = " << p.z << ", r = " << p.r
       << "): Omega = " << omega << ", Lambda = " << lambda;
    if (fam_viol) os << "; " << *fam_viol;
    out.note = os.str();
    return;
  }

  try {
    const DerivedScalars S = derived_scalars(fam, p.z, p.r, n, false);

    std::optional<Rank4> douglas, berwald;
    if (wants("douglas") || wants("oracle-douglas")) douglas = douglas_tensor(S, p);
    if (wants("berwald") || wants("oracle-berwald") || wants("oracle-landsberg"))
      berwald = berwald_tensor(S, p);

    if (wants("douglas")) out.values["douglas"] = normalized_sup(*douglas, p);
    if (wants("berwald")) out.values["berwald"] = normalized_sup(*berwald, p);
    if (wants("landsberg")) out.values["landsberg"] = normalized_sup(landsberg_tensor(S, p), p);
    if (wants("ricci")) out.values["ricci"] = ricci_flat_residuals(S).max();
    if (wants("projflat")) {
      ProjFlatConfig pf;
      pf.step_rel = spec.fd.step_x_rel;
      pf.richardson_levels = spec.fd.richardson_levels;
      out.values["projflat"] = projective_flat_residual(fam, p, pf);
    }

    if (wants("metric") || wants("oracle-g") || wants("oracle-spray")) {
      const FundamentalTensor ft = fundamental_tensor(S, p);
      if (wants("metric")) {
        const int m = n + 1;
        double worst = std::abs(ft.det - ft.det_closed) / std::fmax(1.0, std::abs(ft.det_closed));
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            double acc = 0.0;
            for (int k = 0; k < m; ++k) acc += ft.g.at(i, k) * ft.ginv.at(k, j);
            worst = std::fmax(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
          }
        double quad = 0.0;
        std::vector<double> yfull(static_cast<size_t>(m));
        yfull[0] = p.y0;
        for (int i = 0; i < n; ++i) yfull[i + 1] = p.ybar[i];
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) quad += ft.g.at(i, j) * yfull[i] * yfull[j];
        const double f2 = finsler_norm_squared(S, p);
        worst = std::fmax(worst, std::abs(quad - f2) / std::fmax(1.0, std::abs(f2)));
        out.values["metric"] = worst;
      }
      if (wants("oracle-g")) {
        const SquareMatrix gfd = hessian_fd(fam, p, spec.fd);
        double diff = 0.0, mag = 0.0;
        for (size_t i = 0; i < gfd.a.size(); ++i) {
          diff = std::fmax(diff, std::abs(gfd.a[i] - ft.g.a[i]));
          mag = std::fmax(mag, std::abs(ft.g.a[i]));
        }
        out.values["oracle-g"] = deviation(diff, mag);
      }
      if (wants("oracle-spray")) {
        const std::vector<double> Gc = spray(S, p);
        const std::vector<double> Gf = spray_fd(fam, p, spec.fd);
        double diff = 0.0, mag = 0.0;
        for (size_t i = 0; i < Gc.size(); ++i) {
          diff = std::fmax(diff, std::abs(Gc[i] - Gf[i]));
          mag = std::fmax(mag, std::abs(Gc[i]));
        }
        const double u2 = p.u * p.u;
        out.values["oracle-spray"] = deviation(diff / u2, mag / u2);
      }
    }
    if (wants("oracle-berwald")) {
      const Rank4 bfd = berwald_fd(fam, p, spec.fd);
      out.values["oracle-berwald"] =
          deviation(sup_diff(*berwald, bfd) * p.u, normalized_sup(*berwald, p));
    }
    if (wants("oracle-douglas")) {
      const Rank4 dfd = douglas_fd(fam, p, spec.fd);
      out.values["oracle-douglas"] =
          deviation(sup_diff(*douglas, dfd) * p.u, normalized_sup(*douglas, p));
    }
    if (wants("oracle-landsberg")) {
      const Rank3 lc = landsberg_tensor(S, p);
      const Rank3 lb = landsberg_from_berwald(S, p, *berwald);
      out.values["oracle-landsberg"] = deviation(sup_diff(lc, lb), lc.sup_abs());
    }
  } catch (const WarpedError& e) {
    out.error = true;
    out.note = std::string("evaluation failed: ") + e.what();
  }
}

ordered_json point_json(const EvalPoint& p) {
  ordered_json j;
  j["x0"] = p.x0;
  j["xbar"] = p.xbar;
  j["y0"] = p.y0;
  j["ybar"] = p.ybar;
  j["z"] = p.z;
  j["r"] = p.r;
  j["u"] = p.u;
  j["s"] = p.s;
  return j;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& known_checks() { return kChecks; }

double default_tolerance(const std::string& c) {
  if (c == "metric") return 1e-10;
  if (c == "douglas") return 1e-9;
  if (c == "berwald") return 1e-7;
  if (c == "landsberg") return 1e-7;
  if (c == "ricci") return 1e-9;
  if (c == "projflat") return 1e-7;
  if (c == "convexity") return 0.0;
  if (c == "oracle-g") return 1e-6;
  if (c == "oracle-spray") return 1e-5;
  if (c == "oracle-berwald") return 1e-5;
  if (c == "oracle-douglas") return 1e-5;
  if (c == "oracle-landsberg") return 1e-9;
  throw DomainError("default_tolerance: unknown check \"" + c + "\"");
}

CampaignReport run_campaign(const MetricFamily& fam, const CampaignSpec& spec_in) {
  const auto t_start = std::chrono::steady_clock::now();

  CampaignSpec spec = spec_in;
  if (spec.n < 2) throw DomainError("run_campaign: n must be at least 2");
  if (spec.samples < 1) throw DomainError("run_campaign: samples must be positive");
  if (spec.checks.empty())
    spec.checks = {"metric", "douglas", "berwald", "landsberg", "convexity"};
  if (!(spec.ranges.r_lo < spec.ranges.r_hi)) {
    spec.ranges.r_lo = fam.r_min() + 0.05 * (fam.rho() - fam.r_min());
    spec.ranges.r_hi = 0.92 * fam.rho();
  }
  const std::vector<std::string> checks = expand_checks(spec.checks);

  std::vector<PointOutcome> outcomes(static_cast<size_t>(spec.samples));
  {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    int nthreads = spec.threads > 0 ? spec.threads : static_cast<int>(std::min(hw, 8u));
    nthreads = std::min(nthreads, spec.samples);
    std::atomic<int> next{0};
    auto worker = [&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= spec.samples) return;
        eval_point(fam, spec, checks, i, outcomes[static_cast<size_t>(i)]);
      }
    };
    if (nthreads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<size_t>(nthreads));
      for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
  }

  CampaignReport rep;
  rep.tool_version = kToolVersion;
  rep.family = fam.description();
  rep.family_name = fam.name();
  rep.spec = spec;

  // Aggregate in index order so the report never depends on scheduling.
  for (const auto& name : checks) {
    CheckResult res;
    res.name = name;
    res.tolerance = spec.tolerances.count(name) ? spec.tolerances.at(name)
                                                : default_tolerance(name);
    bool any = false;
    for (int i = 0; i < spec.samples; ++i) {
      const auto& oc = outcomes[static_cast<size_t>(i)];
      const auto it = oc.values.find(name);
      if (it == oc.values.end()) continue;
      if (!any || it->second > res.value) {
        res.value = it->second;
        res.worst = oc.pt;
        res.has_worst = true;
      }
      any = true;
    }
    res.pass = any ? res.value <= res.tolerance : false;
    if (name == "convexity") {
      // Violations where the scalar magnitude is zero (family bound,
      // degeneracy) must still fail the check.
      int viols = 0;
      for (const auto& oc : outcomes) viols += oc.violation ? 1 : 0;
      res.pass = any && viols == 0;
    }
    rep.checks.push_back(std::move(res));
  }

  for (int i = 0; i < spec.samples; ++i) {
    const auto& oc = outcomes[static_cast<size_t>(i)];
    rep.convexity_violations += oc.violation ? 1 : 0;
    rep.evaluation_errors += oc.error ? 1 : 0;
    if (!oc.note.empty() && rep.notes.size() < 8) rep.notes.push_back(oc.note);
    for (const auto& name : checks) {
      const auto it = oc.values.find(name);
      if (it == oc.values.end()) continue;
      rep.rows.push_back(PerPointRow{i, name, it->second, oc.pt});
    }
  }

  rep.pass = rep.evaluation_errors == 0;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;

  rep.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t_start)
                       .count();
  return rep;
}

std::string CampaignReport::to_json(bool include_timing) const {
  ordered_json j;
  j["tool_version"] = tool_version;
  j["family"] = family;
  j["family_name"] = family_name;
  j["seed"] = spec.seed;
  {
    ordered_json s;
    s["n"] = spec.n;
    s["samples"] = spec.samples;
    s["seed"] = spec.seed;
    ordered_json ranges;
    ranges["r"] = {spec.ranges.r_lo, spec.ranges.r_hi};
    ranges["y0"] = {spec.ranges.y0_lo, spec.ranges.y0_hi};
    ranges["ybar"] = {spec.ranges.ybar_lo, spec.ranges.ybar_hi};
    ranges["x0"] = {spec.ranges.x0_lo, spec.ranges.x0_hi};
    s["ranges"] = ranges;
    s["checks"] = spec.checks;
    ordered_json tol;
    for (const auto& c : checks) tol[c.name] = c.tolerance;
    s["tolerances"] = tol;
    ordered_json fd;
    fd["step_y_rel"] = spec.fd.step_y_rel;
    fd["step_x_rel"] = spec.fd.step_x_rel;
    fd["step_y3_rel"] = spec.fd.step_y3_rel;
    fd["richardson_levels"] = spec.fd.richardson_levels;
    s["fd"] = fd;
    j["spec"] = s;
  }
  j["checks"] = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json cj;
    cj["name"] = c.name;
    cj["sup_norm"] = c.value;
    cj["tolerance"] = c.tolerance;
    cj["pass"] = c.pass;
    if (c.has_worst) cj["worst_point"] = point_json(c.worst);
    j["checks"].push_back(cj);
  }
  j["convexity_violations"] = convexity_violations;
  j["evaluation_errors"] = evaluation_errors;
  j["notes"] = notes;
  j["pass"] = pass;
  if (include_timing) j["runtime_ms"] = runtime_ms;
  return j.dump(2) + "\n";
}

std::string CampaignReport::per_point_csv() const {
  std::ostringstream os;
  os << "sample,check,value,x0,y0,z,r,u,s";
  const int n = spec.n;
  for (int i = 0; i < n; ++i) os << ",xbar" << i;
  for (int i = 0; i < n; ++i) os << ",ybar" << i;
  os << "\n";
  for (const auto& row : rows) {
    os << row.sample << "," << row.check << "," << format_double(row.value) << ","
       << format_double(row.point.x0) << "," << format_double(row.point.y0) << ","
       << format_double(row.point.z) << "," << format_double(row.point.r) << ","
       << format_double(row.point.u) << "," << format_double(row.point.s);
    for (int i = 0; i < n; ++i) os << "," << format_double(row.point.xbar[i]);
    for (int i = 0; i < n; ++i) os << "," << format_double(row.point.ybar[i]);
    os << "\n";
  }
  return os.str();
}

std::string CampaignReport::summary_csv() const {
  std::ostringstream os;
  os << "check,sup_norm,tolerance,pass\n";
  for (const auto& c : checks)
    os << c.name << "," << format_double(c.value) << "," << format_double(c.tolerance) << ","
       << (c.pass ? 1 : 0) << "\n";
  return os.str();
}

}  // namespace warped
