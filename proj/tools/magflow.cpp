// magflow: command-line front end.
//
// Exit codes: 0 success (or verdict holds), 2 verdict fails, 1 usage or numeric error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "magflow/contact_bounds.hpp"
#include "magflow/cz_index.hpp"
#include "magflow/flow.hpp"
#include "magflow/hopf_cover.hpp"
#include "magflow/profile.hpp"
#include "magflow/profile_io.hpp"
#include "magflow/reduced_dynamics.hpp"

using namespace magflow;

namespace {

constexpr int kOk = 0, kError = 1, kVerdictFailed = 2;

struct Common {
  unsigned jobs = 1;
  int precision = 17;
};

std::string fmt(double v, int prec = 17) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

json num(double v) { return std::isfinite(v) ? json(v) : json(fmt(v)); }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::vector<double> parse_list(const std::string& s) { return detail::parse_numbers(s); }

json bounds_json(const ContactBoundsReport& r) {
  json iv = json::array();
  for (const auto& i : r.certified_intervals) iv.push_back({num(i.lo), num(i.hi)});
  json j{{"m_gamma", r.m_gamma},
         {"argmax_t", r.argmax_t},
         {"m_minus", r.m_minus ? json(*r.m_minus) : json(nullptr)},
         {"m_plus", r.m_plus ? json(*r.m_plus) : json(nullptr)},
         {"certified_intervals", iv},
         {"min_K", r.min_K},
         {"km_positive_threshold", num(r.km_positive_threshold)}};
  return j;
}

std::string scan_csv(const ActionScan& scan, int prec) {
  std::ostringstream os;
  os << "I,t_minus,t_plus,s_half,action\n";
  for (const auto& r : scan.rows)
    os << fmt(r.I, prec) << ',' << fmt(r.t_minus, prec) << ',' << fmt(r.t_plus, prec) << ',' << fmt(r.s_half, prec) << ','
       << fmt(r.action, prec) << '\n';
  return os.str();
}

json latitude_json(const LatitudeOrbit& l) {
  return {{"t0", l.t0}, {"sign", l.sign}, {"m", l.m_t0}, {"action", l.action}, {"I", l.I_value}, {"degenerate", l.degenerate}};
}

json verdict_json(const ContactVerdict& v) {
  json j{{"verdict", to_string(v.kind)}, {"min_action", num(v.min_action)}, {"reason", v.reason}};
  if (v.latitude) j["latitude"] = latitude_json(*v.latitude);
  if (v.level)
    j["level"] = {{"I", v.level->I}, {"t_minus", v.level->t_minus}, {"t_plus", v.level->t_plus}, {"action", v.level->action}};
  json lats = json::array();
  for (const auto& l : v.latitudes) lats.push_back(latitude_json(l));
  j["latitudes"] = lats;
  return j;
}

json cz_json(const LatitudeCZ& c) {
  return {{"interval", {c.cz.interval.lo, c.cz.interval.hi}},
          {"index", c.cz.index},
          {"degenerate", c.cz.degenerate},
          {"covers", c.covers},
          {"contractible", c.contractible},
          {"reeb_period", c.reeb_period},
          {"t0", c.latitude.t0},
          {"max_det_defect", c.max_det_defect}};
}

std::vector<Quaternion> read_knot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open knot file " + path);
  json j;
  in >> j;
  std::vector<Quaternion> pts;
  for (const auto& q : j) {
    const auto a = q.get<std::vector<double>>();
    if (a.size() != 4) throw domain_error("knot points must be 4-vectors");
    pts.push_back({a[0], a[1], a[2], a[3]});
  }
  return pts;
}

/// Rows of a CSV with a header; returns header names and numeric rows.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot open " + path);
  std::string line;
  std::vector<std::string> head;
  std::vector<std::vector<double>> rows;
  if (!std::getline(in, line)) throw domain_error(path + " is empty");
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) head.push_back(c);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(detail::parse_numbers(line));
    if (rows.back().size() != head.size()) throw domain_error("ragged row in " + path);
  }
  return {head, rows};
}

int column(const std::vector<std::string>& head, const std::string& name) {
  for (std::size_t i = 0; i < head.size(); ++i)
    if (head[i] == name) return int(i);
  return -1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symplectic magnetic flows on surfaces of revolution"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--jobs", common.jobs, "worker threads (MAGFLOW_JOBS overrides)")->check(CLI::PositiveNumber);
  app.add_option("--precision", common.precision, "significant digits in CSV output")->check(CLI::Range(6, 17));

  int rc = kOk;
  auto jobs = [&] { return resolve_jobs(common.jobs); };

  // ---- profile ----
  auto* profile = app.add_subcommand("profile", "build and check profile functions");
  profile->require_subcommand(1);
  std::string prof_src, prof_out;
  std::size_t prof_samples = 0;
  double prof_tol = 1e-8;
  auto* pmake = profile->add_subcommand("make", "write a profile file from a builtin name or file");
  pmake->add_option("profile", prof_src, "builtin name or profile file")->required();
  pmake->add_option("--out", prof_out, "output JSON (default stdout)");
  pmake->add_option("--samples", prof_samples, "write the samples form with this many intervals");
  pmake->callback([&] {
    const auto recipe = profile_recipe(prof_src);
    const auto p = profile_from_json(recipe);
    write_json(prof_out, prof_samples > 0 ? profile_samples_json(p, prof_samples) : recipe);
    std::cerr << "kind " << to_string(p.kind()) << ", ell " << fmt(p.ell(), 10) << ", area " << fmt(area(p), 12) << "\n";
  });
  auto* pcheck = profile->add_subcommand("check", "validate a profile");
  pcheck->add_option("profile", prof_src)->required();
  pcheck->add_option("--tol", prof_tol);
  pcheck->add_option("--out", prof_out);
  pcheck->callback([&] {
    const auto p = load_profile(prof_src);
    const auto rep = validate(p, prof_tol);
    json j = profile_summary_json(p);
    j["validation"] = validation_json(rep);
    write_json(prof_out, j);
    std::cerr << (rep.passed() ? "profile valid" : "profile INVALID") << "\n";
    if (!rep.passed()) rc = kVerdictFailed;
  });

  // ---- contact ----
  auto* contact = app.add_subcommand("contact", "contact bounds");
  contact->require_subcommand(1);
  std::string cb_src, cb_out;
  auto* cbounds = contact->add_subcommand("bounds", "m_gamma and the certified contact interval");
  cbounds->add_option("profile", cb_src)->required();
  cbounds->add_option("--out", cb_out);
  cbounds->callback([&] {
    const auto p = load_profile(cb_src);
    const auto r = contact_interval(p);
    write_json(cb_out, bounds_json(r));
    std::cerr << "m_gamma = " << fmt(r.m_gamma, 10) << " at t = " << fmt(r.argmax_t, 8);
    if (r.m_minus) std::cerr << "; certified for m < " << fmt(*r.m_minus, 8) << " and m > " << fmt(*r.m_plus, 8) << "\n";
    else std::cerr << "; certified for all m > 0\n";
    std::cerr << "min K = " << fmt(r.min_K, 8) << ", K_m > 0 for m < " << fmt(r.km_positive_threshold, 8) << "\n";
  });

  // ---- action ----
  auto* action = app.add_subcommand("action", "reduced dynamics");
  action->require_subcommand(1);
  std::string as_src, as_out, as_verdict_out;
  double as_m = 1.0;
  std::size_t as_levels = 100;
  auto* ascan = action->add_subcommand("scan", "action of the invariant measures on every energy level of the reduced system");
  ascan->add_option("profile", as_src)->required();
  ascan->add_option("--m", as_m)->required();
  ascan->add_option("--levels", as_levels)->check(CLI::PositiveNumber);
  ascan->add_option("--out", as_out, "CSV output (default stdout)");
  ascan->add_option("--verdict-out", as_verdict_out, "write the contact verdict as JSON");
  ascan->callback([&] {
    const auto p = load_profile(as_src);
    const auto v = contact_verdict(p, as_m, as_levels, jobs());
    if (km_positive(p, as_m) && as_m > 0) write_text(as_out, scan_csv(action_scan(p, as_m, as_levels, jobs()), common.precision));
    if (!as_verdict_out.empty()) write_json(as_verdict_out, verdict_json(v));
    std::cerr << "verdict " << to_string(v.kind) << ", min action " << fmt(v.min_action, 10) << (v.reason.empty() ? "" : ": " + v.reason)
              << "\n";
  });

  // ---- flow ----
  auto* flow = app.add_subcommand("flow", "direct integration");
  flow->require_subcommand(1);
  std::string fl_src, fl_out;
  double fl_m = 1.0, fl_t0 = 1.0, fl_phi0 = 0.0, fl_theta0 = 0.0, fl_T = 10.0, fl_dt = 0.0, fl_rtol = 1e-12, fl_atol = 1e-13;
  auto* ftrace = flow->add_subcommand("trace", "integrate X^m and write s, t, phi, theta, I_hat");
  ftrace->add_option("profile", fl_src)->required();
  ftrace->add_option("--m", fl_m)->required();
  ftrace->add_option("--t0", fl_t0)->required();
  ftrace->add_option("--phi0", fl_phi0);
  ftrace->add_option("--theta0", fl_theta0);
  ftrace->add_option("--T", fl_T)->required();
  ftrace->add_option("--dt", fl_dt, "sample spacing (default: every accepted step)");
  ftrace->add_option("--rtol", fl_rtol);
  ftrace->add_option("--atol", fl_atol);
  ftrace->add_option("--out", fl_out);
  ftrace->callback([&] {
    const auto p = load_profile(fl_src);
    const auto tr = integrate(p, fl_m, {fl_t0, fl_phi0, fl_theta0}, fl_T, {fl_rtol, fl_atol, fl_dt});
    std::ostringstream os;
    os << "s,t,phi,theta,I_hat\n";
    const int pr = common.precision;
    for (std::size_t k = 0; k < tr.s.size(); ++k) {
      const auto& x = tr.x[k];
      os << fmt(tr.s[k], pr) << ',' << fmt(x[0], pr) << ',' << fmt(x[1], pr) << ',' << fmt(x[2], pr) << ','
         << fmt(I_hat(p, fl_m, x[0], x[1]), pr) << '\n';
    }
    write_text(fl_out, os.str());
    std::cerr << tr.s.size() << " samples, " << tr.steps << " steps, I drift " << fmt(tr.I_drift, 3) << "\n";
  });

  // ---- cz ----
  auto* cz = app.add_subcommand("cz", "Conley-Zehnder indices");
  cz->require_subcommand(1);
  std::string cz_src, cz_out;
  double cz_m = 0.1;
  int cz_covers = 2;
  auto* czlat = cz->add_subcommand("latitude", "indices of the latitudes (the fiber when m = 0)");
  czlat->add_option("profile", cz_src)->required();
  czlat->add_option("--m", cz_m)->required()->check(CLI::NonNegativeNumber);
  czlat->add_option("--covers", cz_covers)->check(CLI::PositiveNumber);
  czlat->add_option("--out", cz_out);
  czlat->callback([&] {
    const auto p = load_profile(cz_src);
    json arr = json::array();
    if (cz_m == 0.0) {
      auto j = cz_json(fiber_cz(p, cz_covers));
      j["orbit"] = "fiber";
      arr.push_back(j);
    } else {
      for (const auto& lat : latitudes(p, cz_m)) {
        if (lat.degenerate) continue;
        auto j = cz_json(latitude_cz(p, cz_m, lat, cz_covers));
        j["orbit"] = "latitude";
        arr.push_back(j);
      }
    }
    write_json(cz_out, arr.size() == 1 ? arr[0] : arr);
    for (const auto& j : arr)
      std::cerr << j["orbit"].get<std::string>() << ": interval [" << fmt(j["interval"][0].get<double>(), 8) << ", "
                << fmt(j["interval"][1].get<double>(), 8) << "], index " << j["index"].get<int>()
                << (j["degenerate"].get<bool>() ? " (degenerate)" : "") << (j["contractible"].get<bool>() ? "" : " [noncontractible]")
                << "\n";
  });
  auto* czrep = cz->add_subcommand("report", "dynamical-convexity evidence: 2 pi / T0 against 1 - sup |B - J|");
  czrep->add_option("profile", cz_src)->required();
  czrep->add_option("--m", cz_m)->required()->check(CLI::NonNegativeNumber);
  czrep->add_option("--out", cz_out);
  czrep->callback([&] {
    const auto p = load_profile(cz_src);
    const auto r = dynamical_convexity_report(p, cz_m);
    json orbits = json::array();
    for (const auto& o : r.orbits)
      orbits.push_back({{"kind", o.kind}, {"I", o.I}, {"q", o.q}, {"p", o.p}, {"reeb_period", o.reeb_period}, {"contractible", o.contractible}});
    write_json(cz_out, {{"m", r.m},
                        {"T0_estimate", num(r.T0_estimate)},
                        {"rho_sup_empirical", r.rho_sup_empirical},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"verdict", r.verdict},
                        {"orbits", orbits}});
    std::cerr << "lhs 2pi/T0 = " << fmt(r.lhs, 8) << ", rhs 1 - rho = " << fmt(r.rhs, 8) << ": "
              << (r.verdict ? "evidence of dynamical convexity" : "no evidence") << "\n";
  });

  // ---- hopf ----
  auto* hopf = app.add_subcommand("hopf", "quaternionic double cover and linking");
  hopf->require_subcommand(1);
  int hv_samples = 1000;
  std::uint64_t seed = 1;
  std::string hk1, hk2, h_out, hl_path;
  auto* hverify = hopf->add_subcommand("verify", "pullback identity, p0 parity, round Hessian, Hopf link");
  hverify->add_option("--samples", hv_samples)->check(CLI::PositiveNumber);
  hverify->add_option("--seed", seed);
  hverify->add_option("--out", h_out);
  hverify->callback([&] {
    const double res = pullback_residual(hv_samples, seed);
    std::mt19937_64 rng(seed);
    double parity = 0.0;
    for (int k = 0; k < hv_samples; ++k) {
      const auto U = random_unit(rng);
      const auto a = p0(U), b = p0(-U);
      parity = std::max({parity, (a.u1 - b.u1).norm(), (a.u2 - b.u2).norm()});
    }
    const double eig = hessian_convexity([](const Quaternion&) { return 2.0; }, 64, seed).min_eigenvalue;
    const auto U0 = random_unit(rng), U1 = random_unit(rng);
    auto fiber = [](Quaternion U) {
      return KnotPolyline::sample([U](double t) { return Quaternion{std::cos(t), std::sin(t), 0, 0} * U; }, 128);
    };
    const int lk = gauss_linking(fiber(U0), fiber(U1), jobs());
    const bool ok = res < 1e-10 && parity == 0.0 && std::abs(eig - 1.0) < 1e-6 && std::abs(lk) == 1;
    write_json(h_out, {{"pullback_residual", res}, {"p0_parity_defect", parity}, {"round_hessian_min_eigenvalue", eig}, {"hopf_fiber_linking", lk}, {"passed", ok}});
    std::cerr << (ok ? "all quaternionic identities hold" : "identity check FAILED") << "\n";
    if (!ok) rc = kVerdictFailed;
  });
  auto* hlink = hopf->add_subcommand("link", "Gauss linking number of two knots in S^3");
  hlink->add_option("knot1", hk1)->required();
  hlink->add_option("knot2", hk2)->required();
  hlink->callback([&] {
    const auto r = gauss_linking_detail(KnotPolyline::from_points(read_knot(hk1)), KnotPolyline::from_points(read_knot(hk2)), jobs());
    std::cout << json{{"lk", r.lk}, {"raw", r.raw}, {"segments", r.segments}}.dump() << "\n";
  });
  auto* hlift = hopf->add_subcommand("lift", "lift a closed path of the unit tangent bundle of the round sphere to S^3");
  hlift->add_option("path", hl_path, "CSV with t,phi,theta columns (as written by flow trace) or u1x..u2z")->required();
  hlift->add_option("--out", h_out, "CSV of the lift (w,x,y,z)");
  hlift->callback([&] {
    const auto [head, rows] = read_csv(hl_path);
    std::vector<SpherePair> path;
    const int ct = column(head, "t"), cp = column(head, "phi"), cth = column(head, "theta");
    const int ux = column(head, "u1x");
    if (ct >= 0 && cp >= 0 && cth >= 0) {
      for (const auto& r : rows) path.push_back(round_sphere_state(r[ct], r[cp], r[cth]));
    } else if (ux >= 0 && ux + 5 < int(head.size())) {
      for (const auto& r : rows) path.push_back({Quaternion::imag({r[ux], r[ux + 1], r[ux + 2]}), Quaternion::imag({r[ux + 3], r[ux + 4], r[ux + 5]})});
    } else {
      throw domain_error("lift: need columns t,phi,theta or u1x,u1y,u1z,u2x,u2y,u2z");
    }
    const auto L = lift_path(path, 1e-7);
    if (!h_out.empty()) {
      std::ostringstream os;
      os << "w,x,y,z\n";
      for (const auto& q : L.lift) os << fmt(q.w) << ',' << fmt(q.x) << ',' << fmt(q.y) << ',' << fmt(q.z) << '\n';
      write_text(h_out, os.str());
    }
    std::cout << json{{"samples", L.lift.size()}, {"closes_after_one", L.closes_once}, {"closes_after_two", L.closes_twice}}.dump() << "\n";
  });

  // ---- repro ----
  auto* repro = app.add_subcommand("repro", "reproduce the three counterexample and positivity claims");
  repro->require_subcommand(1);
  std::string rp_ratios = "0.5,1,2,4", rp_ms = "0.25,0.5,1,2", rp_out;
  std::size_t rp_levels = 100;
  double rp_delta = 0.1, rp_eps = 0.9, rp_target = 10.0;
  auto* rell = repro->add_subcommand("ellipsoids", "action is positive on every energy level of ellipsoids of revolution");
  rell->add_option("--ratios", rp_ratios);
  rell->add_option("--m", rp_ms);
  rell->add_option("--levels", rp_levels)->check(CLI::PositiveNumber);
  rell->add_option("--out-dir", rp_out, "directory for per-case CSV files and summary.json");
  rell->callback([&] {
    json cases = json::array();
    bool all_pos = true;
    for (double ratio : parse_list(rp_ratios)) {
      const auto p = make_ellipsoid(ratio);
      for (double m : parse_list(rp_ms)) {
        json c{{"ratio", ratio}, {"m", m}};
        if (!km_positive(p, m)) {
          c["skipped"] = "K_m not positive";
          cases.push_back(c);
          continue;
        }
        const auto scan = action_scan(p, m, rp_levels, jobs());
        const double mn = scan.min_action();
        c["min_action"] = mn;
        c["levels"] = scan.rows.size();
        c["positive"] = mn > 0;
        all_pos = all_pos && mn > 0;
        if (!rp_out.empty()) write_text((std::filesystem::path(rp_out) / ("ellipsoid_r" + fmt(ratio, 6) + "_m" + fmt(m, 6) + ".csv")).string(), scan_csv(scan, common.precision));
        std::cerr << "ratio " << fmt(ratio, 6) << " m " << fmt(m, 6) << ": min action " << fmt(mn, 10) << "\n";
        cases.push_back(c);
      }
    }
    json summary{{"verdict", all_pos ? "all actions positive" : "non-positive action found"}, {"cases", cases}};
    if (!rp_out.empty()) write_json((std::filesystem::path(rp_out) / "summary.json").string(), summary);
    std::cout << summary["verdict"].get<std::string>() << "\n";
    if (!all_pos) rc = kVerdictFailed;
  });
  auto* rnon = repro->add_subcommand("noncon", "a normalized profile with an energy level not of contact type");
  rnon->add_option("--delta", rp_delta);
  rnon->add_option("--eps", rp_eps);
  rnon->add_option("--levels", rp_levels)->check(CLI::PositiveNumber);
  rnon->add_option("--out-dir", rp_out);
  rnon->callback([&] {
    const auto p = make_negative_action(rp_delta, rp_eps);
    const auto lat = latitude_action(p, rp_delta);
    const double m = lat.m_t0;
    const auto v = contact_verdict(p, m, rp_levels, jobs());
    const bool ok = lat.action < 0 && v.kind == VerdictKind::not_contact_witness;
    json out{{"profile", profile_summary_json(p)},
             {"validation", validation_json(validate(p))},
             {"dgamma_at_delta", p.dgamma(rp_delta)},
             {"latitude", latitude_json(lat)},
             {"m", m},
             {"contact_verdict", verdict_json(v)}};
    if (!rp_out.empty()) {
      write_json((std::filesystem::path(rp_out) / "noncon.json").string(), out);
      write_json((std::filesystem::path(rp_out) / "noncon_profile.json").string(), json{{"kind", "noncon"}, {"delta", rp_delta}, {"eps", rp_eps}});
      write_json((std::filesystem::path(rp_out) / "noncon_samples.json").string(), profile_samples_json(p, 4096));
    }
    std::cerr << "latitude t = " << fmt(rp_delta, 6) << ", m = " << fmt(m, 10) << ", action " << fmt(lat.action, 10) << "\n";
    std::cout << "verdict " << to_string(v.kind) << (ok ? "" : " (expected not_contact_witness)") << "\n";
    if (!ok) rc = kVerdictFailed;
  });
  auto* rbig = repro->add_subcommand("bigm", "a convex normalized profile with m_gamma above a target");
  rbig->add_option("--target", rp_target)->check(CLI::PositiveNumber);
  rbig->add_option("--eps", rp_eps, "spindle slope bound (default 0.1)")->default_val(0.1);
  rbig->add_option("--out-dir", rp_out);
  rbig->callback([&] {
    // (1 - eps)/delta + delta bounds m_gamma from below
    double delta = std::min(1.0, (1.0 - rp_eps) / (rp_target + 2.0));
    for (int attempt = 0; attempt < 6; ++attempt, delta *= 0.5) {
      const auto p = make_spindle(delta, rp_eps);
      const auto val = validate(p);
      const auto r = contact_interval(p);
      const double A = area(p);
      const bool convex = r.min_K >= -1e-10;
      const bool normalized = std::abs(A - 4.0 * pi) < 1e-6;
      const bool ok = convex && normalized && val.passed() && r.m_gamma > rp_target;
      json out{{"delta", delta}, {"eps", rp_eps}, {"profile", profile_summary_json(p)}, {"validation", validation_json(val)}, {"bounds", bounds_json(r)},
               {"convex", convex}, {"normalized", normalized}, {"target", rp_target}, {"verdict", ok}};
      if (!ok && attempt + 1 < 6 && convex && normalized && val.passed()) continue;
      if (!rp_out.empty()) {
        write_json((std::filesystem::path(rp_out) / "bigm.json").string(), out);
        write_json((std::filesystem::path(rp_out) / "bigm_profile.json").string(), json{{"kind", "spindle"}, {"delta", delta}, {"eps", rp_eps}});
        write_json((std::filesystem::path(rp_out) / "bigm_samples.json").string(), profile_samples_json(p, 4096));
      }
      std::cerr << "spindle delta " << fmt(delta, 6) << ": area " << fmt(A, 12) << ", min K " << fmt(r.min_K, 4) << ", m_gamma "
                << fmt(r.m_gamma, 10) << "\n";
      std::cout << (ok ? "m_gamma exceeds target" : "target not reached") << "\n";
      if (!ok) rc = kVerdictFailed;
      return;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return rc;
}
