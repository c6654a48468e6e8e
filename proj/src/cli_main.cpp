#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "heunbc/bhe.hpp"
#include "heunbc/error.hpp"
#include "heunbc/qes.hpp"
#include "heunbc/quad.hpp"
#include "heunbc/rational.hpp"
#include "heunbc/spectra.hpp"
#include "heunbc/verify.hpp"
#include "heunbc/weight.hpp"

namespace {

using heunbc::cplx;
using heunbc::errc;
using heunbc::Exec;
using json = nlohmann::ordered_json;

constexpr double knan = std::numeric_limits<double>::quiet_NaN();

json jc(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

std::string fnum(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string fnum(int v) { return std::to_string(v); }

// Flat table emitted under --format csv.  Cells are preformatted strings so
// the byte output is independent of locale and stream state.
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string text() const {
    std::string out;
    for (size_t i = 0; i < header.size(); ++i) {
      if (i) out += ',';
      out += header[i];
    }
    out += '\n';
    for (const auto& r : rows) {
      for (size_t i = 0; i < r.size(); ++i) {
        if (i) out += ',';
        out += r[i];
      }
      out += '\n';
    }
    return out;
  }
};

json base_doc(const char* cmd) {
  json j;
  j["schema"] = "heunbc-report/1";
  j["command"] = cmd;
  return j;
}

// Shared output options.  Verification gates failing turns the exit code to
// 3 but the report is still written: a failing report is the useful one.
struct OutOpts {
  std::string format = "json";
  std::string out_path;
};

int emit(const OutOpts& o, json& doc, const Csv& csv, bool pass) {
  doc["pass"] = pass;
  const std::string text = o.format == "csv" ? csv.text() : doc.dump(2) + "\n";
  if (o.out_path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) {
      std::fprintf(stderr, "error: cannot open %s\n", o.out_path.c_str());
      return 1;
    }
    f << text;
  }
  return pass ? 0 : 3;
}

void add_output_opts(CLI::App* cmd, OutOpts& o) {
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", o.out_path, "write the report to this file");
}

// Greedy nearest-neighbour pairing of two root lists.  Conjugate pairs sort
// unstably when their real parts agree only to roundoff, so cross-route
// deviations are measured against the closest unused partner, not by index.
double match_deviation(const std::vector<cplx>& got, const std::vector<cplx>& want) {
  if (got.size() != want.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(want.size(), false);
  double dev = 0.0;
  for (const cplx& g : got) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < want.size(); ++j) {
      if (used[j]) continue;
      double d = std::abs(g - want[j]);
      if (d < bd) {
        bd = d;
        best = int(j);
      }
    }
    used[size_t(best)] = true;
    dev = std::max(dev, bd);
  }
  return dev;
}

std::vector<cplx> sample_points(int npts) {
  std::vector<cplx> pts;
  pts.reserve(size_t(npts));
  for (int j = 0; j < npts; ++j)
    pts.emplace_back(0.25 + 0.11 * j, 0.08 * (j % 5 - 2));
  return pts;
}

std::vector<cplx> sample_points_offorigin(int npts) {
  std::vector<cplx> pts;
  pts.reserve(size_t(npts));
  for (int j = 0; j < npts; ++j)
    pts.emplace_back(0.6 + 0.13 * j, 0.05 * (j % 3 - 1));
  return pts;
}

json rule_json(const heunbc::quad::ContourRule& r) {
  json j;
  j["kind"] = r.kind == heunbc::quad::ContourRule::Kind::circle ? "circle" : "vsegment";
  j["geom"] = r.geom;
  j["N"] = r.N;
  return j;
}

json orth_json(const heunbc::quad::OrthReport& r) {
  json j;
  json g = json::array();
  for (const auto& row : r.gram) {
    json jr = json::array();
    for (cplx v : row) jr.push_back(jc(v));
    g.push_back(std::move(jr));
  }
  j["gram"] = std::move(g);
  j["normalized_offdiag"] = r.normalized_offdiag;
  j["scale"] = r.scale;
  j["symmetry_defect"] = r.symmetry_defect;
  j["diag_nonzero"] = r.diag_nonzero;
  j["deformed"] = r.deformed;
  if (r.adaptive)
    j["rule"] = "adaptive";
  else
    j["rule"] = rule_json(r.rule);
  json sk = json::array();
  for (int s : r.skipped) sk.push_back(s);
  j["skipped"] = std::move(sk);
  j["certificate"] = r.certificate;
  return j;
}

Csv orth_csv(const heunbc::quad::OrthReport& r) {
  Csv csv;
  csv.header = {"i", "j", "re", "im"};
  for (size_t i = 0; i < r.gram.size(); ++i)
    for (size_t k = 0; k < r.gram[i].size(); ++k)
      csv.rows.push_back({fnum(int(i)), fnum(int(k)), fnum(r.gram[i][k].real()),
                          fnum(r.gram[i][k].imag())});
  return csv;
}

// Certificates of numerically zero matrices are pure noise; the doubling
// gate is only meaningful once the entries rise above roundoff.
bool certificate_ok(double certificate, double scale) {
  return scale <= 1e-12 || certificate <= 1e-11;
}

json problem_json(const heunbc::spectra::SpectrumProblem& p) {
  json j;
  j["n"] = p.n;
  j["K3"] = p.K3;
  j["K2"] = p.K2;
  j["K0"] = p.K0;
  j["branch"] = p.branch == heunbc::spectra::Branch::plus ? "plus" : "minus";
  j["sigma"] = p.sigma;
  j["k2"] = p.k2;
  return j;
}

json q2_json(const heunbc::rational::Q2& q) {
  json j;
  j["rational"] = q.a.get_str();
  j["sqrt2"] = q.b.get_str();
  j["value"] = q.to_double();
  return j;
}

// ---------------------------------------------------------------------------

struct HautotOpts {
  int m = 0;
  double alpha = 0.0, beta = 0.0;
  OutOpts out;
};

int run_hautot(const HautotOpts& o) {
  auto fam = heunbc::bhe::hautot(o.m, o.alpha, o.beta);
  const auto zpts = sample_points(12);
  const auto xpts = sample_points_offorigin(12);
  double resid = 0.0;
  for (const auto& sol : fam) {
    for (cplx z : zpts)
      resid = std::max(resid, heunbc::bhe::bhe_residual(sol.params, sol.poly, z));
    for (cplx x : xpts)
      resid = std::max(resid,
                       heunbc::bhe::reversed_residual(sol.params, o.m, sol.reversed, x));
  }

  json doc = base_doc("hautot");
  doc["inputs"] = {{"m", o.m}, {"alpha", o.alpha}, {"beta", o.beta}};
  doc["tolerances"] = {{"equation_residual", 1e-9}};
  json eigen = json::array();
  json sols = json::array();
  Csv csv;
  csv.header = {"nu", "multiplicity", "delta_re", "delta_im", "k", "coeff_re", "coeff_im"};
  for (const auto& sol : fam) {
    eigen.push_back({{"nu", sol.nu},
                     {"multiplicity", sol.multiplicity},
                     {"delta", jc(sol.delta)}});
    json cs = json::array();
    json rs = json::array();
    for (cplx v : sol.poly.coeffs()) cs.push_back(jc(v));
    for (cplx v : sol.reversed.coeffs()) rs.push_back(jc(v));
    sols.push_back({{"nu", sol.nu}, {"coefficients", std::move(cs)}, {"reversed", std::move(rs)}});
    const auto& c = sol.poly.coeffs();
    for (size_t k = 0; k < c.size(); ++k)
      csv.rows.push_back({fnum(sol.nu), fnum(sol.multiplicity), fnum(sol.delta.real()),
                          fnum(sol.delta.imag()), fnum(int(k)), fnum(c[k].real()),
                          fnum(c[k].imag())});
  }
  doc["results"] = {{"eigenvalues", std::move(eigen)},
                    {"solutions", std::move(sols)},
                    {"max_equation_residual", resid}};
  return emit(o.out, doc, csv, resid <= 1e-9);
}

// ---------------------------------------------------------------------------

struct SpectrumOpts {
  int n = 0;
  double k3 = 0.0, k2 = 0.0, k0 = 0.0;
  std::string sign = "plus";
  OutOpts out;
};

int run_spectrum(const SpectrumOpts& o) {
  using heunbc::spectra::Branch;
  auto p = heunbc::spectra::make_problem(
      o.n, o.k3, o.k2, o.k0, o.sign == "plus" ? Branch::plus : Branch::minus);
  auto roots = heunbc::spectra::k1_spectrum(p);

  json doc = base_doc("spectrum");
  doc["inputs"] = {{"n", o.n}, {"k3", o.k3}, {"k2", o.k2}, {"k0", o.k0}, {"sign", o.sign}};
  doc["tolerances"] = {{"route_agreement", 1e-9}};
  json eig = json::array();
  for (cplx z : roots) eig.push_back(jc(z));

  // Independent route: the canonical-form eigenvalue polynomial under
  // alpha = 2 sigma, beta = -K3; its delta roots map to K1 = -delta/2.
  auto droots = heunbc::bhe::eigenvalue_poly(o.n, 2.0 * p.sigma, -p.K3).roots();
  std::vector<cplx> mapped;
  mapped.reserve(droots.size());
  for (cplx d : droots) mapped.push_back(-0.5 * d);
  double dev = match_deviation(roots, mapped);

  json res;
  res["problem"] = problem_json(p);
  res["eigenvalues"] = std::move(eig);
  res["route_agreement"] = dev;
  doc["results"] = std::move(res);

  Csv csv;
  csv.header = {"nu", "k1_re", "k1_im"};
  for (size_t i = 0; i < roots.size(); ++i)
    csv.rows.push_back({fnum(int(i)), fnum(roots[i].real()), fnum(roots[i].imag())});
  return emit(o.out, doc, csv, dev <= 1e-9);
}

// ---------------------------------------------------------------------------

struct WeightOpts {
  int n = 0;
  double alpha = 0.0, beta = 0.0;
  int kmax = 160;
  OutOpts out;
};

int run_weight(const WeightOpts& o) {
  auto w = heunbc::weight::weight_series(o.n, o.alpha, o.beta, o.kmax);
  double resid = 0.0;
  for (double th : {0.4, 1.1, 1.9, 2.7, 3.6, 4.8, 5.7})
    resid = std::max(resid, heunbc::weight::self_adjoint_residual(
                                w, std::polar(1.0, th)));
  double growth = heunbc::weight::growth_exponent(w, o.kmax);
  double tail = heunbc::weight::tail_estimate(w, 1.0);

  json doc = base_doc("weight");
  doc["inputs"] = {{"n", o.n}, {"alpha", o.alpha}, {"beta", o.beta}, {"kmax", o.kmax}};
  doc["tolerances"] = {{"relation_residual", 1e-10}};
  json coeffs = json::array();
  for (double a : w.a) coeffs.push_back(a);
  doc["results"] = {{"coefficients", std::move(coeffs)},
                    {"growth_exponent", growth},
                    {"growth_target", std::sqrt(2.0)},
                    {"tail_estimate_radius1", tail},
                    {"max_relation_residual", resid}};
  Csv csv;
  csv.header = {"k", "a"};
  for (size_t k = 0; k < w.a.size(); ++k)
    csv.rows.push_back({fnum(int(k)), fnum(w.a[k])});
  return emit(o.out, doc, csv, resid <= 1e-10);
}

// ---------------------------------------------------------------------------

struct CircleOrthOpts {
  int n = 0;
  double alpha = 0.0, beta = 0.0;
  double radius = 1.0;
  int kmax = 160;
  int quad_n = 512;
  bool parallel = false;
  OutOpts out;
};

int run_circle_orth(const CircleOrthOpts& o) {
  auto rule = heunbc::quad::circle(o.radius, o.quad_n);
  auto rep = heunbc::quad::circle_orthogonality(o.n, o.alpha, o.beta, rule, o.kmax,
                                                o.parallel ? Exec::par : Exec::serial);
  json doc = base_doc("circle-orth");
  doc["inputs"] = {{"n", o.n},     {"alpha", o.alpha},      {"beta", o.beta},
                   {"radius", o.radius}, {"weight_kmax", o.kmax}, {"quad_n", o.quad_n}};
  doc["tolerances"] = {{"normalized_offdiag", 1e-8}, {"certificate", 1e-11}};
  doc["results"] = orth_json(rep);
  bool pass = rep.normalized_offdiag <= 1e-8 && certificate_ok(rep.certificate, rep.scale);
  return emit(o.out, doc, orth_csv(rep), pass);
}

// ---------------------------------------------------------------------------

struct HalflineOrthOpts {
  int m = 0;
  double alpha = 0.0, beta = 0.0;
  bool parallel = false;
  OutOpts out;
};

int run_halfline_orth(const HalflineOrthOpts& o) {
  auto rep = heunbc::quad::halfline_orthogonality(o.m, o.alpha, o.beta,
                                                  o.parallel ? Exec::par : Exec::serial);
  json doc = base_doc("halfline-orth");
  doc["inputs"] = {{"m", o.m}, {"alpha", o.alpha}, {"beta", o.beta}};
  doc["tolerances"] = {{"normalized_offdiag", 1e-8}, {"certificate", 1e-11}};
  doc["results"] = orth_json(rep);
  bool pass = rep.normalized_offdiag <= 1e-8 && certificate_ok(rep.certificate, rep.scale);
  return emit(o.out, doc, orth_csv(rep), pass);
}

// ---------------------------------------------------------------------------

struct SingleOrthOpts {
  int n = 0;
  double k3 = 0.0, k2 = 0.0;
  bool shifted = false;
  int quad_n = 512;
  bool parallel = false;
  OutOpts out;
};

int run_single_orth(const SingleOrthOpts& o) {
  auto p = heunbc::quad::segment_problem(o.n, o.k3, o.k2);
  Exec ex = o.parallel ? Exec::par : Exec::serial;
  auto rep = o.shifted
                 ? heunbc::quad::shifted_orthogonality(
                       p, heunbc::quad::vsegment(3.141592653589793, o.quad_n), ex)
                 : heunbc::quad::single_orthogonality(
                       p, heunbc::quad::vsegment(0.0, o.quad_n), ex);
  json doc = base_doc("single-orth");
  doc["inputs"] = {{"n", o.n},        {"k3", o.k3},        {"k2", o.k2},
                   {"shifted", o.shifted}, {"quad_n", o.quad_n}};
  doc["tolerances"] = {{"normalized_offdiag", 1e-8}, {"certificate", 1e-11}};
  json res;
  res["problem"] = problem_json(p);
  res.update(orth_json(rep));
  doc["results"] = std::move(res);
  bool pass = rep.normalized_offdiag <= 1e-8 && rep.diag_nonzero &&
              certificate_ok(rep.certificate, rep.scale);
  return emit(o.out, doc, orth_csv(rep), pass);
}

// ---------------------------------------------------------------------------

struct DoubleOrthOpts {
  int n = 1, m = 2;
  double k3 = 0.0, k2 = 0.0;
  int quad_n = 128;
  bool parallel = false;
  OutOpts out;
};

int run_double_orth(const DoubleOrthOpts& o) {
  auto pn = heunbc::quad::segment_problem(o.n, o.k3, o.k2);
  auto pm = heunbc::quad::segment_problem(o.m, o.k3, o.k2);
  auto rep = heunbc::quad::double_orthogonality(
      pn, pm, heunbc::quad::vsegment(0.0, o.quad_n),
      heunbc::quad::vsegment(3.141592653589793, o.quad_n),
      o.parallel ? Exec::par : Exec::serial);

  json doc = base_doc("double-orth");
  doc["inputs"] = {{"n", o.n}, {"m", o.m}, {"k3", o.k3}, {"k2", o.k2}, {"quad_n", o.quad_n}};
  doc["tolerances"] = {{"max_offpair", 1e-7}, {"certificate", 1e-11}};
  json pairs = json::array();
  Csv csv;
  csv.header = {"mu", "nu", "S0_re", "S0_im", "S1_re", "S1_im", "B0_re", "B0_im",
                "B1_re", "B1_im", "T_re", "T_im", "normalized"};
  for (size_t mu = 0; mu < rep.pairs.size(); ++mu) {
    json row = json::array();
    for (size_t nu = 0; nu < rep.pairs[mu].size(); ++nu) {
      const auto& e = rep.pairs[mu][nu];
      row.push_back({{"S0", jc(e.S0)},
                     {"S1", jc(e.S1)},
                     {"B0", jc(e.B0)},
                     {"B1", jc(e.B1)},
                     {"T", jc(e.T)},
                     {"scale", e.scale},
                     {"normalized", e.normalized}});
      csv.rows.push_back({fnum(int(mu)), fnum(int(nu)), fnum(e.S0.real()),
                          fnum(e.S0.imag()), fnum(e.S1.real()), fnum(e.S1.imag()),
                          fnum(e.B0.real()), fnum(e.B0.imag()), fnum(e.B1.real()),
                          fnum(e.B1.imag()), fnum(e.T.real()), fnum(e.T.imag()),
                          fnum(e.normalized)});
    }
    pairs.push_back(std::move(row));
  }
  doc["results"] = {{"problem_n", problem_json(pn)},
                    {"problem_m", problem_json(pm)},
                    {"pairs", std::move(pairs)},
                    {"max_offpair", rep.max_offpair},
                    {"max_coincident", rep.max_coincident},
                    {"min_factor_scale", rep.min_factor_scale},
                    {"deformed_s", rep.deformed_s},
                    {"certificate", rep.certificate}};
  bool pass = rep.max_offpair <= 1e-7 && rep.certificate <= 1e-11;
  return emit(o.out, doc, csv, pass);
}

// ---------------------------------------------------------------------------

struct FredholmOpts {
  double k1 = knan;
  int n = 0;
  double k3 = knan, k2 = knan, k0 = 0.0;
  std::string sign = "plus";
  int nu = 0;
  double a = -0.5;
  double c_re = knan, c_im = 0.0;
  int samples = 16;
  int quad_n = 512;
  bool parallel = false;
  OutOpts out;
};

int run_fredholm(const FredholmOpts& o) {
  using heunbc::spectra::Branch;
  heunbc::spectra::SpectrumProblem p;
  if (!std::isnan(o.k1)) {
    // Flat shortcut: the n = 0 family whose member has K1 equal to the
    // requested value exactly.
    p = heunbc::spectra::make_problem(0, -2.0 * o.k1, 2.0 - o.k1 * o.k1, 0.0,
                                      Branch::plus);
  } else if (!std::isnan(o.k3) && !std::isnan(o.k2)) {
    p = heunbc::spectra::make_problem(
        o.n, o.k3, o.k2, o.k0, o.sign == "plus" ? Branch::plus : Branch::minus);
  } else {
    heunbc::fail(errc::invalid_argument, "provide --k1, or --k3 and --k2");
  }
  auto sol = heunbc::spectra::bh_solution(p, o.nu);
  const bool matched = std::isnan(o.c_re);
  const cplx cval = matched ? -sol.K1 : cplx(o.c_re, o.c_im);
  const cplx aval(o.a, 0.0);
  Exec ex = o.parallel ? Exec::par : Exec::serial;
  auto rep = heunbc::quad::fredholm_lambda(sol, aval, cval, o.samples,
                                           heunbc::quad::circle(1.0, o.quad_n), ex);
  double pde = heunbc::quad::kernel_pde_residual(aval, cval, sol.coeffs);
  double conc = heunbc::quad::concomitant_check(sol, aval, cval);

  json doc = base_doc("fredholm");
  json in;
  if (!std::isnan(o.k1)) in["k1"] = o.k1;
  in["n"] = p.n;
  in["k3"] = p.K3;
  in["k2"] = p.K2;
  in["k0"] = p.K0;
  in["sign"] = p.branch == Branch::plus ? "plus" : "minus";
  in["nu"] = o.nu;
  in["a"] = o.a;
  in["c"] = jc(cval);
  in["matched_c"] = matched;
  in["samples"] = o.samples;
  in["quad_n"] = o.quad_n;
  doc["inputs"] = std::move(in);
  doc["tolerances"] = {{"variation", 1e-7},
                       {"kernel_equation_residual", 1e-9},
                       {"concomitant_defect", 1e-9},
                       {"certificate", 1e-11}};
  json samp = json::array();
  Csv csv;
  csv.header = {"j", "sample_point", "lambda_re", "lambda_im"};
  for (size_t j = 0; j < rep.samples.size(); ++j) {
    samp.push_back({{"point", rep.sample_points[j]}, {"lambda", jc(rep.samples[j])}});
    csv.rows.push_back({fnum(int(j)), fnum(rep.sample_points[j]),
                        fnum(rep.samples[j].real()), fnum(rep.samples[j].imag())});
  }
  doc["results"] = {{"problem", problem_json(p)},
                    {"eigenvalue_K1", jc(sol.K1)},
                    {"lambda", jc(rep.lambda)},
                    {"two_pi_lambda", jc(2.0 * 3.141592653589793 * rep.lambda)},
                    {"variation", rep.variation},
                    {"samples", std::move(samp)},
                    {"kernel_equation_residual", pde},
                    {"concomitant_defect", conc},
                    {"certificate", rep.certificate}};
  bool pass = rep.variation <= 1e-7 && pde <= 1e-9 && conc <= 1e-9 &&
              rep.certificate <= 1e-11;
  return emit(o.out, doc, csv, pass);
}

// ---------------------------------------------------------------------------

struct BenderDunneOpts {
  std::string s = "0.5";
  int J = 1;
  std::string c = "0";
  int kmax = -1;
  std::string precision = "float";
  OutOpts out;
};

int run_bender_dunne(const BenderDunneOpts& o) {
  const mpq_class sq = heunbc::rational::mpq_from_decimal(o.s);
  const mpq_class cq = heunbc::rational::mpq_from_decimal(o.c);
  const int kmax = o.kmax >= 0 ? o.kmax : o.J + 3;
  const int nmax = kmax - o.J;
  const double sd = sq.get_d();
  const double cd = cq.get_d();

  json doc = base_doc("bender-dunne");
  doc["inputs"] = {{"s", o.s}, {"J", o.J}, {"c", o.c}, {"kmax", kmax},
                   {"precision", o.precision}};
  Csv csv;
  csv.header = {"k", "j", "re", "im"};
  json res;
  json energies = json::array();
  for (double e : heunbc::qes::qes_spectrum(sd, o.J, cd)) energies.push_back(e);
  bool pass = true;

  if (o.precision == "rational") {
    auto polys = heunbc::qes::bender_dunne_polys_exact(sq, o.J, cq, kmax);
    json tab = json::array();
    for (size_t k = 0; k < polys.size(); ++k) {
      json cs = json::array();
      const auto& c = polys[k].coeffs();
      for (size_t j = 0; j < c.size(); ++j) {
        cs.push_back(q2_json(c[j]));
        csv.rows.push_back({fnum(int(k)), fnum(int(j)), fnum(c[j].to_double()), fnum(0.0)});
      }
      tab.push_back({{"k", int(k)}, {"coefficients", std::move(cs)}});
    }
    res["polynomials"] = std::move(tab);
    doc["tolerances"] = json::object();
    if (o.J >= 1 && nmax >= 1) {
      auto steps = heunbc::qes::factorization_check_exact(sq, o.J, cq, nmax);
      json js = json::array();
      bool all_zero = true;
      for (size_t i = 0; i < steps.size(); ++i) {
        json qs = json::array();
        for (const auto& q : steps[i].quotient.coeffs()) qs.push_back(q2_json(q));
        js.push_back({{"n", int(i) + 1},
                      {"quotient", std::move(qs)},
                      {"remainder_zero", steps[i].remainder_zero}});
        all_zero = all_zero && steps[i].remainder_zero;
      }
      res["factorization"] = {{"steps", std::move(js)},
                              {"all_remainders_zero", all_zero}};
      pass = all_zero;
    }
  } else {
    auto polys = heunbc::qes::bender_dunne_polys(sd, o.J, cd, kmax);
    json tab = json::array();
    for (size_t k = 0; k < polys.size(); ++k) {
      json cs = json::array();
      const auto& c = polys[k].coeffs();
      for (size_t j = 0; j < c.size(); ++j) {
        cs.push_back(jc(c[j]));
        csv.rows.push_back({fnum(int(k)), fnum(int(j)), fnum(c[j].real()), fnum(c[j].imag())});
      }
      tab.push_back({{"k", int(k)}, {"coefficients", std::move(cs)}});
    }
    res["polynomials"] = std::move(tab);
    doc["tolerances"] = {{"factorization_remainder", 1e-10}};
    if (o.J >= 1 && nmax >= 1) {
      auto steps = heunbc::qes::factorization_check(sd, o.J, cd, nmax);
      json js = json::array();
      double worst = 0.0;
      for (size_t i = 0; i < steps.size(); ++i) {
        json qs = json::array();
        for (cplx q : steps[i].quotient.coeffs()) qs.push_back(jc(q));
        js.push_back({{"n", int(i) + 1},
                      {"quotient", std::move(qs)},
                      {"remainder_norm", steps[i].remainder_norm}});
        worst = std::max(worst, steps[i].remainder_norm);
      }
      res["factorization"] = {{"steps", std::move(js)},
                              {"max_remainder_norm", worst}};
      pass = worst <= 1e-10;
    }
  }
  res["energies"] = std::move(energies);
  doc["results"] = std::move(res);
  return emit(o.out, doc, csv, pass);
}

// ---------------------------------------------------------------------------

struct TurbinerOpts {
  double s = 0.5;
  int J = 1;
  double c = 0.0;
  OutOpts out;
};

int run_turbiner(const TurbinerOpts& o) {
  auto energies = heunbc::qes::qes_spectrum(o.s, o.J, o.c);
  double escale = 1.0;
  for (double e : energies) escale = std::max(escale, std::abs(e));

  // Cross-route: the same energies as roots of the periodic-form determinant.
  double dev = 0.0;
  if (o.J >= 1) {
    auto droots = heunbc::qes::qes_det_poly(o.s, o.J, o.c).roots();
    std::vector<cplx> want(energies.begin(), energies.end());
    dev = match_deviation(droots, want);
  }

  auto cond = heunbc::qes::condition_check(o.s, o.J, o.c);

  double wresid = 0.0;
  json k1s = json::array();
  const std::vector<cplx> xpts = {cplx(0.35, 0.0), cplx(0.8, 0.0), cplx(1.3, 0.0),
                                  cplx(0.5, 0.4)};
  for (double e : energies) {
    heunbc::qes::TurbinerParams p{o.s, o.J, o.c, cplx(e, 0.0)};
    for (cplx x : xpts)
      wresid = std::max(wresid, heunbc::qes::wavefunction_residual(p, x));
    k1s.push_back(jc(heunbc::qes::periodic_turbiner_coeffs(p).K1));
  }
  heunbc::qes::TurbinerParams p0{o.s, o.J, o.c, cplx(0.0, 0.0)};
  auto per = heunbc::qes::periodic_turbiner_coeffs(p0);

  json doc = base_doc("turbiner");
  doc["inputs"] = {{"s", o.s}, {"J", o.J}, {"c", o.c}};
  doc["tolerances"] = {{"route_agreement", 1e-9},
                       {"wavefunction_residual", 1e-9}};
  json en = json::array();
  for (double e : energies) en.push_back(e);
  doc["results"] = {
      {"energies", std::move(en)},
      {"route_agreement", dev},
      {"closure",
       {{"literal_plus", cond.literal_plus},
        {"literal_minus", cond.literal_minus},
        {"literal_rhs", cond.literal_rhs},
        {"literal_holds", cond.literal_holds},
        {"derived_defect", cond.derived_defect},
        {"derived_holds", cond.derived_holds}}},
      {"periodic",
       {{"K4", per.K4},
        {"K3", per.K3},
        {"K2", per.K2},
        {"K0", per.K0},
        {"sigma", per.sigma},
        {"K1_per_energy", std::move(k1s)}}},
      {"max_wavefunction_residual", wresid}};
  Csv csv;
  csv.header = {"nu", "E"};
  for (size_t i = 0; i < energies.size(); ++i)
    csv.rows.push_back({fnum(int(i)), fnum(energies[i])});
  bool pass = dev <= 1e-9 * escale && cond.derived_holds && wresid <= 1e-9;
  return emit(o.out, doc, csv, pass);
}

// ---------------------------------------------------------------------------

struct VerifyOpts {
  bool quick = false;
  OutOpts out;
};

int run_verify_all(const VerifyOpts& o) {
  auto results = heunbc::verify::run_all(o.quick);
  json doc = base_doc("verify-all");
  doc["inputs"] = {{"quick", o.quick}};
  json arr = json::array();
  Csv csv;
  csv.header = {"index", "name", "passed", "measured", "tolerance"};
  int failed = 0;
  for (const auto& r : results) {
    arr.push_back({{"index", r.index},
                   {"name", r.name},
                   {"passed", r.passed},
                   {"measured", r.measured},
                   {"tolerance", r.tolerance},
                   {"detail", r.detail}});
    csv.rows.push_back({fnum(r.index), r.name, r.passed ? "1" : "0",
                        fnum(r.measured), fnum(r.tolerance)});
    if (!r.passed) ++failed;
  }
  doc["results"] = {{"criteria", std::move(arr)}, {"failed", failed}};
  return emit(o.out, doc, csv, failed == 0);
}

// ---------------------------------------------------------------------------

int map_error_exit(const heunbc::error& e) {
  std::fprintf(stderr, "error: %s\n", e.what());
  switch (e.kind()) {
    case errc::invalid_argument:
    case errc::precondition:
    case errc::degenerate_parameter:
    case errc::insufficient_truncation:
    case errc::degenerate_integral:
      return 2;
    case errc::verification:
      return 3;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial eigen-solutions of the biconfluent Heun equation: "
               "spectra, orthogonality weights, contour Gram matrices, integral "
               "kernels, and the sextic quasi-exactly-solvable family"};
  app.require_subcommand(1);

  auto pow2 = CLI::Validator(
      [](std::string& s) -> std::string {
        int v = 0;
        try {
          v = std::stoi(s);
        } catch (...) {
          return "not an integer";
        }
        if (v < 16 || (v & (v - 1))) return "must be a power of two, at least 16";
        return {};
      },
      "POW2");

  std::function<int()> action;

  HautotOpts ho;
  auto* ch = app.add_subcommand("hautot", "polynomial eigen-solutions of the canonical equation");
  ch->add_option("--m", ho.m, "polynomial degree")->required()->check(CLI::NonNegativeNumber);
  ch->add_option("--alpha", ho.alpha)->required();
  ch->add_option("--beta", ho.beta)->required();
  add_output_opts(ch, ho.out);
  ch->callback([&] { action = [&] { return run_hautot(ho); }; });

  SpectrumOpts so;
  auto* cs = app.add_subcommand("spectrum", "K1 eigenvalues of a terminating periodic-form family");
  cs->add_option("--n", so.n, "family degree")->required()->check(CLI::NonNegativeNumber);
  cs->add_option("--k3", so.k3)->required();
  cs->add_option("--k2", so.k2)->required();
  cs->add_option("--k0", so.k0)->required();
  cs->add_option("--sign", so.sign, "termination branch")
      ->check(CLI::IsMember({"plus", "minus"}));
  add_output_opts(cs, so.out);
  cs->callback([&] { action = [&] { return run_spectrum(so); }; });

  WeightOpts wo;
  auto* cw = app.add_subcommand("weight", "Laurent coefficients of the circle orthogonality weight");
  cw->add_option("--n", wo.n)->required()->check(CLI::NonNegativeNumber);
  cw->add_option("--alpha", wo.alpha)->required();
  cw->add_option("--beta", wo.beta)->required();
  cw->add_option("--kmax", wo.kmax, "truncation order")->check(CLI::PositiveNumber);
  add_output_opts(cw, wo.out);
  cw->callback([&] { action = [&] { return run_weight(wo); }; });

  CircleOrthOpts co;
  auto* cc = app.add_subcommand("circle-orth", "Gram matrix of reversed polynomials against the circle weight");
  cc->add_option("--n", co.n)->required()->check(CLI::NonNegativeNumber);
  cc->add_option("--alpha", co.alpha)->required();
  cc->add_option("--beta", co.beta)->required();
  cc->add_option("--radius", co.radius)->check(CLI::PositiveNumber);
  cc->add_option("--kmax", co.kmax, "weight truncation order")->check(CLI::PositiveNumber);
  cc->add_option("--quad-n", co.quad_n, "contour nodes")->check(pow2);
  cc->add_flag("--parallel", co.parallel, "evaluate contour nodes in parallel");
  add_output_opts(cc, co.out);
  cc->callback([&] { action = [&] { return run_circle_orth(co); }; });

  HalflineOrthOpts hlo;
  auto* chl = app.add_subcommand("halfline-orth", "Gram matrix against the half-line weight");
  chl->add_option("--m", hlo.m)->required()->check(CLI::NonNegativeNumber);
  chl->add_option("--alpha", hlo.alpha)->required();
  chl->add_option("--beta", hlo.beta)->required();
  chl->add_flag("--parallel", hlo.parallel, "evaluate panels in parallel");
  add_output_opts(chl, hlo.out);
  chl->callback([&] { action = [&] { return run_halfline_orth(hlo); }; });

  SingleOrthOpts sgo;
  auto* csg = app.add_subcommand("single-orth", "period-segment Gram of one terminating family");
  csg->add_option("--n", sgo.n)->required()->check(CLI::NonNegativeNumber);
  csg->add_option("--k3", sgo.k3)->required();
  csg->add_option("--k2", sgo.k2)->required();
  csg->add_flag("--shifted", sgo.shifted, "integrate on the segment based at pi");
  csg->add_option("--quad-n", sgo.quad_n, "contour nodes")->check(pow2);
  csg->add_flag("--parallel", sgo.parallel, "evaluate contour nodes in parallel");
  add_output_opts(csg, sgo.out);
  csg->callback([&] { action = [&] { return run_single_orth(sgo); }; });

  DoubleOrthOpts dbo;
  auto* cdb = app.add_subcommand("double-orth", "double-contour pairing between two families");
  cdb->add_option("--n", dbo.n)->required()->check(CLI::NonNegativeNumber);
  cdb->add_option("--m", dbo.m)->required()->check(CLI::NonNegativeNumber);
  cdb->add_option("--k3", dbo.k3)->required();
  cdb->add_option("--k2", dbo.k2)->required();
  cdb->add_option("--quad-n", dbo.quad_n, "contour nodes per axis")->check(pow2);
  cdb->add_flag("--parallel", dbo.parallel, "evaluate the tensor grid in parallel");
  add_output_opts(cdb, dbo.out);
  cdb->callback([&] { action = [&] { return run_double_orth(dbo); }; });

  FredholmOpts fo;
  auto* cf = app.add_subcommand("fredholm", "integral-kernel eigenvalue of one eigen-solution");
  auto* fk1 = cf->add_option("--k1", fo.k1, "flat family shortcut: member with this K1");
  auto* fn = cf->add_option("--n", fo.n)->check(CLI::NonNegativeNumber);
  auto* fk3 = cf->add_option("--k3", fo.k3);
  auto* fk2 = cf->add_option("--k2", fo.k2);
  auto* fk0 = cf->add_option("--k0", fo.k0);
  auto* fsig = cf->add_option("--sign", fo.sign)->check(CLI::IsMember({"plus", "minus"}));
  fk1->excludes(fn)->excludes(fk3)->excludes(fk2)->excludes(fk0)->excludes(fsig);
  cf->add_option("--nu", fo.nu, "member index")->check(CLI::NonNegativeNumber);
  cf->add_option("--a", fo.a, "kernel quadratic strength, 4a^2 = 1");
  cf->add_option("--c-re", fo.c_re, "kernel linear strength (default: matched -K1)");
  cf->add_option("--c-im", fo.c_im);
  cf->add_option("--samples", fo.samples, "pointwise extraction count")->check(CLI::PositiveNumber);
  cf->add_option("--quad-n", fo.quad_n, "contour nodes")->check(pow2);
  cf->add_flag("--parallel", fo.parallel, "evaluate contour nodes in parallel");
  add_output_opts(cf, fo.out);
  cf->callback([&] { action = [&] { return run_fredholm(fo); }; });

  BenderDunneOpts bo;
  auto* cb = app.add_subcommand("bender-dunne", "three-term polynomial ladder of the sextic eigenproblem");
  cb->add_option("--s", bo.s, "singularity exponent, decimal or fraction")->required();
  cb->add_option("--J", bo.J, "closure size")->required()->check(CLI::NonNegativeNumber);
  cb->add_option("--c", bo.c, "quartic coupling, decimal or fraction");
  cb->add_option("--kmax", bo.kmax, "highest member (default J+3)")->check(CLI::NonNegativeNumber);
  cb->add_option("--precision", bo.precision)->check(CLI::IsMember({"float", "rational"}));
  add_output_opts(cb, bo.out);
  cb->callback([&] { action = [&] { return run_bender_dunne(bo); }; });

  TurbinerOpts to;
  auto* ct = app.add_subcommand("turbiner", "sextic eigenproblem spectrum and wavefunctions");
  ct->add_option("--s", to.s)->required();
  ct->add_option("--J", to.J)->required()->check(CLI::NonNegativeNumber);
  ct->add_option("--c", to.c);
  add_output_opts(ct, to.out);
  ct->callback([&] { action = [&] { return run_turbiner(to); }; });

  VerifyOpts vo;
  auto* cv = app.add_subcommand("verify-all", "run the acceptance battery");
  cv->add_flag("--quick", vo.quick, "shrink grids; same tolerances");
  add_output_opts(cv, vo.out);
  cv->callback([&] { action = [&] { return run_verify_all(vo); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action();
  } catch (const heunbc::error& e) {
    return map_error_exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
