#include "fhg/cli.hpp"

#include "fhg/dynamics.hpp"
#include "fhg/errors.hpp"
#include "fhg/ladder.hpp"
#include "fhg/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fhg {

using ordered_json = nlohmann::ordered_json;

std::string version_string() { return "fh-gauss 0.1.0"; }

namespace {

// ---------------------------------------------------------------- config --

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> parse_array(const std::string& raw) {
  std::string s = trim(raw);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']')
    throw BadConfig("expected a bracketed array, got '" + raw + "'");
  s = s.substr(1, s.size() - 2);
  std::vector<std::string> items;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) items.push_back(cur);
  }
  return items;
}

struct RawConfig {
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const {
    const std::string* hit = nullptr;
    for (const auto& [k, v] : entries)
      if (k == key) hit = &v;  // later entries (and overrides) win
    return hit;
  }
  std::string get(const std::string& key, const std::string& fallback) const {
    const std::string* hit = find(key);
    return hit ? *hit : fallback;
  }
};

RawConfig read_raw_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw BadConfig("cannot open config file '" + path + "'");
  RawConfig raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw BadConfig("config line " + std::to_string(lineno) + " is not key = value");
    raw.entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    raw.entries.emplace_back(ov.substr(0, eq), ov.substr(eq + 1));
  }
  return raw;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw BadConfig("cannot parse integer " + what + ": '" + s + "'");
  }
}

}  // namespace

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  const RawConfig raw = read_raw_config(path, overrides);

  RunConfig cfg;
  cfg.precision_bits = static_cast<unsigned>(
      parse_int(raw.get("precision_bits", "256"), "precision_bits"));
  if (cfg.precision_bits < 64) throw BadConfig("precision_bits must be at least 64");
  set_working_precision(cfg.precision_bits);

  const std::string* ts_raw = raw.find("ts");
  const std::string* gammas_raw = raw.find("gammas");
  if (!ts_raw || !gammas_raw) throw BadConfig("config must define ts = [..] and gammas = [..]");
  for (const auto& item : parse_array(*ts_raw)) cfg.ts.push_back(real_from_string(item));
  for (const auto& item : parse_array(*gammas_raw)) cfg.gammas.push_back(real_from_string(item));

  cfg.quad_tol = real_from_string(raw.get("quad_tol", "1e-30"));
  cfg.n_max = parse_int(raw.get("n_max", "12"), "n_max");
  if (cfg.n_max < 0) throw BadConfig("n_max must be nonnegative");
  cfg.suite = raw.get("suite", "all");
  if (cfg.suite != "all" && cfg.suite != "orthopoly" && cfg.suite != "ladder" &&
      cfg.suite != "identities" && cfg.suite != "dynamics")
    throw BadConfig("unknown suite '" + cfg.suite + "'");
  cfg.format = raw.get("format", "json");
  if (cfg.format != "json" && cfg.format != "csv")
    throw BadConfig("format must be json or csv");
  cfg.out_dir = raw.get("out", ".");
  cfg.fd_step = real_from_string(raw.get("fd_step", "1e-8"));
  cfg.richardson = parse_int(raw.get("richardson", "1"), "richardson");
  cfg.iterate_tol = real_from_string(raw.get("iterate_tol", "1e-12"));
  if (const std::string* v = raw.find("report_tol")) cfg.report_tol = real_from_string(*v);

  for (size_t coord = 1; coord <= cfg.ts.size(); ++coord) {
    const std::string key = "grid_t" + std::to_string(coord);
    if (const std::string* v = raw.find(key)) {
      const auto items = parse_array(*v);
      if (items.size() != 3) throw BadConfig(key + " must be [start, stop, steps]");
      GridAxis axis;
      axis.coord = static_cast<int>(coord) - 1;
      axis.start = real_from_string(items[0]);
      axis.stop = real_from_string(items[1]);
      axis.steps = parse_int(items[2], key + " steps");
      if (axis.steps < 1) throw BadConfig(key + " needs at least one step");
      cfg.grid.push_back(axis);
    }
  }

  const WeightSpec spec = make_spec(cfg.ts, cfg.gammas, cfg.precision_bits, cfg.quad_tol);
  cfg.warnings = validate_warnings(spec);
  return cfg;
}

namespace {

WeightSpec spec_of(const RunConfig& cfg) {
  return make_spec(cfg.ts, cfg.gammas, cfg.precision_bits, cfg.quad_tol);
}

std::vector<std::vector<Real>> expand_grid(const RunConfig& cfg) {
  std::vector<std::vector<Real>> points;
  points.push_back(cfg.ts);  // base point
  for (const GridAxis& axis : cfg.grid) {
    std::vector<std::vector<Real>> next;
    for (const auto& point : points) {
      for (int s = 0; s < axis.steps; ++s) {
        std::vector<Real> p = point;
        p[axis.coord] = (axis.steps == 1)
                            ? axis.start
                            : axis.start + (axis.stop - axis.start) * s / (axis.steps - 1);
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }
  if (!cfg.grid.empty()) points.erase(points.begin());  // keep swept points only
  for (const auto& point : points) {
    for (size_t k = 0; k + 1 < point.size(); ++k)
      if (!(point[k] < point[k + 1]))
        throw BadConfig("grid sweep leaves ts unordered at a grid point");
  }
  return points;
}

// --------------------------------------------------------------- reports --

ordered_json report_to_json(const ResidualReport& rep) {
  ordered_json o;
  o["name"] = rep.name;
  o["detail"] = rep.detail;
  if (rep.n >= 0) o["n"] = rep.n;
  if (rep.j >= 0) o["j"] = rep.j;
  if (rep.z) {
    o["z_re"] = to_string(rep.z->re, 20);
    o["z_im"] = to_string(rep.z->im, 20);
  }
  o["residual"] = to_string(rep.residual, 12);
  o["tolerance"] = to_string(rep.tolerance, 6);
  o["pass"] = rep.pass;
  if (!rep.note.empty()) o["note"] = rep.note;
  return o;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

std::string report_csv_header() {
  return "name,detail,n,j,z_re,z_im,residual,tolerance,pass,note";
}

std::string report_to_csv(const ResidualReport& rep) {
  std::ostringstream os;
  os << csv_quote(rep.name) << "," << csv_quote(rep.detail) << ",";
  if (rep.n >= 0) os << rep.n;
  os << ",";
  if (rep.j >= 0) os << rep.j;
  os << ",";
  if (rep.z) os << to_string(rep.z->re, 20);
  os << ",";
  if (rep.z) os << to_string(rep.z->im, 20);
  os << "," << to_string(rep.residual, 12) << "," << to_string(rep.tolerance, 6) << ","
     << (rep.pass ? 1 : 0) << "," << csv_quote(rep.note);
  return os.str();
}

ordered_json config_echo(const RunConfig& cfg) {
  ordered_json o;
  ordered_json ts = ordered_json::array(), gammas = ordered_json::array();
  for (const auto& t : cfg.ts) ts.push_back(to_string(t, 40));
  for (const auto& g : cfg.gammas) gammas.push_back(to_string(g, 40));
  o["ts"] = ts;
  o["gammas"] = gammas;
  o["precision_bits"] = cfg.precision_bits;
  o["quad_tol"] = to_string(cfg.quad_tol, 6);
  o["n_max"] = cfg.n_max;
  o["suite"] = cfg.suite;
  o["format"] = cfg.format;
  o["out"] = cfg.out_dir;
  o["fd_step"] = to_string(cfg.fd_step, 6);
  o["richardson"] = cfg.richardson;
  o["iterate_tol"] = to_string(cfg.iterate_tol, 6);
  if (cfg.report_tol >= 0) o["report_tol"] = to_string(cfg.report_tol, 6);
  ordered_json grid = ordered_json::array();
  for (const auto& axis : cfg.grid) {
    ordered_json a;
    a["coord"] = axis.coord + 1;
    a["start"] = to_string(axis.start, 20);
    a["stop"] = to_string(axis.stop, 20);
    a["steps"] = axis.steps;
    grid.push_back(a);
  }
  o["grid"] = grid;
  ordered_json warn = ordered_json::array();
  for (const auto& w : cfg.warnings) warn.push_back(w);
  o["warnings"] = warn;
  return o;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

void emit_document(const RunConfig& cfg, const std::string& command, ordered_json body,
                   const std::string& csv_text) {
  const std::filesystem::path out_path =
      std::filesystem::path(cfg.out_dir) / (command + "." + cfg.format);
  if (cfg.format == "json") {
    ordered_json doc;
    doc["version"] = version_string();
    doc["command"] = command;
    doc["config_echo"] = config_echo(cfg);
    for (auto& [key, value] : body.items()) doc[key] = value;
    write_file(out_path, doc.dump(2) + "\n");
  } else {
    write_file(out_path, csv_text);
  }
  std::cout << "wrote " << out_path.string() << "\n";
}

// --------------------------------------------------------------- compute --

struct ComputedPoint {
  std::vector<Real> ts;
  OrthoSystem sys;
  AuxQuantities aux;
};

int cmd_compute(const RunConfig& cfg) {
  const auto points = expand_grid(cfg);
  std::vector<ComputedPoint> results(points.size());
  parallel_for(static_cast<int>(points.size()), [&](int i) {
    const WeightSpec spec = make_spec(points[i], cfg.gammas, cfg.precision_bits, cfg.quad_tol);
    ComputedPoint& out = results[i];
    out.ts = points[i];
    out.sys = build_system(spec, cfg.n_max);
    out.aux = compute_aux(out.sys, compute_pv_constants(spec));
  });

  const int nsing = static_cast<int>(cfg.ts.size());
  ordered_json table = ordered_json::array();
  std::ostringstream csv;
  csv << "point";
  for (int j = 1; j <= nsing; ++j) csv << ",t_" << j;
  csv << ",n,h,ortho_defect,alpha,beta,p,D,sigma";
  for (int j = 1; j <= nsing; ++j) csv << ",R_" << j;
  for (int j = 1; j <= nsing; ++j) csv << ",r_" << j;
  csv << "\n";

  for (size_t i = 0; i < results.size(); ++i) {
    const ComputedPoint& pt = results[i];
    Real D = 1;
    for (int n = 0; n <= cfg.n_max; ++n) {
      ordered_json row;
      row["point"] = i;
      for (int j = 0; j < nsing; ++j) row["t_" + std::to_string(j + 1)] = to_string(pt.ts[j], 30);
      row["n"] = n;
      row["h"] = to_string(pt.sys.h[n], 40);
      row["ortho_defect"] = to_string(pt.sys.ortho_residual[n], 8);
      row["alpha"] = to_string(pt.sys.alpha[n], 40);
      row["beta"] = to_string(pt.sys.beta[n], 40);
      row["p"] = to_string(pt.sys.p_coeff[n], 40);
      row["D"] = to_string(D, 40);  // D_n, the empty product at n = 0
      row["sigma"] = to_string(compute_sigma(pt.sys, n), 40);
      for (int j = 0; j < nsing; ++j)
        row["R_" + std::to_string(j + 1)] = to_string(pt.aux.R(n, j), 40);
      for (int j = 0; j < nsing; ++j)
        row["r_" + std::to_string(j + 1)] = to_string(pt.aux.r(n, j), 40);
      table.push_back(row);

      csv << i;
      for (int j = 0; j < nsing; ++j) csv << "," << to_string(pt.ts[j], 30);
      csv << "," << n << "," << to_string(pt.sys.h[n], 40) << ","
          << to_string(pt.sys.ortho_residual[n], 8) << "," << to_string(pt.sys.alpha[n], 40)
          << "," << to_string(pt.sys.beta[n], 40) << "," << to_string(pt.sys.p_coeff[n], 40)
          << "," << to_string(D, 40) << "," << to_string(compute_sigma(pt.sys, n), 40);
      for (int j = 0; j < nsing; ++j) csv << "," << to_string(pt.aux.R(n, j), 40);
      for (int j = 0; j < nsing; ++j) csv << "," << to_string(pt.aux.r(n, j), 40);
      csv << "\n";
      D *= pt.sys.h[n];
    }
  }

  ordered_json body;
  body["table"] = table;
  emit_document(cfg, "compute", body, csv.str());
  return 0;
}

// ---------------------------------------------------------------- verify --

Real pick_tol(const RunConfig& cfg, const Real& fallback) {
  return cfg.report_tol >= 0 ? cfg.report_tol : fallback;
}

void run_orthopoly_suite(const RunConfig& cfg, const OrthoSystem& sys,
                         std::vector<ResidualReport>& reps) {
  const Real tol = pick_tol(cfg, 1000 * cfg.quad_tol);
  for (int n = 1; n <= sys.n_max; ++n) {
    reps.push_back(make_report("orthogonality", "max |<P_m, P_n>| / sqrt(h_m h_n), m < n", n, -1,
                               sys.ortho_residual[n], pick_tol(cfg, cfg.quad_tol)));
  }
  // Hankel determinant against the direct moment determinant
  for (int n = 1; n <= std::min(8, sys.n_max + 1); ++n) {
    Real prod = 1;
    for (int k = 0; k < n; ++k) prod *= sys.h[k];
    const Real direct = hankel_det_from_moments(sys.moments, n);
    reps.push_back(make_report("hankel-two-path", "prod h_j vs moment determinant", n, -1,
                               abs(prod - direct) / abs(prod), tol));
  }
  // beta from determinant ratios
  for (int n = 1; n < sys.n_max; ++n) {
    const Real dn = hankel_det(sys, n), dp = hankel_det(sys, n + 1), dm = hankel_det(sys, n - 1);
    reps.push_back(make_report("hankel-beta-ratio", "beta_n = D_{n+1} D_{n-1} / D_n^2", n, -1,
                               abs(dp * dm / (dn * dn) - sys.beta[n]) / sys.beta[n], tol));
  }
  // recurrence coefficients from the moment path
  const int n_small = std::min(6, sys.n_max - 2);
  if (n_small >= 1) {
    const MomentRecurrence rec = recurrence_from_moments(sys.moments, n_small);
    for (int n = 0; n <= n_small; ++n) {
      reps.push_back(make_report("recurrence-two-path-alpha",
                                 "Stieltjes vs moment-determinant alpha_n", n, -1,
                                 abs(rec.alpha[n] - sys.alpha[n]) / max(abs(sys.alpha[n]), Real(1)),
                                 tol));
      if (n >= 1)
        reps.push_back(make_report("recurrence-two-path-beta",
                                   "Stieltjes vs moment-determinant beta_n", n, -1,
                                   abs(rec.beta[n] - sys.beta[n]) / sys.beta[n], tol));
    }
  }
  // Christoffel-Darboux spot checks
  const std::vector<std::pair<Real, Real>> xy = {
      {Real("0.3"), Real("-0.2")}, {Real("1.1"), Real("0.7")}, {Real("-1.3"), Real("2.1")}};
  for (int n : {1, sys.n_max / 2, sys.n_max}) {
    if (n < 1) continue;
    for (const auto& [x, y] : xy) {
      reps.push_back(make_report("christoffel-darboux", "kernel identity at (x, y)", n, -1,
                                 christoffel_darboux_residual(sys, n, x, y),
                                 pick_tol(cfg, 10 * cfg.quad_tol)));
    }
  }
}

void run_ladder_suite(const RunConfig& cfg, const OrthoSystem& sys, const AuxQuantities& aux,
                      std::vector<ResidualReport>& reps) {
  const Real tol = pick_tol(cfg, 1000 * cfg.quad_tol);
  const int n_hi = std::min(10, sys.n_max - 1);
  std::vector<Complex> zs = {{Real(0), Real(2)},
                             {Real("0.3"), Real("1.1")},
                             {Real(-1), Real("0.8")}};
  const size_t base = zs.size();
  for (size_t i = 0; i < base; ++i) zs.push_back(conj(zs[i]));

  for (const Complex& z : zs) {
    const LadderSet set = eval_ladder_range(sys, aux, n_hi + 1, z);
    for (int n = 1; n <= n_hi; ++n) {
      auto push = [&](const std::string& name, const std::string& detail, const Real& res) {
        ResidualReport rep = make_report(name, detail, n, -1, res, tol);
        rep.z = z;
        reps.push_back(rep);
      };
      push("lowering", "P_n' + B_n P_n = beta_n A_n P_{n-1}", lowering_residual(sys, set, n));
      push("raising", "P_{n-1}' - (B_n + 2z) P_{n-1} = -A_{n-1} P_n", raising_residual(sys, set, n));
      push("S1", "B_{n+1} + B_n = (z - alpha_n) A_n - 2z", s1_residual(sys, set, n));
      push("S2", "1 + (z - alpha_n)(B_{n+1} - B_n) = beta_{n+1} A_{n+1} - beta_n A_{n-1}",
           s2_residual(sys, set, n));
      push("S2prime", "B_n^2 + 2z B_n + sum_{k<n} A_k = beta_n A_n A_{n-1}",
           s2prime_residual(sys, set, n));
    }
  }
}

void run_identities_suite(const RunConfig& cfg, const OrthoSystem& sys, const AuxQuantities& aux,
                          std::vector<ResidualReport>& reps) {
  const Real tol = pick_tol(cfg, 1000 * cfg.quad_tol);
  for (int n = 1; n + 1 <= sys.n_max; ++n) {
    auto batch = verify_section3(sys, aux, n, tol);
    reps.insert(reps.end(), batch.begin(), batch.end());
    try {
      reps.push_back(verify_p_expression(sys, aux, n, tol));
    } catch (const DegenerateR& e) {
      ResidualReport rep = make_report("p-from-aux", "subleading coefficient expression", n, -1,
                                       Real(0), tol, std::string("skipped: ") + e.what());
      reps.push_back(rep);
    }
  }
  // path agreement between the polynomial-reduction and direct quadrature routes
  const AuxQuantities direct = compute_aux_direct(sys);
  for (int n = 0; n <= sys.n_max; ++n) {
    for (int j = 0; j < sys.spec.num_singularities(); ++j) {
      const Real scale_R = max(abs(aux.R(n, j)), Real(1));
      reps.push_back(make_report("aux-path-agreement-R", "reduction vs direct quadrature", n,
                                 j + 1, abs(aux.R(n, j) - direct.R(n, j)) / scale_R, tol));
      const Real scale_r = max(abs(aux.r(n, j)), Real(1));
      reps.push_back(make_report("aux-path-agreement-r", "reduction vs direct quadrature", n,
                                 j + 1, abs(aux.r(n, j) - direct.r(n, j)) / scale_r, tol));
    }
  }
}

void run_dynamics_suite(const RunConfig& cfg, const WeightSpec& spec,
                        std::vector<ResidualReport>& reps) {
  DerivativeStencil stencil{cfg.fd_step, cfg.richardson};
  DeformationFrame frame(spec, cfg.n_max, stencil);
  frame.warm_up(true);
  const Real tol_fd = pick_tol(cfg, 1000 * cfg.fd_step * cfg.fd_step);
  const Real tol_alg = pick_tol(cfg, 1000 * cfg.quad_tol);
  for (int n = 1; n + 1 <= cfg.n_max; ++n) {
    auto add = [&](std::vector<ResidualReport> batch) {
      reps.insert(reps.end(), batch.begin(), batch.end());
    };
    add(verify_lemma41(frame, n, tol_fd));
    if (spec.num_singularities() >= 2) add(verify_cross_partials(frame, n, tol_fd));
    add(verify_toda(frame, n, tol_fd));
    add(verify_riccati(frame, n, tol_fd));
    add(verify_quadratic_root(frame, n, tol_fd));
    add(verify_pde_R(frame, n, tol_fd));
    add(verify_sigma_suite(frame, n, tol_fd, tol_alg));
    if (spec.num_singularities() == 1) {
      add(verify_painleve_reduction(frame, n, tol_fd));
      add(verify_sigma_form_n1(frame, n, tol_fd));
    }
  }
}

int cmd_verify(const RunConfig& cfg) {
  const WeightSpec spec = spec_of(cfg);
  std::vector<ResidualReport> reps;

  const bool want_ortho = cfg.suite == "all" || cfg.suite == "orthopoly";
  const bool want_ladder = cfg.suite == "all" || cfg.suite == "ladder";
  const bool want_ident = cfg.suite == "all" || cfg.suite == "identities";
  const bool want_dyn = cfg.suite == "all" || cfg.suite == "dynamics";

  if (want_ortho || want_ladder || want_ident) {
    const OrthoSystem sys = build_system(spec, cfg.n_max);
    if (want_ortho) run_orthopoly_suite(cfg, sys, reps);
    if (want_ladder || want_ident) {
      const AuxQuantities aux = compute_aux(sys, compute_pv_constants(spec));
      if (want_ladder) run_ladder_suite(cfg, sys, aux, reps);
      if (want_ident) run_identities_suite(cfg, sys, aux, reps);
    }
  }
  if (want_dyn) run_dynamics_suite(cfg, spec, reps);

  ordered_json jreports = ordered_json::array();
  std::ostringstream csv;
  csv << report_csv_header() << "\n";
  for (const auto& rep : reps) {
    jreports.push_back(report_to_json(rep));
    csv << report_to_csv(rep) << "\n";
  }
  ordered_json summary;
  summary["all_pass"] = all_pass(reps);
  ordered_json worst;
  for (const auto& [name, res] : max_residual_by_name(reps)) worst[name] = to_string(res, 8);
  summary["max_residual_by_name"] = worst;

  ordered_json body;
  body["summary"] = summary;
  body["reports"] = jreports;
  emit_document(cfg, "verify", body, csv.str());

  int fails = 0;
  for (const auto& rep : reps)
    if (!rep.pass) ++fails;
  std::cout << reps.size() << " checks, " << fails << " failed\n";
  if (fails > 0) {
    for (const auto& rep : reps)
      if (!rep.pass) std::cout << "FAIL " << to_line(rep) << "\n";
    return 2;
  }
  return 0;
}

// --------------------------------------------------------------- iterate --

int cmd_iterate(const RunConfig& cfg) {
  const WeightSpec spec = spec_of(cfg);
  const OrthoSystem sys = build_system(spec, cfg.n_max);
  const AuxQuantities quad = compute_aux(sys, compute_pv_constants(spec));
  const IterationResult it =
      iterate_difference_system(spec, cfg.n_max, quad.R.row(0), quad.R.row(1));

  const int nsing = spec.num_singularities();
  ordered_json table = ordered_json::array();
  std::ostringstream csv;
  csv << "n,j,R_quadrature,R_iterated,R_reldev,r_quadrature,r_iterated,r_reldev\n";
  Real worst = 0;
  auto reldev = [](const Real& a, const Real& b) {
    return abs(a - b) / max(abs(a), Real("1e-20"));
  };
  for (int n = 0; n <= it.completed_n; ++n) {
    for (int j = 0; j < nsing; ++j) {
      const Real dR = reldev(quad.R(n, j), it.aux.R(n, j));
      const Real dr = reldev(quad.r(n, j), it.aux.r(n, j));
      worst = max(worst, max(dR, dr));
      ordered_json row;
      row["n"] = n;
      row["j"] = j + 1;
      row["R_quadrature"] = to_string(quad.R(n, j), 40);
      row["R_iterated"] = to_string(it.aux.R(n, j), 40);
      row["R_reldev"] = to_string(dR, 8);
      row["r_quadrature"] = to_string(quad.r(n, j), 40);
      row["r_iterated"] = to_string(it.aux.r(n, j), 40);
      row["r_reldev"] = to_string(dr, 8);
      table.push_back(row);
      csv << n << "," << j + 1 << "," << to_string(quad.R(n, j), 40) << ","
          << to_string(it.aux.R(n, j), 40) << "," << to_string(dR, 8) << ","
          << to_string(quad.r(n, j), 40) << "," << to_string(it.aux.r(n, j), 40) << ","
          << to_string(dr, 8) << "\n";
    }
  }

  ordered_json body;
  ordered_json summary;
  summary["completed_n"] = it.completed_n;
  summary["halt"] = it.halt;
  summary["max_reldev"] = to_string(worst, 8);
  summary["bound"] = to_string(cfg.iterate_tol, 6);
  body["summary"] = summary;
  body["table"] = table;
  emit_document(cfg, "iterate", body, csv.str());

  std::cout << "iterated to n = " << it.completed_n << ", max relative deviation "
            << to_string(worst, 4) << "\n";
  if (!it.halt.empty()) {
    std::cout << "halted early: " << it.halt << "\n";
    return 2;
  }
  return worst <= cfg.iterate_tol ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"orthogonal polynomials, Hankel determinants and deformation equations for the "
               "Gaussian weight with algebraic singularities"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override, format_override;
  int nmax_override = -1;
  long prec_override = -1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "path to the run configuration file")->required();
    sub->add_option("--out", out_override, "output directory");
    sub->add_option("--format", format_override, "output format (json|csv)");
    sub->add_option("--precision-bits", prec_override, "working binary precision");
    sub->add_option("--n-max", nmax_override, "highest polynomial degree");
  };

  CLI::App* compute = app.add_subcommand("compute", "tabulate h, alpha, beta, p, D, R, r, sigma");
  CLI::App* verify = app.add_subcommand("verify", "run the identity verification suites");
  CLI::App* iterate = app.add_subcommand("iterate", "difference-system iteration vs quadrature");
  add_common(compute);
  add_common(verify);
  add_common(iterate);

  std::vector<const char*> argv;
  argv.push_back("fh-gauss");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    std::vector<std::string> overrides;
    if (!out_override.empty()) overrides.push_back("out=" + out_override);
    if (!format_override.empty()) overrides.push_back("format=" + format_override);
    if (nmax_override >= 0) overrides.push_back("n_max=" + std::to_string(nmax_override));
    if (prec_override >= 0) overrides.push_back("precision_bits=" + std::to_string(prec_override));
    const RunConfig cfg = load_config(config_path, overrides);

    if (compute->parsed()) return cmd_compute(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (iterate->parsed()) return cmd_iterate(cfg);
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace fhg
