#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "ipmix/entropy_claw.hpp"
#include "ipmix/io.hpp"
#include "ipmix/lamination.hpp"
#include "ipmix/random_walk.hpp"
#include "ipmix/subsolution_verify.hpp"
#include "ipmix/wave_cone.hpp"
#include "manifest.hpp"

#ifndef IPMIX_VERSION
#define IPMIX_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace ipmix;

namespace {

struct Common {
  double atwood = 0.0;
  double alpha = 0.5;
  double m_bound = 0.0;  // 0: unbounded set
  int grid = 0;          // 0: subcommand default
  std::uint64_t seed = 1;
  std::string out_dir = "ipmix_out";
  std::string format = "csv";
  int threads = 1;
};

struct StateArgs {
  double theta = 0.0, u1 = 0.0, u2 = 0.0, m1 = 0.0, m2 = 0.0;
  State state() const { return State{theta, {u1, u2}, {m1, m2}}; }
  void add(CLI::App* sub, double theta_default) {
    theta = theta_default;
    sub->add_option("--theta", theta)->capture_default_str();
    sub->add_option("--u1", u1)->capture_default_str();
    sub->add_option("--u2", u2)->capture_default_str();
    sub->add_option("--m1", m1)->capture_default_str();
    sub->add_option("--m2", m2)->capture_default_str();
  }
};

// Collects outputs and the lines printed to stdout.
class Run {
 public:
  Run(const Common& c, std::string name) : c_(c), name_(std::move(name)) {}

  fs::path path(const std::string& file) const { return fs::path(c_.out_dir) / file; }
  void write(const std::string& file, const std::string& bytes) {
    atomic_write(path(file), bytes);
    outputs.push_back(path(file));
  }
  void csv(const std::string& file, const CsvTable& t) { write(file, t.str()); }
  void pgm(const std::string& file, const std::vector<double>& v, int w, int h, const PgmMapping& map) {
    write_pgm(path(file), v, w, h, map);
    outputs.push_back(path(file));
    outputs.push_back(path(file + ".meta"));
  }
  void say(const std::string& key, const std::string& value) { summary.set(key, value); }
  void say(const std::string& key, double value) { summary.set(key, value); }

  std::vector<fs::path> outputs;
  KeyValueText summary;

 private:
  const Common& c_;
  std::string name_;
};

AtwoodParams atwood(const Common& c) { return make_atwood(c.atwood); }

BoundParams bounds(const Common& c, const AtwoodParams& p) {
  if (c.m_bound <= 0.0) throw ConfigError("--m-bound is required here");
  return make_bounds(p, c.m_bound);
}

bool want_pgm(const Common& c) { return c.format == "pgm"; }

// ---- subcommands ----

struct ProfileArgs {
  double t = 1.0, x_min = -3.0, x_max = 3.0;
};

void cmd_profile(const Common& c, const ProfileArgs& a, Run& run) {
  const auto prof = make_profile(atwood(c), c.alpha);
  const int n = c.grid > 0 ? c.grid : 601;
  if (n < 2 || !(a.x_max > a.x_min)) throw ConfigError("profile needs at least two nodes on a nonempty interval");
  CsvTable t;
  t.header = {"x2", "theta", "m2"};
  for (int i = 0; i < n; ++i) {
    const double x = a.x_min + (a.x_max - a.x_min) * i / (n - 1);
    const double th = theta_exact(prof, a.t, x);
    t.add_row({x, th, m_breve(th, prof.params, prof.alpha).imag()});
  }
  run.csv("profile.csv", t);
  run.say("nodes", std::to_string(n));
  run.say("theta_at_origin", theta_exact(prof, a.t, 0.0));
}

struct ClawArgs {
  double t = 1.0, x_min = -3.0, x_max = 3.0, cfl = 0.45;
  std::string flux = "godunov";
  int snapshots = 2;
};

void cmd_solve_claw(const Common& c, const ClawArgs& a, Run& run) {
  const auto p = atwood(c);
  ClawConfig cfg;
  cfg.x_min = a.x_min;
  cfg.x_max = a.x_max;
  cfg.n_cells = c.grid > 0 ? c.grid : 1600;
  cfg.cfl = a.cfl;
  cfg.snapshots = a.snapshots;
  cfg.scheme = a.flux == "eo" ? NumericalFlux::engquist_osher : NumericalFlux::godunov;
  const auto sol = solve_claw(flat_datum(cfg), p, c.alpha, a.t, cfg);
  const auto prof = make_profile(p, c.alpha);
  CsvTable t;
  t.header = {"x2"};
  for (double tk : sol.times) t.header.push_back("theta_t" + format_double(tk));
  t.header.push_back("theta_exact");
  for (std::size_t j = 0; j < sol.x.size(); ++j) {
    std::vector<double> row{sol.x[j]};
    for (const auto& s : sol.snapshots) row.push_back(s[j]);
    row.push_back(a.t > 0.0 ? theta_exact(prof, a.t, sol.x[j]) : (sol.x[j] > 0 ? 1.0 : -1.0));
    t.add_row(row);
  }
  run.csv("claw.csv", t);
  run.say("steps", std::to_string(sol.steps));
  run.say("dt", sol.dt);
  if (a.t > 0.0) run.say("l1_error", l1_error(sol.final(), cfg, prof, a.t));
}

struct ConfinedArgs {
  double dt = 1e-4, t_end = 2.5, output_dt = 0.01;
};

void cmd_confined(const Common& c, const ConfinedArgs& a, Run& run) {
  const auto p = atwood(c);
  ConfinedConfig cfg;
  cfg.t_end = a.t_end;
  cfg.output_dt = a.output_dt;
  const auto res = confined_run(p, a.dt, cfg);
  CsvTable t;
  t.header = {"t", "f_plus", "f_minus", "mass", "collapsed"};
  for (const auto& s : res.trajectory) t.add_row({s.t, s.f_plus, s.f_minus, s.mass, s.collapsed ? 1.0 : 0.0});
  run.csv("confined.csv", t);
  auto show = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("none"); };
  run.say("t_collapse_plus", show(res.t_collapse_plus));
  run.say("t_collapse_minus", show(res.t_collapse_minus));
  if (res.t_collapse_plus && res.t_collapse_minus)
    run.say("t_collapse", 0.5 * (*res.t_collapse_plus + *res.t_collapse_minus));
  else
    run.say("t_collapse", "none");
}

struct SamplesArgs {
  int samples = 100000;
  double tol = 1e-10;
  int depth = 2;
};

void cmd_verify(const Common& c, const SamplesArgs& a, Run& run) {
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U(-1.0, 1.0), UA(-0.95, 0.95), UM(1.01, 10.0);
  double w_fg = 0.0, w_id1 = 0.0, w_id4 = 0.0;
  for (int i = 0; i < a.samples; ++i) {
    const auto p = make_atwood(UA(rng));
    const auto b = make_bounds(p, UM(rng));
    const State z{U(rng), {N(rng), N(rng)}, {N(rng), N(rng)}};
    const auto r = identity_check(z, p, b);
    w_fg = std::max(w_fg, r.fg / r.fg_scale);
    w_id1 = std::max(w_id1, r.id1 / r.id1_scale);
    w_id4 = std::max(w_id4, r.id4 / r.id4_scale);
  }
  const double worst = std::max({w_fg, w_id1, w_id4});
  CsvTable t;
  t.header = {"fg", "id1", "id4", "max"};
  t.add_row({w_fg, w_id1, w_id4, worst});
  run.csv("identities.csv", t);
  run.say("samples", std::to_string(a.samples));
  run.say("max_relative_residual", worst);
  run.say("pass", worst <= a.tol ? "true" : "false");
  if (!(worst <= a.tol)) throw std::runtime_error("identity residual above tolerance");
}

void cmd_sample_hull(const Common& c, const SamplesArgs& a, Run& run) {
  const auto p = atwood(c);
  std::mt19937_64 rng(c.seed);
  CsvTable t;
  t.header = {"theta", "u1", "u2", "m1", "m2", "f"};
  double worst = -1e300;
  for (int i = 0; i < a.samples; ++i) {
    const State z = random_laminate(a.depth, p, rng);
    const double f = relaxation_functionals(z, p).f;
    worst = std::max(worst, f);
    t.add_row({z.theta, z.u.real(), z.u.imag(), z.m.real(), z.m.imag(), f});
  }
  run.csv("hull.csv", t);
  run.say("samples", std::to_string(a.samples));
  run.say("max_f", worst);
}

void cmd_decompose(const Common& c, const StateArgs& s, Run& run) {
  const auto p = atwood(c);
  const auto tree = laminate_decompose(s.state(), p);
  run.write("decompose.json", to_json(tree) + "\n");
  CsvTable t;
  t.header = {"weight", "theta", "u1", "u2", "m1", "m2"};
  for (const auto* leaf : tree.leaves())
    t.add_row({leaf->weight, leaf->state.theta, leaf->state.u.real(), leaf->state.u.imag(), leaf->state.m.real(),
               leaf->state.m.imag()});
  run.csv("leaves.csv", t);
  run.say("leaves", std::to_string(tree.leaves().size()));
  run.say("splits", std::to_string(tree.splits().size()));
}

void cmd_segment(const Common& c, const StateArgs& s, Run& run) {
  const auto p = atwood(c);
  const State z = s.state();
  LambdaDirection dir;
  std::optional<BoundParams> b;
  if (c.m_bound > 0.0) {
    b = bounds(c, p);
    const auto bd = bounded_direction(z, p, *b);
    dir = bd.dir;
    run.say("case", to_string(bd.which));
    run.say("solver_warning", bd.warning ? "true" : "false");
  } else {
    dir = unbounded_direction(z, p);
    run.say("case", "unbounded");
  }
  const auto r = segment_radius(z, dir.state(), b ? SetId::U_M : SetId::U, p, b);
  const State d = dir.state();
  run.say("direction", format_double(d.theta) + " " + format_double(d.u.real()) + " " + format_double(d.u.imag()) + " " +
                           format_double(d.m.real()) + " " + format_double(d.m.imag()));
  run.say("lambda_minus", r.minus);
  run.say("lambda_plus", r.plus);
  run.say("radius", r.radius());
  run.say("radius_over_1_minus_theta2", r.radius() / (1.0 - z.theta * z.theta));
  run.write("segment.txt", run.summary.str());
}

struct WaveArgs {
  int k = 32;
  int sign = 1;
};

void cmd_planewave(const Common& c, const StateArgs& s, const WaveArgs& a, Run& run) {
  const auto p = atwood(c);
  const State zb = s.state();
  const auto cone = in_Lambda(zb, p, 1e-12);
  if (cone.kind == ConeKind::None) throw DomainError("direction is not in the wave cone");
  const auto spec = plane_wave_params(zb, p, a.sign);
  const auto xi = spec.xi();
  const auto Tx = multiply(T_matrix(zb, p), xi);
  const double res = std::sqrt(Tx[0] * Tx[0] + Tx[1] * Tx[1] + Tx[2] * Tx[2]);

  const int n = c.grid > 0 ? c.grid : 48;
  ScalarField psi(Grid::rectangle(n, -1.0, 1.0, n, -1.0, 1.0).with_time(n, 0.0, 2.0 / n));
  const Grid& g = psi.grid;
  for (int it = 0; it < g.t.n; ++it)
    for (int ix = 0; ix < g.x1.n; ++ix)
      for (int iy = 0; iy < g.x2.n; ++iy) {
        const double t = g.t.coord(it) - 1.0, x = g.x1.coord(ix), y = g.x2.coord(iy);
        const double r2 = t * t + x * x + y * y;
        psi.at(it, ix, iy) = r2 < 0.64 ? std::pow(1 - r2 / 0.64, 3) : 0.0;
      }
  const auto wave = localized_wave(zb, psi, a.k, p);

  CsvTable t;
  t.header = {"xi0", "zeta1", "zeta2", "a", "b", "k", "cone_residual", "localized_deviation"};
  t.add_row({xi[0], xi[1], xi[2], spec.a, spec.b, double(a.k), res, wave.sup_deviation});
  run.csv("planewave.csv", t);
  const int mid = g.t.n / 2;
  std::vector<double> img(std::size_t(n) * n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) img[std::size_t(n - 1 - iy) * n + ix] = wave.field.at(mid, ix, iy).theta;
  if (want_pgm(c)) run.pgm("planewave_theta.pgm", img, n, n, range_of(img));
  run.say("cone", cone.kind == ConeKind::Lambda0 ? "Lambda0" : "Lambda1");
  run.say("cone_residual", res);
  run.say("localized_deviation", wave.sup_deviation);
}

struct BiotArgs {
  std::string field = "cos";
  int modes = 4;
};

void cmd_biot_savart(const Common& c, const BiotArgs& a, Run& run) {
  const auto p = atwood(c);
  const int n = c.grid > 0 ? c.grid : 128;
  const Grid g = Grid::torus(n, n);
  ScalarField th(g);
  VectorField m(g);
  if (a.field == "cos") {
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy) th.at(0, ix, iy) = std::cos(g.x1.coord(ix));
  } else {
    std::mt19937_64 rng(c.seed);
    std::normal_distribution<double> N;
    std::vector<double> coef(std::size_t(a.modes) * a.modes * 3);
    for (double& v : coef) v = N(rng);
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy) {
        double t = 0, m1 = 0, m2 = 0;
        for (int k = 0; k < a.modes; ++k)
          for (int l = 0; l < a.modes; ++l) {
            const double* cf = &coef[(std::size_t(k) * a.modes + l) * 3];
            const double ph = k * g.x1.coord(ix) + l * g.x2.coord(iy);
            t += cf[0] * std::cos(ph);
            m1 += cf[1] * std::sin(ph + 0.3);
            m2 += cf[2] * std::cos(ph - 0.7);
          }
        th.at(0, ix, iy) = t;
        m.at(0, ix, iy) = {m1, m2};
      }
  }
  const auto u = biot_savart(th, m, p);
  if (want_pgm(c)) {
    std::vector<double> u1(std::size_t(n) * n), u2(u1.size());
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        u1[std::size_t(n - 1 - iy) * n + ix] = u.at(0, ix, iy).real();
        u2[std::size_t(n - 1 - iy) * n + ix] = u.at(0, ix, iy).imag();
      }
    run.pgm("u1.pgm", u1, n, n, range_of(u1));
    run.pgm("u2.pgm", u2, n, n, range_of(u2));
  } else {
    CsvTable t;
    t.header = {"x1", "x2", "theta", "m1", "m2", "u1", "u2"};
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy) {
        const Vec2 mm = m.at(0, ix, iy), uu = u.at(0, ix, iy);
        t.add_row({g.x1.coord(ix), g.x2.coord(iy), th.at(0, ix, iy), mm.real(), mm.imag(), uu.real(), uu.imag()});
      }
    run.csv("biot_savart.csv", t);
  }
  run.say("u_l2", l2_norm(u));
  run.say("bound", std::abs(p.A) * l2_norm(m) + l2_norm(th));
  run.say("max_mode_divergence", max_mode_divergence(u));
}

struct SubsolArgs {
  double t = 1.0;
  int nt = 65;
  double gamma = 0.0;
};

void cmd_subsolution(const Common& c, const SubsolArgs& a, Run& run) {
  const auto p = atwood(c);
  const int n = c.grid > 0 ? c.grid : 128;
  const double L = 1.25 * c.alpha * std::max(p.c_plus, p.c_minus) * a.t;
  if (a.nt < 2) throw ConfigError("--nt must be at least 2");
  const Grid g = Grid::rectangle(n, 0.0, 2.0 * L, n, -L, L).with_time(a.nt, 0.0, a.t / (a.nt - 1));
  const auto fld = c.alpha == 1.0 ? build_profile_subsolution(p, c.alpha, g) : build_subsolution(p, c.alpha, g);
  const auto theta0 = [](double, double x2) { return x2 > 0.0 ? 1.0 : (x2 < 0.0 ? -1.0 : 0.0); };
  TestFamilyConfig fam;
  fam.seed = c.seed;
  const auto r = weak_residuals(fld, theta0, fam);
  const auto adm = admissibility(fld, p);
  const auto mm = maxmix_check(fld, p);

  // micro phases: independent cells with mean theta at the last slice
  const int last = a.nt - 1;
  ScalarField micro(Grid::rectangle(n, 0.0, 2.0 * L, n, -L, L));
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      micro.at(0, ix, iy) = U(rng) < 0.5 * (1.0 + fld.at(last, ix, iy).theta) ? 1.0 : -1.0;
  ErrorBudget eb;
  eb.S = [](double s) { return s; };
  const double T = a.t;
  eb.T = [T](double t) { return std::min(1.0, t / T); };
  eb.gamma = a.gamma;
  std::vector<Rect> rects;
  const double lo = -c.alpha * p.c_minus * a.t, hi = c.alpha * p.c_plus * a.t;
  for (int k = 1; k <= 4; ++k) {
    const double frac = 0.2 * k, mid = 0.5 * (lo + hi), half = 0.45 * frac * (hi - lo);
    rects.push_back({0.0, 2.0 * L * frac, mid - half, mid + half});
  }
  const auto cmp = rectangle_compare(micro, fld, last, rects, Observable::identity, eb);

  KeyValueText rep;
  rep.set("atwood", c.atwood);
  rep.set("alpha", c.alpha);
  rep.set("grid", std::to_string(n) + "x" + std::to_string(n) + "x" + std::to_string(a.nt));
  rep.set("r1", r.r1);
  rep.set("r2", r.r2);
  rep.set("r3", r.r3);
  rep.set("admissible_strict", adm.strict ? "true" : "false");
  rep.set("admissible_closed", adm.closed ? "true" : "false");
  rep.set("worst_f", adm.worst_f);
  rep.set("exterior_defect", adm.exterior_defect);
  rep.set("maxmix_min_slack", mm.min_slack);
  rep.set("maxmix_equality_gap", mm.max_equality_gap);
  rep.set("maxmix_support_ok", mm.support_ok ? "true" : "false");
  run.write("subsolution_report.txt", rep.str());
  CsvTable t;
  t.header = {"x1_lo", "x1_hi", "x2_lo", "x2_hi", "avg_micro", "avg_macro", "budget", "margin"};
  for (std::size_t i = 0; i < rects.size(); ++i)
    t.add_row({rects[i].x1_lo, rects[i].x1_hi, rects[i].x2_lo, rects[i].x2_hi, cmp[i].avg_micro, cmp[i].avg_macro,
               cmp[i].budget, cmp[i].margin});
  run.csv("rectangles.csv", t);
  if (want_pgm(c)) {
    std::vector<double> img(std::size_t(n) * n);
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) img[std::size_t(n - 1 - iy) * n + ix] = fld.at(last, ix, iy).theta;
    run.pgm("theta_breve.pgm", img, n, n, {-1.0, 1.0});
  }
  for (const auto& [k, v] : rep.items()) run.say(k, v);
}

struct ClassifyArgs {
  double u1 = 0.0, u2 = 0.0, t1 = 1.0, t2 = 0.0, jump = -2.0, tol = 1e-12;
};

void cmd_classify(const Common& c, const ClassifyArgs& a, Run& run) {
  const auto p = atwood(c);
  const auto r = classify_interface({{a.u1, a.u2}, {a.t1, a.t2}, a.jump}, p, a.tol);
  run.say("varpi", r.varpi);
  run.say("sigma", r.sigma);
  run.say("regime", to_string(r.regime));
  run.write("classify.txt", run.summary.str());
}

struct WalkArgs {
  double h = 1.0 / 256, t = 1.0;
  int cols = 256;
  int snapshot_every = 0;
  std::string schedule = "simultaneous";
  double front_level = 0.01;
};

void cmd_simulate_rw(const Common& c, const WalkArgs& a, Run& run) {
  const auto p = atwood(c);
  const auto cfg = make_walk_config(p, c.alpha, a.h, a.t, c.grid > 0 ? c.grid : a.cols, c.seed);
  WalkOptions opt;
  opt.snapshot_every = a.snapshot_every;
  opt.threads = c.threads;
  opt.schedule = a.schedule == "checkerboard" ? Schedule::checkerboard : Schedule::simultaneous;
  opt.front_level = a.front_level;
  const auto art = run_simulation(cfg, opt);
  CsvTable t;
  t.header = {"row", "x2", "mc", "recursion", "exact"};
  for (int r = 0; r < cfg.n_rows; ++r)
    t.add_row({double(r), row_x2(cfg, r), art.final_average[r], art.recursion_final[r], art.exact_final[r]});
  run.csv("averages.csv", t);
  if (want_pgm(c)) {
    for (std::size_t k = 0; k < art.snapshots.size(); ++k) {
      const Lattice& lat = art.snapshots[k];
      std::vector<double> img(std::size_t(lat.n_cols) * lat.n_rows);
      for (int r = 0; r < lat.n_rows; ++r)
        for (int s = 0; s < lat.n_cols; ++s) img[std::size_t(lat.n_rows - 1 - r) * lat.n_cols + s] = lat.at(s, r);
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%06ld.pgm", art.snapshot_steps[k]);
      run.pgm(name, img, lat.n_cols, lat.n_rows, {-1.0, 1.0});
    }
  }
  run.say("steps", std::to_string(cfg.steps));
  run.say("n_cols", std::to_string(cfg.n_cols));
  run.say("n_rows", std::to_string(cfg.n_rows));
  run.say("mass_initial", std::to_string(art.initial_mass));
  run.say("mass_final", std::to_string(art.final_mass));
  run.say("sup_mc_recursion", art.sup_mc_recursion);
  run.say("max_sigma_ratio", art.max_sigma_ratio);
  run.say("sup_recursion_exact", art.sup_recursion_exact);
  run.say("l1_recursion_exact", art.l1_recursion_exact);
  run.say("front_top_mc", art.mc_fronts.top);
  run.say("front_bottom_mc", art.mc_fronts.bottom);
  run.say("front_top_recursion", art.recursion_fronts.top);
  run.say("front_bottom_recursion", art.recursion_fronts.bottom);
}

std::string join_argv(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

// Effective values, config file and defaults included, for the global flags and
// the chosen subcommand.
std::vector<std::pair<std::string, std::string>> effective_parameters(const CLI::App& app, const std::string& sub) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(app.config_to_str(true, false));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (line.empty() || line[0] == '[' || line[0] == '#' || eq == std::string::npos) continue;
    std::string k = line.substr(0, eq), v = line.substr(eq + 1);
    auto trim = [](std::string& x) {
      x.erase(0, x.find_first_not_of(" \"'"));
      x.erase(x.find_last_not_of(" \"'") + 1);
    };
    trim(k);
    trim(v);
    if (k == "config" || k == "help") continue;
    if (k.find('.') != std::string::npos && k.rfind(sub + ".", 0) != 0) continue;
    out.emplace_back(k, v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incompressible porous media mixing toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", IPMIX_VERSION);
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  Common c;
  app.add_option("--atwood", c.atwood, "Atwood number, |A| < 1")->capture_default_str();
  app.add_option("--alpha", c.alpha, "mixing speed fraction")->capture_default_str();
  app.add_option("--m-bound", c.m_bound, "velocity bound M > 1; omit for the unbounded set")->capture_default_str();
  app.add_option("--grid", c.grid, "grid size; 0 keeps the subcommand default")->capture_default_str();
  app.add_option("--seed", c.seed)->capture_default_str();
  app.add_option("--out-dir", c.out_dir)->capture_default_str();
  app.add_option("--format", c.format)->check(CLI::IsMember({"csv", "pgm"}))->capture_default_str();
  app.add_option("--threads", c.threads)->check(CLI::PositiveNumber)->capture_default_str();

  std::function<void(Run&)> action;

  auto* profile = app.add_subcommand("profile", "self-similar profile on a line");
  ProfileArgs pa;
  profile->add_option("--t", pa.t)->capture_default_str();
  profile->add_option("--x-min", pa.x_min)->capture_default_str();
  profile->add_option("--x-max", pa.x_max)->capture_default_str();
  profile->callback([&] { action = [&](Run& r) { cmd_profile(c, pa, r); }; });

  auto* claw = app.add_subcommand("solve-claw", "finite-volume solve from the flat datum");
  ClawArgs ca;
  claw->add_option("--t", ca.t)->capture_default_str();
  claw->add_option("--x-min", ca.x_min)->capture_default_str();
  claw->add_option("--x-max", ca.x_max)->capture_default_str();
  claw->add_option("--cfl", ca.cfl)->capture_default_str();
  claw->add_option("--flux", ca.flux)->check(CLI::IsMember({"godunov", "eo"}))->capture_default_str();
  claw->add_option("--snapshots", ca.snapshots)->capture_default_str();
  claw->callback([&] { action = [&](Run& r) { cmd_solve_claw(c, ca, r); }; });

  auto* conf = app.add_subcommand("confined", "free-boundary problem in the unit strip");
  ConfinedArgs fa;
  conf->add_option("--dt", fa.dt)->capture_default_str();
  conf->add_option("--t-end", fa.t_end)->capture_default_str();
  conf->add_option("--output-dt", fa.output_dt)->capture_default_str();
  conf->callback([&] { action = [&](Run& r) { cmd_confined(c, fa, r); }; });

  auto* verify = app.add_subcommand("verify-identities", "random sweep of the algebraic identities");
  SamplesArgs va;
  verify->add_option("--samples", va.samples)->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--tol", va.tol)->capture_default_str();
  verify->callback([&] { action = [&](Run& r) { cmd_verify(c, va, r); }; });

  auto* hull = app.add_subcommand("sample-hull", "random laminates and their relaxation functional");
  SamplesArgs ha;
  ha.samples = 10000;
  hull->add_option("--samples", ha.samples)->check(CLI::PositiveNumber)->capture_default_str();
  hull->add_option("--depth", ha.depth)->check(CLI::Range(1, 2))->capture_default_str();
  hull->callback([&] { action = [&](Run& r) { cmd_sample_hull(c, ha, r); }; });

  auto* dec = app.add_subcommand("decompose", "laminate decomposition of a state");
  StateArgs ds;
  ds.add(dec, 0.0);
  dec->callback([&] { action = [&](Run& r) { cmd_decompose(c, ds, r); }; });

  auto* seg = app.add_subcommand("segment", "admissible segment through a state");
  StateArgs ss;
  ss.add(seg, 0.0);
  seg->callback([&] { action = [&](Run& r) { cmd_segment(c, ss, r); }; });

  auto* pw = app.add_subcommand("planewave", "plane-wave parameters of a cone direction");
  StateArgs ps;
  ps.add(pw, 1.0);
  WaveArgs wa;
  pw->add_option("--k", wa.k)->check(CLI::PositiveNumber)->capture_default_str();
  pw->add_option("--sign", wa.sign)->check(CLI::IsMember({-1, 1}))->capture_default_str();
  pw->callback([&] { action = [&](Run& r) { cmd_planewave(c, ps, wa, r); }; });

  auto* bs = app.add_subcommand("biot-savart", "velocity of a periodic field");
  BiotArgs ba;
  bs->add_option("--field", ba.field)->check(CLI::IsMember({"cos", "random"}))->capture_default_str();
  bs->add_option("--modes", ba.modes)->check(CLI::Range(1, 64))->capture_default_str();
  bs->callback([&] { action = [&](Run& r) { cmd_biot_savart(c, ba, r); }; });

  auto* sub = app.add_subcommand("subsolution", "build and verify the averaged subsolution");
  SubsolArgs sa;
  sub->add_option("--t", sa.t)->capture_default_str();
  sub->add_option("--nt", sa.nt)->capture_default_str();
  sub->add_option("--gamma", sa.gamma)->capture_default_str();
  sub->callback([&] { action = [&](Run& r) { cmd_subsolution(c, sa, r); }; });

  auto* cls = app.add_subcommand("classify", "interface regime from mean velocity and tangent");
  ClassifyArgs la;
  cls->add_option("--u1", la.u1)->capture_default_str();
  cls->add_option("--u2", la.u2)->capture_default_str();
  cls->add_option("--t1", la.t1, "unit tangent")->capture_default_str();
  cls->add_option("--t2", la.t2)->capture_default_str();
  cls->add_option("--jump", la.jump, "value above minus value below")->capture_default_str();
  cls->add_option("--tol", la.tol)->capture_default_str();
  cls->callback([&] { action = [&](Run& r) { cmd_classify(c, la, r); }; });

  auto* rw = app.add_subcommand("simulate-rw", "lattice random walk against its mean field");
  WalkArgs ra;
  rw->add_option("--step", ra.h, "time step h")->capture_default_str();
  rw->add_option("--t", ra.t)->capture_default_str();
  rw->add_option("--cols", ra.cols)->check(CLI::PositiveNumber)->capture_default_str();
  rw->add_option("--snapshot-every", ra.snapshot_every)->capture_default_str();
  rw->add_option("--schedule", ra.schedule)->check(CLI::IsMember({"simultaneous", "checkerboard"}))->capture_default_str();
  rw->add_option("--front-level", ra.front_level)->capture_default_str();
  rw->callback([&] { action = [&](Run& r) { cmd_simulate_rw(c, ra, r); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  tools::RunManifest man;
  man.command = join_argv(argc, argv);
  man.subcommand = app.get_subcommands().front()->get_name();
  man.version = IPMIX_VERSION;
  man.seed = std::to_string(c.seed);
  man.parameters = effective_parameters(app, man.subcommand);
  if (auto* cfg = app.get_option("--config"); cfg->count() > 0) man.inputs.push_back(cfg->as<std::string>());

  Run run(c, man.subcommand);
  int code = 0;
  try {
    std::error_code ec;
    fs::create_directories(c.out_dir, ec);
    if (ec) throw IoError("cannot create " + c.out_dir + ": " + ec.message());
    action(run);
  } catch (const DomainError& e) {
    man.error = e.what();
    code = 2;
  } catch (const ConfigError& e) {
    man.error = e.what();
    code = 2;
  } catch (const UnsupportedError& e) {
    man.error = e.what();
    code = 2;
  } catch (const ShapeError& e) {
    man.error = e.what();
    code = 2;
  } catch (const std::exception& e) {
    man.error = e.what();
    code = 1;
  }
  std::cout << run.summary.str();
  if (code != 0) std::cerr << "error: " << man.error << "\n";

  man.outputs = run.outputs;
  man.exit_code = code;
  man.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    if (fs::is_directory(c.out_dir)) man.write(run.path(man.subcommand + ".manifest"));
  } catch (const std::exception& e) {
    std::cerr << "error: manifest: " << e.what() << "\n";
    if (code == 0) code = 1;
  }
  return code;
}
