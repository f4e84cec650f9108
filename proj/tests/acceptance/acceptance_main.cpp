// Runs the eleven acceptance criteria and prints one PASS/FAIL line each.
// Exit status: 0 when every failing criterion is listed in --expect-fail.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ipmix/calibration.hpp"
#include "ipmix/entropy_claw.hpp"
#include "ipmix/lamination.hpp"
#include "ipmix/random_walk.hpp"
#include "ipmix/subsolution_verify.hpp"
#include "ipmix/wave_cone.hpp"

using namespace ipmix;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "!") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- 1 ----
Outcome closed_form() {
  Outcome o;
  const double a = theta_exact(make_profile(make_atwood(0.0), 1.0), 1.0, 1.0);
  o.require(a == 0.5, "Theta_0(1,1)=" + fmt("%.17g", a));
  const auto p = make_atwood(0.5);
  const double target = 2.0 - std::sqrt(3.0);
  double worst = 0.0;
  for (auto form : {ProfileForm::ratio, ProfileForm::sqrt_b, ProfileForm::reduced})
    worst = std::max(worst, std::abs(theta_interior(p, 1.0, 0.0, form) - target));
  worst = std::max(worst, std::abs(theta_exact(make_profile(p, 1.0), 1.0, 0.0) - target));
  o.require(worst <= 1e-12, "forms vs 2-sqrt3 " + fmt("%.2e", worst));
  return o;
}

// ---- 2 ----
Outcome claw_convergence() {
  Outcome o;
  for (double A : {-0.5, 0.0, 0.5}) {
    const auto p = make_atwood(A);
    const auto prof = make_profile(p, 1.0);
    std::vector<double> err;
    for (int n : {200, 400, 800, 1600}) {
      ClawConfig cfg;
      cfg.n_cells = n;
      const auto sol = solve_claw(flat_datum(cfg), p, 1.0, 1.0, cfg);
      err.push_back(l1_error(sol.final(), cfg, prof, 1.0));
    }
    double worst_ratio = 1e300;
    for (int k = 0; k < 3; ++k) worst_ratio = std::min(worst_ratio, err[k] / err[k + 1]);
    o.require(err[3] <= 2e-2, "A=" + fmt("%g", A) + " L1(1600)=" + fmt("%.4g", err[3]));
    o.require(worst_ratio >= 1.5, "min ratio " + fmt("%.3f", worst_ratio));
  }
  return o;
}

// ---- 3 ----
Outcome confined() {
  Outcome o;
  const auto p0 = make_atwood(0.0);
  const auto run0 = confined_run(p0, 1e-4);
  double sup = 0.0;
  for (const auto& s : run0.trajectory)
    if (s.t >= 0.5 - 1e-12 && s.t <= 2.0 + 1e-12 && !s.collapsed)
      sup = std::max(sup, std::abs(s.f_plus - (1.0 + 2.0 * s.t - 2.0 * std::sqrt(2.0 * s.t))));
  o.require(sup <= 1e-6, "A=0 sup|f-f0|=" + fmt("%.2e", sup));
  const double tc = run0.t_collapse_plus.value_or(-1.0);
  o.require(std::abs(tc - 2.0) <= 1e-4, "t_collapse=" + fmt("%.8f", tc));
  for (double A : {-0.5, 0.5}) {
    const auto run = confined_run(make_atwood(A), 1e-4);
    const bool both = run.t_collapse_plus && run.t_collapse_minus;
    const double gap = both ? std::abs(*run.t_collapse_plus - *run.t_collapse_minus) : 1e300;
    double mass = 0.0;
    for (const auto& s : run.trajectory) mass = std::max(mass, std::abs(s.mass));
    o.require(gap <= 1e-4, "A=" + fmt("%g", A) + " |t+ - t-|=" + fmt("%.2e", gap));
    o.require(mass <= 1e-6, "mass " + fmt("%.2e", mass));
  }
  return o;
}

// ---- 4 ----
Outcome identities() {
  Outcome o;
  std::mt19937_64 rng(4004);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U(-1.0, 1.0), UA(-0.95, 0.95), UM(1.01, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto p = make_atwood(UA(rng));
    const auto b = make_bounds(p, UM(rng));
    const State z{U(rng), {N(rng), N(rng)}, {N(rng), N(rng)}};
    worst = std::max(worst, identity_check(z, p, b).max_relative());
  }
  o.require(worst <= 1e-10, "max relative residual " + fmt("%.2e", worst));
  return o;
}

// ---- 5 ----
Outcome hull() {
  Outcome o;
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> UA(-0.9, 0.9);
  double worst_f = -1e300;
  for (int i = 0; i < 100000; ++i) {
    const auto p = make_atwood(UA(rng));
    worst_f = std::max(worst_f, relaxation_functionals(random_laminate(2, p, rng), p).f);
  }
  o.require(worst_f <= 1e-9, "max f over laminates " + fmt("%.2e", worst_f));

  std::size_t max_leaves = 0;
  double bary = 0.0, wsum = 0.0, cone = 0.0, kdist = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto p = make_atwood(UA(rng));
    const State z = sample_U(p, rng);
    const auto tree = laminate_decompose(z, p);
    const auto leaves = tree.leaves();
    max_leaves = std::max(max_leaves, leaves.size());
    State mean{};
    double w = 0.0;
    for (const auto* l : leaves) {
      mean += l->weight * l->state;
      w += l->weight;
      kdist = std::max(kdist, std::abs(std::abs(l->state.theta) - 1.0) + std::abs(l->state.m - l->state.theta * l->state.u));
    }
    bary = std::max(bary, norm_inf(mean - z));
    wsum = std::max(wsum, std::abs(w - 1.0));
    for (const auto* s : tree.splits())
      if (in_Lambda(s->direction.state(), p, 1e-9).kind == ConeKind::None) cone += 1.0;
  }
  o.require(max_leaves <= 4, "max leaves " + std::to_string(max_leaves));
  o.require(bary <= 1e-9, "barycenter " + fmt("%.2e", bary));
  o.require(wsum <= 1e-12, "weight sum " + fmt("%.2e", wsum));
  o.require(cone == 0.0, "splits outside cone " + fmt("%g", cone));
  o.require(kdist <= 1e-9, "leaf distance to K " + fmt("%.2e", kdist));
  return o;
}

// ---- 6 ----
Outcome perturbation() {
  Outcome o;
  std::mt19937_64 rng(6006);
  double worst_u = 1e300, worst_um = 1e300;
  for (double A : {-0.8, -0.5, 0.0, 0.5, 0.8}) {
    const auto p = make_atwood(A);
    const double c0 = calibration::c0(A);
    double lo = 1e300;
    for (int i = 0; i < 10000; ++i) {
      const State z = sample_U(p, rng);
      const auto r = segment_radius(z, unbounded_direction(z, p).state(), SetId::U, p);
      lo = std::min(lo, r.radius() / (1.0 - z.theta * z.theta));
    }
    worst_u = std::min(worst_u, lo / c0);
    if (!(c0 > 0.0 && lo >= c0)) o.require(false, "U A=" + fmt("%g", A) + " min " + fmt("%.4g", lo) + " < c0 " + fmt("%.4g", c0));
    for (double M : {2.0, 4.0, 8.0}) {
      if (std::abs(M - p.M_star) < 1e-9) continue;
      const auto b = make_bounds(p, M);
      const double cm = calibration::c0(A, M);
      double lm = 1e300;
      for (int i = 0; i < 10000; ++i) {
        const State z = sample_U_M(p, b, rng);
        const auto r = segment_radius(z, bounded_direction(z, p, b).dir.state(), SetId::U_M, p, b);
        lm = std::min(lm, r.radius() / (1.0 - z.theta * z.theta));
      }
      worst_um = std::min(worst_um, lm / cm);
      if (!(cm > 0.0 && lm >= cm))
        o.require(false, "U_M A=" + fmt("%g", A) + " M=" + fmt("%g", M) + " min " + fmt("%.4g", lm) + " < c0 " + fmt("%.4g", cm));
    }
  }
  o.require(worst_u >= 1.0, "U min ratio/c0 " + fmt("%.3f", worst_u));
  o.require(worst_um >= 1.0, "U_M min ratio/c0 " + fmt("%.3f", worst_um));
  return o;
}

// ---- 7 ----
Outcome plane_waves() {
  Outcome o;
  std::mt19937_64 rng(7007);
  std::uniform_real_distribution<double> UA(-0.9, 0.9);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto p = make_atwood(UA(rng));
    const State zb = unbounded_direction(sample_U(p, rng), p).state();
    const auto xi = plane_wave_params(zb, p).xi();
    const auto v = multiply(T_matrix(zb, p), xi);
    worst = std::max(worst, std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
  }
  o.require(worst <= 1e-12, "max |T xi| " + fmt("%.2e", worst));

  const auto p = make_atwood(0.5);
  const int n = 96;
  ScalarField psi(Grid::rectangle(n, -1.0, 1.0, n, -1.0, 1.0).with_time(n, 0.0, 2.0 / n));
  const Grid& g = psi.grid;
  for (int it = 0; it < g.t.n; ++it)
    for (int ix = 0; ix < g.x1.n; ++ix)
      for (int iy = 0; iy < g.x2.n; ++iy) {
        const double t = g.t.coord(it) - 1.0, x = g.x1.coord(ix), y = g.x2.coord(iy);
        const double r2 = t * t + x * x + y * y;
        psi.at(it, ix, iy) = r2 < 0.64 ? std::pow(1 - r2 / 0.64, 3) : 0.0;
      }
  const State zb{1.0, {}, {}};
  const double ratio = localized_wave(zb, psi, 32, p).sup_deviation / localized_wave(zb, psi, 64, p).sup_deviation;
  o.require(ratio >= 1.7 && ratio <= 2.3, "localized ratio 32/64 " + fmt("%.3f", ratio));
  return o;
}

// ---- 8 ----
Outcome biot_savart_check() {
  Outcome o;
  {
    const Grid g = Grid::torus(128, 128);
    const auto p = make_atwood(0.5);
    ScalarField th(g);
    VectorField m(g);
    for (int ix = 0; ix < 128; ++ix)
      for (int iy = 0; iy < 128; ++iy) th.at(0, ix, iy) = std::cos(g.x1.coord(ix));
    const auto u = biot_savart(th, m, p);
    double err = 0.0;
    for (int ix = 0; ix < 128; ++ix)
      for (int iy = 0; iy < 128; ++iy) err = std::max(err, std::abs(u.at(0, ix, iy) - Vec2(0, -std::cos(g.x1.coord(ix)))));
    o.require(err <= 1e-12, "cos example " + fmt("%.2e", err));
  }
  std::mt19937_64 rng(8008);
  std::normal_distribution<double> N;
  const Grid g = Grid::torus(32, 32);
  int violations = 0;
  double slack = 1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = make_atwood(0.95 * std::tanh(N(rng)));
    ScalarField th(g);
    VectorField m(g);
    double c[4][4][3];
    for (auto& a : c)
      for (auto& b : a)
        for (double& v : b) v = N(rng);
    for (int ix = 0; ix < 32; ++ix)
      for (int iy = 0; iy < 32; ++iy) {
        double t = 0, m1 = 0, m2 = 0;
        for (int k = 0; k < 4; ++k)
          for (int l = 0; l < 4; ++l) {
            const double ph = k * g.x1.coord(ix) + (l - 1) * g.x2.coord(iy);
            t += c[k][l][0] * std::cos(ph);
            m1 += c[k][l][1] * std::sin(ph + 0.3);
            m2 += c[k][l][2] * std::cos(ph - 0.7);
          }
        th.at(0, ix, iy) = t;
        m.at(0, ix, iy) = {m1, m2};
      }
    const auto u = biot_savart(th, m, p);
    const double lhs = l2_norm(u), rhs = std::abs(p.A) * l2_norm(m) + l2_norm(th);
    slack = std::min(slack, (rhs - lhs) / rhs);
    if (lhs > rhs * (1.0 + 1e-12)) ++violations;
  }
  o.require(violations == 0, "L2 bound violations " + std::to_string(violations) + ", min relative slack " + fmt("%.2e", slack));
  return o;
}

// ---- 9 ----
Outcome random_walk() {
  Outcome o;
  const auto cfg0 = make_walk_config(make_atwood(0.0), 0.5, 1.0 / 256, 1.0, 4096, 9009);
  const auto art = run_simulation(cfg0);
  o.require(art.sup_recursion_exact <= 0.05, "recursion sup " + fmt("%.4f", art.sup_recursion_exact));
  o.require(art.max_sigma_ratio <= 5.0, "MC vs recursion " + fmt("%.1f", art.max_sigma_ratio) + " sigma");
  bool mass = art.initial_mass == art.final_mass;
  double worst_ratio_err = 0.0;
  std::string ratios;
  for (double A : {-0.5, 0.5}) {
    const auto cfg = make_walk_config(make_atwood(A), 0.5, 1.0 / 256, 1.0, 4096, 9010);
    const auto a = run_simulation(cfg);
    mass = mass && a.initial_mass == a.final_mass;
    const double up = a.mc_fronts.top, down = -a.mc_fronts.bottom;
    const double ratio = A > 0 ? up / down : down / up;
    worst_ratio_err = std::max(worst_ratio_err, std::abs(ratio / 3.0 - 1.0));
    ratios += (ratios.empty() ? "" : ",") + fmt("%.3f", ratio);
  }
  o.require(mass, "mass conserved");
  o.require(worst_ratio_err <= 0.15, "front ratios " + ratios + " vs 3");
  return o;
}

// ---- 10 ----
Outcome pinch_structure() {
  Outcome o;
  double at = 0.0, off = 1e300;
  for (double A : {-0.5, 0.5}) {
    const auto p = make_atwood(A);
    for (double th : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
      const State z = pinch_state(p, th);
      const auto g = u_m_margins(z, p, make_bounds(p, p.M_star));
      at = std::max({at, std::abs(g.half_plane), std::abs(g.ball_minus), std::abs(g.ball_plus)});
      for (double dM : {-0.5, 0.5}) {
        const auto h = u_m_margins(z, p, make_bounds(p, p.M_star + dM));
        off = std::min(off, std::max({std::abs(h.half_plane), std::abs(h.ball_minus), std::abs(h.ball_plus)}));
      }
    }
  }
  o.require(at <= 1e-10, "residual at M_* " + fmt("%.2e", at));
  o.require(off >= 1e-3, "margin at M_*+-0.5 " + fmt("%.3g", off));
  const auto h = nonconvexity_curve(make_atwood(0.5), {0.4, 0.6, 0.8});
  o.require(h[0] + h[2] < 2.0 * h[1], "h(.4)+h(.8)-2h(.6)=" + fmt("%.4f", h[0] + h[2] - 2.0 * h[1]));
  return o;
}

// ---- 11 ----
Outcome subsolution() {
  Outcome o;
  const auto p0 = make_atwood(0.0);
  auto theta0 = [](double, double x2) { return x2 > 0.0 ? 1.0 : (x2 < 0.0 ? -1.0 : 0.0); };
  std::vector<double> r1;
  for (int n : {256, 512}) {
    const Grid g = Grid::rectangle(8, 0.0, 1.0, n, -2.0, 2.0).with_time(n + 1, 0.0, 1.0 / n);
    r1.push_back(weak_residuals(build_subsolution(p0, 0.5, g), theta0).r1);
  }
  const double ratio = r1[0] / r1[1];
  o.require(ratio >= 1.7 && ratio <= 2.3, "r1 ratio " + fmt("%.3f", ratio));

  const Grid g = Grid::rectangle(4, 0.0, 1.0, 400, -3.0, 3.0).with_time(9, 0.0, 0.125);
  for (double A : {-0.5, 0.0, 0.5}) {
    const auto p = make_atwood(A);
    for (double alpha : {0.3, 0.7, 0.99}) {
      const auto fld = build_subsolution(p, alpha, g);
      const auto adm = admissibility(fld, p);
      const auto mm = maxmix_check(fld, p);
      if (!adm.pass()) o.require(false, "admissibility A=" + fmt("%g", A) + " alpha=" + fmt("%g", alpha));
      if (!mm.pass() || mm.max_equality_gap <= 1e-12)
        o.require(false, "maxmix A=" + fmt("%g", A) + " alpha=" + fmt("%g", alpha) + " gap " + fmt("%.2e", mm.max_equality_gap));
    }
    const auto one = maxmix_check(build_profile_subsolution(p, 1.0, g), p);
    if (!one.pass() || one.max_equality_gap > 1e-12)
      o.require(false, "maxmix alpha=1 A=" + fmt("%g", A) + " gap " + fmt("%.2e", one.max_equality_gap));
  }
  o.require(true, "admissible and strict maxmix for alpha<1, equality at alpha=1");
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::vector<int> expect_fail, only;
  app.add_option("--expect-fail", expect_fail, "criteria whose failure is documented")->delimiter(',');
  app.add_option("--only", only, "run just these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "closed-form profile", 1.0, closed_form},
      {2, "conservation-law convergence", 30.0, claw_convergence},
      {3, "confined domain", 10.0, confined},
      {4, "algebraic identities", 5.0, identities},
      {5, "hull equivalence", 60.0, hull},
      {6, "perturbation property", 120.0, perturbation},
      {7, "plane waves", 30.0, plane_waves},
      {8, "Biot-Savart", 10.0, biot_savart_check},
      {9, "random walk", 120.0, random_walk},
      {10, "pinch structure", 1.0, pinch_structure},
      {11, "subsolution", 30.0, subsolution},
  };
  const std::set<int> expected(expect_fail.begin(), expect_fail.end()), chosen(only.begin(), only.end());
  int unexpected = 0, failed = 0;
  for (const auto& c : all) {
    if (!chosen.empty() && !chosen.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.require(secs < c.limit_s, fmt("%.2f s", secs) + " < " + fmt("%g s", c.limit_s));
    std::printf("criterion %2d %-30s %s  %s\n", c.id, c.name, out.pass ? "PASS" : "FAIL", out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) {
      ++failed;
      if (!expected.count(c.id)) ++unexpected;
    } else if (expected.count(c.id)) {
      std::printf("note: criterion %d is listed as an expected failure but passed\n", c.id);
    }
  }
  std::printf("%d failed, %d unexpected\n", failed, unexpected);
  return unexpected == 0 ? 0 : 1;
}
