#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>

#include "ipmix/entropy_claw.hpp"
#include "oracle.hpp"

using namespace ipmix;

TEST(Profile, Examples) {
  const auto p0 = make_profile(make_atwood(0.0), 1.0);
  EXPECT_DOUBLE_EQ(theta_exact(p0, 1.0, 1.0), 0.5);
  const auto ph = make_profile(make_atwood(0.5), 1.0);
  EXPECT_NEAR(theta_exact(ph, 1.0, 0.0), 2.0 - std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(theta_exact(ph, 1.0, 0.0), 0.2679492, 1e-7);
  for (double A : {-0.6, 0.0, 0.6}) {
    const auto p = make_profile(make_atwood(A), 0.7);
    const double edge = p.alpha * p.params.c_plus * 2.0;
    EXPECT_DOUBLE_EQ(theta_exact(p, 2.0, edge), 1.0);
    EXPECT_NEAR(theta_interior(p.params, p.alpha * 2.0, edge), 1.0, 1e-14);
    EXPECT_NEAR(theta_interior(p.params, p.alpha * 2.0, -p.alpha * p.params.c_minus * 2.0), -1.0, 1e-14);
  }
  EXPECT_THROW(theta_exact(p0, 0.0, 0.0), DomainError);
  EXPECT_THROW(make_profile(make_atwood(0.0), 1.5), DomainError);
}

TEST(Profile, MatchesPiecewiseOracle) {
  for (double A : {-0.8, -0.5, 0.0, 0.3, 0.8})
    for (double alpha : {0.2, 0.5, 1.0}) {
      const auto p = make_profile(make_atwood(A), alpha);
      for (int k = 0; k <= 400; ++k) {
        const double x = -5.0 + 10.0 * k / 400;
        EXPECT_NEAR(theta_exact(p, 1.0, x), oracle::theta_profile(A, alpha, x), 1e-13) << A << " " << x;
      }
    }
}

TEST(Profile, ThreeFormsAgree) {
  for (double A : {-0.9, -0.5, 0.2, 0.5, 0.9}) {
    const auto p = make_atwood(A);
    for (int k = 1; k < 200; ++k) {
      const double t = 0.5 + k * 0.01;
      const double x = -p.c_minus * t + (p.c_plus + p.c_minus) * t * k / 200.0;
      const double r = theta_interior(p, t, x, ProfileForm::ratio);
      EXPECT_NEAR(theta_interior(p, t, x, ProfileForm::sqrt_b), r, 1e-12);
      EXPECT_NEAR(theta_interior(p, t, x, ProfileForm::reduced), r, 1e-12);
    }
  }
}

TEST(Flux, Values) {
  for (double A : {-0.5, 0.0, 0.5}) {
    const auto p = make_atwood(A);
    EXPECT_EQ(flux(1.0, p), 0.0);
    EXPECT_EQ(flux(-1.0, p), 0.0);
    EXPECT_EQ(flux(0.0, p), 1.0);
    EXPECT_NEAR(flux_prime(flux_critical_point(p), p), 0.0, 1e-15);
    const double h = 1e-6, s = 0.3;
    EXPECT_NEAR(flux_prime(s, p), (flux(s + h, p) - flux(s - h, p)) / (2 * h), 1e-8);
  }
  const auto p0 = make_atwood(0.0);
  for (double s : {-0.7, 0.1, 0.9}) EXPECT_DOUBLE_EQ(flux(s, p0), 1 - s * s);
}

TEST(Claw, StableProfileIsStationary) {
  for (double A : {-0.5, 0.0, 0.5}) {
    ClawConfig cfg;
    cfg.n_cells = 200;
    cfg.left_value = 1.0;
    cfg.right_value = -1.0;
    std::vector<double> th(cfg.n_cells);
    for (int j = 0; j < cfg.n_cells; ++j) th[j] = cfg.center(j) < 0 ? 1.0 : -1.0;
    const auto sol = solve_claw(th, make_atwood(A), 1.0, 1.0, cfg);
    for (int j = 0; j < cfg.n_cells; ++j) EXPECT_EQ(sol.final()[j], th[j]);
  }
}

TEST(Claw, FlatDatumConvergesFirstOrder) {
  const auto p = make_atwood(0.0);
  const auto prof = make_profile(p, 1.0);
  ClawConfig cfg;
  std::vector<double> err;
  for (int n : {200, 400, 800, 1600}) {
    cfg.n_cells = n;
    const auto sol = solve_claw(flat_datum(cfg), p, 1.0, 1.0, cfg);
    err.push_back(l1_error(sol.final(), cfg, prof, 1.0));
  }
  EXPECT_LE(err[3], 2e-2);
  for (int k = 0; k < 2; ++k) EXPECT_GE(err[k] / err[k + 1], 1.5);
}

TEST(Claw, BoundsAndMass) {
  const auto p = make_atwood(0.5);
  ClawConfig cfg;
  cfg.n_cells = 800;
  cfg.x_min = -8.0;
  cfg.x_max = 8.0;
  const auto th0 = flat_datum(cfg);
  const auto sol = solve_claw(th0, p, 0.6, 1.0, cfg);
  double m0 = 0, m1 = 0;
  for (int j = 0; j < cfg.n_cells; ++j) {
    EXPECT_LE(std::abs(sol.final()[j]), 1.0);
    m0 += th0[j] * cfg.dx();
    m1 += sol.final()[j] * cfg.dx();
  }
  // boundary fluxes vanish while the fronts stay inside
  EXPECT_NEAR(m0, m1, 1e-12);
}

// Numerical diffusion smears the rarefaction edges over O(sqrt(dx)), so the
// solution is not exactly +-1 two cells past the fronts; the overshoot must
// shrink under refinement.
TEST(Claw, SupportOvershootShrinks) {
  const auto p = make_atwood(0.5);
  const double alpha = 0.6, T = 1.0;
  std::vector<double> dev;
  for (int n : {400, 1600}) {
    ClawConfig cfg;
    cfg.n_cells = n;
    const auto sol = solve_claw(flat_datum(cfg), p, alpha, T, cfg);
    const double reach = alpha * std::max(p.c_plus, p.c_minus) * T + 2 * cfg.dx();
    double d = 0.0;
    for (int j = 0; j < n; ++j) {
      const double x = cfg.center(j), v = sol.final()[j];
      if (std::abs(x) > reach) d = std::max(d, x > 0 ? 1 - v : v + 1);
    }
    dev.push_back(d);
  }
  EXPECT_LE(dev[0], 1.5e-2);
  EXPECT_GT(dev[0] / dev[1], 1.5);
}

TEST(Claw, TimeRescalingIsExact) {
  const auto p = make_atwood(-0.4);
  ClawConfig cfg;
  cfg.n_cells = 300;
  const auto th0 = flat_datum(cfg);
  const auto a = solve_claw(th0, p, 0.5, 1.2, cfg);
  const auto b = solve_claw(th0, p, 1.0, 0.6, cfg);
  ASSERT_EQ(a.steps, b.steps);
  for (int j = 0; j < cfg.n_cells; ++j) EXPECT_NEAR(a.final()[j], b.final()[j], 1e-12);
}

// The two fluxes differ only across decreasing jumps, which monotone data never has.
TEST(Claw, FluxesAgreeOnIncreasingData) {
  const auto p = make_atwood(0.5);
  ClawConfig cfg;
  cfg.n_cells = 400;
  const auto g = solve_claw(flat_datum(cfg), p, 1.0, 1.0, cfg);
  cfg.scheme = NumericalFlux::engquist_osher;
  const auto e = solve_claw(flat_datum(cfg), p, 1.0, 1.0, cfg);
  double worst = 0.0;
  for (std::size_t j = 0; j < g.final().size(); ++j) worst = std::max(worst, std::abs(g.final()[j] - e.final()[j]));
  EXPECT_LE(worst, 1e-13);
}

TEST(Claw, EngquistOsherDiffersOnStationaryShock) {
  const auto p = make_atwood(0.5);
  ClawConfig cfg;
  cfg.n_cells = 100;
  cfg.scheme = NumericalFlux::engquist_osher;
  cfg.left_value = 1.0;
  cfg.right_value = -1.0;
  std::vector<double> th(cfg.n_cells);
  for (int j = 0; j < cfg.n_cells; ++j) th[j] = cfg.center(j) < 0 ? 1.0 : -1.0;
  const auto sol = solve_claw(th, p, 1.0, 0.1, cfg);
  EXPECT_NE(sol.final(), th);
}

TEST(Claw, DiscreteEntropyInequality) {
  for (double A : {-0.5, 0.0, 0.5}) {
    ClawConfig cfg;
    cfg.n_cells = 300;
    for (double k : {-0.5, 0.0, 0.5})
      EXPECT_LE(entropy_residual(flat_datum(cfg), make_atwood(A), 1.0, 1.0, k, cfg), 1e-12);
  }
}

TEST(Claw, ConfigErrors) {
  ClawConfig cfg;
  cfg.cfl = 0.5;
  EXPECT_THROW(validate(cfg), ConfigError);
  cfg = {};
  EXPECT_THROW(solve_claw(std::vector<double>(10, 0.0), make_atwood(0.0), 1.0, 1.0, cfg), ShapeError);
  cfg.n_cells = 4;
  EXPECT_THROW(solve_claw({0, 0, 2, 0}, make_atwood(0.0), 1.0, 1.0, cfg), DomainError);
}

TEST(MeanInterval, Values) {
  const auto p0 = make_profile(make_atwood(0.0), 1.0);
  EXPECT_DOUBLE_EQ(mean_interval(p0, 0.0, 2.0), 0.5);
  EXPECT_NEAR(mean_interval(p0, -1.3, 1.3), 0.0, 1e-16);
  EXPECT_THROW(mean_interval(p0, 0.0, 3.0), DomainError);
  EXPECT_THROW(mean_interval(p0, 1.0, 0.5), DomainError);

  for (double A : {-0.7, 0.5, 0.8})
    for (double alpha : {0.4, 1.0}) {
      const auto p = make_profile(make_atwood(A), alpha);
      const double lo = -alpha * p.params.c_minus, hi = alpha * p.params.c_plus;
      for (auto [l1, l2] : {std::pair{0.0, 1.0}, std::pair{lo, hi}, std::pair{0.3 * lo, 0.9 * hi}}) {
        if (l2 > hi) continue;
        auto f = [&](double x) { return theta_exact(p, 1.0, x); };
        const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, l1, l2, 15, 1e-14);
        EXPECT_NEAR(mean_interval(p, l1, l2), q / (l2 - l1), 1e-9) << A << " " << alpha;
      }
    }
}

TEST(MBreve, Values) {
  for (double A : {-0.5, 0.0, 0.5}) {
    const auto p = make_atwood(A);
    EXPECT_EQ(m_breve(1.0, p, 0.5), Vec2(0, 0));
    EXPECT_EQ(m_breve(-1.0, p, 0.5), Vec2(0, 0));
    EXPECT_NEAR(std::abs(m_breve(0.0, p, 0.5) - Vec2(0, -0.5)), 0.0, 1e-16);
    for (double th : {-0.9, -0.2, 0.4, 0.95})
      EXPECT_LT(relaxation_functionals(State{th, {}, m_breve(th, p, 0.8)}, p).f, 0.0);
  }
}

TEST(Confined, ZeroAtwoodClosedForm) {
  const auto p = make_atwood(0.0);
  const auto run = confined_run(p, 1e-4);
  double worst = 0.0;
  for (const auto& s : run.trajectory) {
    if (s.t < 0.5 || s.t > 2.0) continue;
    const double f0 = 1 + 2 * s.t - 2 * std::sqrt(2 * s.t);
    worst = std::max({worst, std::abs(s.f_plus - f0), std::abs(s.f_minus - f0)});
  }
  EXPECT_LE(worst, 1e-6);
  ASSERT_TRUE(run.t_collapse_plus && run.t_collapse_minus);
  EXPECT_NEAR(*run.t_collapse_plus, 2.0, 1e-4);
  EXPECT_NEAR(*run.t_collapse_minus, 2.0, 1e-4);
  EXPECT_THROW(confined_run(p, 0.0), DomainError);
}

TEST(Confined, CollapseTimesAgreeAndMassVanishes) {
  for (double A : {-0.5, 0.5}) {
    const auto p = make_atwood(A);
    const auto run = confined_run(p, 1e-4);
    ASSERT_TRUE(run.t_collapse_plus && run.t_collapse_minus);
    EXPECT_NEAR(*run.t_collapse_plus, *run.t_collapse_minus, 1e-4);
    double prev_p = 0, prev_m = 0;
    for (const auto& s : run.trajectory) {
      EXPECT_LE(std::abs(s.mass), 1e-6) << "t=" << s.t;
      EXPECT_GE(s.f_plus, prev_p);
      EXPECT_GE(s.f_minus, prev_m);
      prev_p = s.f_plus;
      prev_m = s.f_minus;
    }
  }
}

TEST(ProfileProps, Report) {
  for (double A : {-0.8, -0.5, 0.0, 0.5, 0.8}) {
    const auto r = profile_props(make_profile(make_atwood(A), 1.0));
    EXPECT_TRUE(r.pass()) << A;
  }
  const auto r = profile_props(make_profile(make_atwood(0.5), 1.0));
  EXPECT_NEAR(r.slope_at_origin, 0.5 * std::sqrt(0.75), 1e-8);
  EXPECT_NEAR(r.slope_at_origin, 0.4330, 1e-4);
  EXPECT_EQ(profile_props(make_profile(make_atwood(0.0), 1.0)).antisymmetry, 0.0);
}
