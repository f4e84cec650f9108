#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ipmix/state_geometry.hpp"
#include "oracle.hpp"

using namespace ipmix;

namespace {
oracle::R2 r2(Vec2 v) { return {v.real(), v.imag()}; }
}  // namespace

TEST(Atwood, ZeroAtwood) {
  const auto p = make_atwood(0.0);
  EXPECT_EQ(p.c_plus, 2.0);
  EXPECT_EQ(p.c_minus, 2.0);
  EXPECT_EQ(p.B, 1.0);
  EXPECT_EQ(p.a, 0.5);
  EXPECT_TRUE(std::isinf(p.M_star));
}

TEST(Atwood, HalfAtwood) {
  const auto p = make_atwood(0.5);
  EXPECT_DOUBLE_EQ(p.c_plus, 4.0);
  EXPECT_DOUBLE_EQ(p.c_minus, 4.0 / 3.0);
  EXPECT_DOUBLE_EQ(p.B, 3.0);
  EXPECT_DOUBLE_EQ(p.a, 0.25);
  // 1 + 4(1/A^2 - 1) = 13
  EXPECT_NEAR(p.M_star, std::sqrt(13.0), 1e-15);
  EXPECT_NEAR(p.M_star, 3.605551, 1e-6);
  EXPECT_DOUBLE_EQ(p.a, 1.0 / std::max(p.c_plus, p.c_minus));
}

TEST(Atwood, SignFlipSwapsSpeeds) {
  const auto p = make_atwood(0.3), q = make_atwood(-0.3);
  EXPECT_DOUBLE_EQ(p.c_plus, q.c_minus);
  EXPECT_DOUBLE_EQ(p.c_minus, q.c_plus);
  EXPECT_NEAR(p.B * q.B, 1.0, 1e-15);
  EXPECT_EQ(p.a, q.a);
}

TEST(Atwood, RejectsUnitAtwood) {
  EXPECT_THROW(make_atwood(1.0), DomainError);
  EXPECT_THROW(make_atwood(-1.5), DomainError);
  EXPECT_THROW(make_atwood(std::nan("")), DomainError);
}

TEST(Bounds, Formula) {
  const auto p = make_atwood(0.5);
  const auto b = make_bounds(p, 2.0);
  EXPECT_NEAR(b.M_plus, std::sqrt(4.5 / 1.5), 1e-15);
  EXPECT_NEAR(b.M_minus, std::sqrt(3.5 / 0.5), 1e-15);
  EXPECT_THROW(make_bounds(p, 1.0), DomainError);
}

TEST(DetT, Examples) {
  const auto p0 = make_atwood(0.0);
  EXPECT_DOUBLE_EQ(det_T(State{1.0, {1, 0}, {1, 0}}, p0), -1.0);
  EXPECT_EQ(det_T(State{0.0, {3, 1}, {2, -5}}, make_atwood(0.4)), 0.0);
}

TEST(DetT, MatchesCofactorOracle) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U(-0.9, 0.9);
  for (int i = 0; i < 1000; ++i) {
    const double A = U(rng);
    const State z{U(rng), {N(rng), N(rng)}, {N(rng), N(rng)}};
    const double ref = oracle::det_T(z.theta, r2(z.u), r2(z.m), A);
    EXPECT_NEAR(det_T(z, make_atwood(A)), ref, 1e-12 * (1 + std::abs(ref)));
  }
}

TEST(Functionals, Examples) {
  for (double A : {-0.7, 0.0, 0.5}) {
    const auto p = make_atwood(A);
    const auto k = relaxation_functionals(State{1.0, {0.3, 2}, {0.3, 2}}, p);
    EXPECT_NEAR(k.f, 0.0, 1e-14);
    EXPECT_NEAR(k.g, 0.0, 1e-14);
    const auto o = relaxation_functionals(State{}, p);
    EXPECT_EQ(o.f, 0.0);
    EXPECT_EQ(o.g, 0.0);
  }
  const auto c = relaxation_functionals(State{0.0, {}, {0, -0.5}}, make_atwood(0.0));
  EXPECT_DOUBLE_EQ(c.f, -1.0);
  EXPECT_DOUBLE_EQ(c.g, -0.25);
}

TEST(Functionals, OracleAndFgIdentity) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> N;
  std::uniform_real_distribution<double> U(-1.0, 1.0), UA(-0.9, 0.9);
  for (int i = 0; i < 20000; ++i) {
    const double A = UA(rng);
    const auto p = make_atwood(A);
    const State z{U(rng), {N(rng), N(rng)}, {N(rng), N(rng)}};
    const auto fg = relaxation_functionals(z, p);
    EXPECT_NEAR(fg.f, oracle::f(z.theta, r2(z.u), r2(z.m), A), 1e-12 * (1 + std::abs(fg.f)));
    EXPECT_NEAR(fg.g, oracle::g(z.theta, r2(z.u), r2(z.m), A), 1e-12 * (1 + std::abs(fg.g)));
    const double lhs = 4 * (1 - z.theta * A) * fg.g;
    const double rhs = fg.f * (fg.f + 2 * (1 - z.theta * z.theta) * std::abs(A * z.u + I));
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * (1 + fg.f * fg.f));
  }
}

TEST(Membership, K) {
  for (double A : {-0.5, 0.0, 0.5}) {
    const auto p = make_atwood(A);
    for (double M : {1.5, 2.0, 8.0}) {
      const auto b = make_bounds(p, M);
      EXPECT_TRUE(in_K(State{1.0, {}, {}}, p));
      EXPECT_TRUE(in_K_M(State{1.0, {}, {}}, p, b));
    }
    EXPECT_FALSE(in_K(State{}, p));
  }
  const auto p0 = make_atwood(0.0);
  const State big{1.0, {10, 0}, {10, 0}};
  EXPECT_TRUE(in_K(big, p0));
  EXPECT_DOUBLE_EQ(b_functional(big, p0), 400.0);
  EXPECT_FALSE(in_K_M(big, p0, make_bounds(p0, 2.0)));
}

TEST(Membership, U) {
  const auto p0 = make_atwood(0.0);
  EXPECT_TRUE(in_U(State{0.0, {}, {0, -0.5}}, p0));
  EXPECT_FALSE(in_U(State{}, p0));
  EXPECT_TRUE(in_U_closed(State{}, p0));

  const auto p = make_atwood(0.5);
  const State pinch{0.0, {0, -2}, {}};
  EXPECT_FALSE(in_U(pinch, p));
  EXPECT_TRUE(in_U_closed(pinch, p));
  EXPECT_FALSE(in_U_closed(State{0.0, {0, -2}, {0.1, 0}}, p));
}

TEST(Membership, ZeroAtwoodReduction) {
  const auto p0 = make_atwood(0.0);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const State z{U(rng), {2 * U(rng), 2 * U(rng)}, {U(rng), U(rng)}};
    const double q = 1 - z.theta * z.theta;
    const bool ref = std::abs(2.0 * (z.m - z.theta * z.u) + q * I) < q;
    EXPECT_EQ(in_U(z, p0), ref);
  }
}

TEST(Membership, UM) {
  const auto p0 = make_atwood(0.0);
  const auto r = in_U_M(State{0.0, {}, {0, -0.5}}, p0, make_bounds(p0, 4.0));
  EXPECT_TRUE(r.inside);
  for (bool h : r.holds) EXPECT_TRUE(h);

  // Large velocities leave the half-plane.
  const auto p = make_atwood(0.3);
  const auto b = make_bounds(p, 3.0);
  const State far{0.0, {40, 0}, -0.5 * (p.A * Vec2(40, 0) + I)};
  ASSERT_TRUE(in_U(far, p));
  EXPECT_FALSE(in_U_M(far, p, b).holds[1]);

  const auto ph = make_atwood(0.5);
  EXPECT_FALSE(in_U_M(pinch_state(ph, 0.2), ph, make_bounds(ph, 2.0)).inside);
}

TEST(Membership, UMImpliesU) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto p = make_atwood(-0.4);
  const auto b = make_bounds(p, 3.0);
  int inside = 0;
  for (int i = 0; i < 20000; ++i) {
    const State z{U(rng), {2 * U(rng), 2 * U(rng)}, {2 * U(rng), 2 * U(rng)}};
    if (in_U_M(z, p, b).inside) {
      ++inside;
      EXPECT_TRUE(in_U(z, p));
      EXPECT_LT(std::abs(z.u), u_bound(p, b));
    }
  }
  EXPECT_GT(inside, 100);
}

TEST(Omega, Examples) {
  const auto p0 = make_atwood(0.0);
  const Vec2 w = omega_of(State{0.0, {}, {0, -0.5}}, p0);
  EXPECT_NEAR(std::abs(w - Vec2(-0.5, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(disc_T(w)), 0.0, 1e-15);
  const Vec2 w0 = omega_of(State{}, make_atwood(0.3));
  EXPECT_EQ(w0, Vec2(0.0, 0.0));
  EXPECT_EQ(std::abs(disc_T(w0)), 1.0);
  EXPECT_THROW(omega_of(State{1.0, {}, {}}, p0), DomainError);
  EXPECT_THROW(omega_of(pinch_state(make_atwood(0.5), 0.0), make_atwood(0.5)), DomainError);
}

TEST(Omega, SliceConsistency) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> U(-1.0, 1.0), UA(-0.9, 0.9);
  int mismatches = 0;
  for (int i = 0; i < 20000; ++i) {
    const auto p = make_atwood(UA(rng));
    const State z{U(rng), {2 * U(rng), 2 * U(rng)}, {2 * U(rng), 2 * U(rng)}};
    const double f = relaxation_functionals(z, p).f;
    if (std::abs(f) < 1e-9) continue;
    if (in_U(z, p) != (std::abs(disc_T(omega_of(z, p))) < 1.0)) ++mismatches;
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(Omega, BoundaryFromCircleParameter) {
  // m - theta u = (1-theta^2)(Au+i) w / (1 + w theta A) with |T(w)| = 1 puts z on the boundary.
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> U(-1.0, 1.0), ang(0.0, 2 * M_PI);
  const auto p = make_atwood(0.6);
  for (int i = 0; i < 1000; ++i) {
    const double th = 0.95 * U(rng);
    const Vec2 u{U(rng), U(rng)};
    const Vec2 wb = disc_T_inv(std::polar(1.0, ang(rng)));
    const Vec2 m = th * u + (1 - th * th) * (p.A * u + I) * wb / (1.0 + wb * th * p.A);
    const State z{th, u, m};
    EXPECT_NEAR(std::abs(disc_T(omega_of(z, p))), 1.0, 1e-10);
    EXPECT_NEAR(relaxation_functionals(z, p).f, 0.0, 1e-10);
  }
}

TEST(Sigma, Examples) {
  const auto p0 = make_atwood(0.0);
  const auto b = make_bounds(p0, 2.0);
  const auto s = sigma_pm(State{}, p0, b);
  EXPECT_NEAR(std::abs(s.plus), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(s.minus), 0.5, 1e-15);
  const double th = 0.3;
  const Vec2 u{0.2, 0.1};
  const State centre{th, u, -u - 0.5 * (1 + th) * I};
  EXPECT_NEAR(std::abs(sigma_pm(centre, p0, b).plus), 0.0, 1e-15);
  EXPECT_THROW(sigma_pm(State{1.0, {}, {}}, p0, b), DomainError);

  // sigma_+ on the unit circle exactly when m sits on the sphere of B_+.
  const auto p = make_atwood(0.4);
  const auto bb = make_bounds(p, 3.0);
  const Vec2 sig = std::polar(1.0, 0.7);
  const State on{th, u, -u + 0.5 * (1 + th) * (bb.M_plus * sig - I)};
  EXPECT_NEAR(std::abs(sigma_pm(on, p, bb).plus), 1.0, 1e-14);
  EXPECT_NEAR(u_m_margins(on, p, bb).ball_plus, 0.0, 1e-13);
}

TEST(DiscTransport, Maps) {
  const Vec2 w{0.3, -0.2};
  EXPECT_EQ(disc_transport(0.0, w, DiscMap::phi), w);
  EXPECT_NEAR(std::abs(disc_transport(0.0, disc_transport(0.0, w, DiscMap::T_inv), DiscMap::T) - w), 0.0, 1e-16);
  EXPECT_THROW(disc_transport(1.0, w, DiscMap::phi), DomainError);
  EXPECT_THROW(disc_transport(0.5, -2.0, DiscMap::phi), SingularError);
}

TEST(DiscTransport, PreservesShiftedDisc) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0), ang(0.0, 2 * M_PI), B(-0.95, 0.95);
  for (int i = 0; i < 5000; ++i) {
    const double b = B(rng);
    const Vec2 on = disc_T_inv(std::polar(1.0, ang(rng)));
    const Vec2 in = disc_T_inv(std::polar(std::sqrt(U(rng)) * 0.999, ang(rng)));
    EXPECT_NEAR(std::abs(disc_T(disc_transport(b, on, DiscMap::phi))), 1.0, 1e-12);
    EXPECT_LT(std::abs(disc_T(disc_transport(b, in, DiscMap::phi))), 1.0);
  }
  // b = theta A = 0.25
  for (int i = 0; i < 100; ++i) {
    const Vec2 on = disc_T_inv(std::polar(1.0, ang(rng)));
    EXPECT_NEAR(std::abs(disc_T(disc_transport(0.25, on, DiscMap::phi))), 1.0, 1e-13);
  }
}

TEST(PowerBalance, Examples) {
  EXPECT_EQ(power_balance(State{0.3, {}, {1, 2}}, make_atwood(0.5)), 0.0);
  EXPECT_DOUBLE_EQ(power_balance(State{1.0, {1, 0}, {1, 0}}, make_atwood(0.0)), 1.0);
  const State z{0.7, {0.4, -1.1}, {2.0, 0.3}};
  const auto p = make_atwood(-0.3);
  EXPECT_NEAR(power_balance(z, p), -det_T(z, p) / z.theta, 1e-14);
}

TEST(UBound, Examples) {
  const auto p0 = make_atwood(0.0);
  EXPECT_DOUBLE_EQ(u_bound(p0, make_bounds(p0, 2.0)), 1.5);
  const auto p = make_atwood(0.5);
  EXPECT_NEAR(u_bound(p, make_bounds(p, 2.0)), 1.5 + std::sqrt(3.75), 1e-14);
  EXPECT_NEAR(u_bound(p, make_bounds(p, 2.0)), 3.43649, 1e-5);
  double prev = 0.0;
  for (double M = 1.1; M < 20; M += 0.5) {
    const double v = u_bound(p, make_bounds(p, M));
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Pinch, CriticalBoundTouchesAllThreeSurfaces) {
  for (double A : {-0.8, -0.5, 0.3, 0.5, 0.8}) {
    const auto p = make_atwood(A);
    const auto b = make_bounds(p, p.M_star);
    for (double th : {-0.9, -0.3, 0.0, 0.4, 0.9}) {
      const auto g = u_m_margins(pinch_state(p, th), p, b);
      EXPECT_NEAR(g.half_plane, 0.0, 1e-10);
      EXPECT_NEAR(g.ball_minus, 0.0, 1e-10);
      EXPECT_NEAR(g.ball_plus, 0.0, 1e-10);
    }
  }
  EXPECT_THROW(pinch_state(make_atwood(0.0), 0.0), DomainError);
}
