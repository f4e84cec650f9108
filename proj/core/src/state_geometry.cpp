#include "ipmix/state_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ipmix {

double norm_inf(const State& z) {
  return std::max({std::abs(z.theta), std::abs(z.u.real()), std::abs(z.u.imag()),
                   std::abs(z.m.real()), std::abs(z.m.imag())});
}

AtwoodParams make_atwood(double A) {
  if (!(std::abs(A) < 1.0)) throw DomainError("Atwood number must satisfy |A| < 1, got " + std::to_string(A));
  AtwoodParams p;
  p.A = A;
  p.c_plus = 2.0 / (1.0 - A);
  p.c_minus = 2.0 / (1.0 + A);
  p.B = (1.0 + A) / (1.0 - A);
  p.a = 0.5 * (1.0 - std::abs(A));
  p.M_star = A == 0.0 ? std::numeric_limits<double>::infinity()
                      : std::sqrt(1.0 + 4.0 * (1.0 / (A * A) - 1.0));
  return p;
}

BoundParams make_bounds(const AtwoodParams& p, double M) {
  if (!(M > 1.0)) throw DomainError("bound M must exceed 1");
  BoundParams b;
  b.M = M;
  b.M_plus = std::sqrt((M * M + p.A) / (1.0 + p.A));
  b.M_minus = std::sqrt((M * M - p.A) / (1.0 - p.A));
  return b;
}

double det_T(const State& z, const AtwoodParams& p) {
  return -z.theta * dot(z.u, z.u + p.A * z.m + z.theta * I);
}

Functionals relaxation_functionals(const State& z, const AtwoodParams& p) {
  const double th = z.theta, A = p.A;
  const double one_m = 1.0 - th * th;
  const Vec2 w = A * z.u + I;
  const Vec2 d = z.m - th * z.u;
  Functionals out;
  out.f = std::abs(2.0 * (1.0 - th * A) * d + one_m * w) - one_m * std::abs(w);
  out.g = dot((1.0 - th * A) * d + one_m * w, d);
  return out;
}

double b_functional(const State& z, const AtwoodParams& p) {
  return 4.0 * dot(z.u, z.u + p.A * z.m + z.theta * I + p.A * I);
}

double power_balance(const State& z, const AtwoodParams& p) {
  return dot(z.u, z.u + p.A * z.m + z.theta * I);
}

bool in_K(const State& z, const AtwoodParams&, double tol) {
  return std::abs(std::abs(z.theta) - 1.0) <= tol && std::abs(z.m - z.theta * z.u) <= tol;
}

bool in_K_M(const State& z, const AtwoodParams& p, const BoundParams& b, double tol) {
  return in_K(z, p, tol) && b_functional(z, p) <= b.M * b.M - 1.0 + tol;
}

double pinch_threshold(const State& z) { return 1e-14 * (1.0 + std::abs(z.u)); }

bool at_pinch(const State& z, const AtwoodParams& p) {
  return std::abs(p.A * z.u + I) <= pinch_threshold(z);
}

bool in_U(const State& z, const AtwoodParams& p) {
  if (!(std::abs(z.theta) < 1.0)) return false;
  if (at_pinch(z, p)) return false;
  return relaxation_functionals(z, p).f < 0.0;
}

bool in_U_closed(const State& z, const AtwoodParams& p, double tol) {
  const double at = std::abs(z.theta);
  if (at > 1.0 + tol) return false;
  if (at >= 1.0 || at_pinch(z, p))
    return std::abs(z.m - z.theta * z.u) <= std::max(tol, 1e-12) * (1.0 + std::abs(z.u));
  return relaxation_functionals(z, p).f <= tol;
}

double UMMargins::min() const { return std::min({disc, half_plane, ball_minus, ball_plus}); }

UMMargins u_m_margins(const State& z, const AtwoodParams& p, const BoundParams& b) {
  const double th = z.theta;
  UMMargins g;
  g.disc = -relaxation_functionals(z, p).f;
  g.half_plane = b.M * b.M - 1.0 - b_functional(z, p);
  g.ball_minus = b.M_minus * (1.0 - th) - std::abs(2.0 * (z.m - z.u) + (1.0 - th) * I);
  g.ball_plus = b.M_plus * (1.0 + th) - std::abs(2.0 * (z.m + z.u) + (1.0 + th) * I);
  return g;
}

UMMembership in_U_M(const State& z, const AtwoodParams& p, const BoundParams& b) {
  const UMMargins g = u_m_margins(z, p, b);
  UMMembership r;
  r.holds = {in_U(z, p), g.half_plane > 0.0, g.ball_minus > 0.0, g.ball_plus > 0.0};
  r.inside = r.holds[0] && r.holds[1] && r.holds[2] && r.holds[3];
  return r;
}

bool in_U_M_strict(const State& z, const AtwoodParams& p, const BoundParams& b) {
  return in_U_M(z, p, b).inside;
}

Vec2 omega_of(const State& z, const AtwoodParams& p) {
  const double th = z.theta;
  if (!(std::abs(th) < 1.0)) throw DomainError("omega_of needs |theta| < 1");
  if (at_pinch(z, p)) throw DomainError("omega_of is undefined at the pinch Au + i = 0");
  const Vec2 d = z.m - th * z.u;
  const Vec2 den = (1.0 - th * th) * (p.A * z.u + I) - th * p.A * d;
  if (std::abs(den) == 0.0) throw SingularError("omega_of: vanishing denominator");
  return d / den;
}

SliceSigma sigma_pm(const State& z, const AtwoodParams&, const BoundParams& b) {
  const double th = z.theta;
  if (!(std::abs(th) < 1.0)) throw DomainError("sigma_pm needs |theta| < 1");
  SliceSigma s;
  s.plus = (2.0 * (z.m + z.u) + (1.0 + th) * I) / (b.M_plus * (1.0 + th));
  s.minus = (2.0 * (z.m - z.u) + (1.0 - th) * I) / (b.M_minus * (1.0 - th));
  return s;
}

Vec2 disc_transport(Vec2 b, Vec2 w, DiscMap mode) {
  switch (mode) {
    case DiscMap::T:
      return disc_T(w);
    case DiscMap::T_inv:
      return disc_T_inv(w);
    case DiscMap::phi: {
      if (!(std::abs(b) < 1.0)) throw DomainError("phi_b needs |b| < 1");
      const Vec2 den = 1.0 + w * b;
      if (std::abs(den) == 0.0) throw SingularError("phi_b: 1 + wb = 0");
      return (1.0 - b) * w / den;
    }
  }
  return w;
}

double u_bound(const AtwoodParams& p, const BoundParams& b) {
  const double a = std::abs(p.A), M2 = b.M * b.M;
  return ((1.0 + a) + std::sqrt((1.0 + a) * (1.0 + a) + (1.0 - a) * (M2 - 1.0))) / (2.0 * (1.0 - a));
}

State pinch_state(const AtwoodParams& p, double theta) {
  if (p.A == 0.0) throw DomainError("no pinch for A = 0");
  State z;
  z.theta = theta;
  z.u = -I / p.A;
  z.m = theta * z.u;
  return z;
}

}  // namespace ipmix
