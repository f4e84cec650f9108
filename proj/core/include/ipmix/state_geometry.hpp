#ifndef IPMIX_STATE_GEOMETRY_HPP
#define IPMIX_STATE_GEOMETRY_HPP

#include <array>
#include <limits>

#include "ipmix/types.hpp"

namespace ipmix {

struct AtwoodParams {
  double A = 0.0;
  double c_plus = 2.0;   // 2/(1-A)
  double c_minus = 2.0;  // 2/(1+A)
  double B = 1.0;        // mobility quotient (1+A)/(1-A)
  double a = 0.5;        // lattice swap rate (1-|A|)/2
  double M_star = std::numeric_limits<double>::infinity();
};

AtwoodParams make_atwood(double A);

struct BoundParams {
  double M = 2.0;
  double M_plus = 2.0;   // sqrt((M^2+A)/(1+A))
  double M_minus = 2.0;  // sqrt((M^2-A)/(1-A))
};

BoundParams make_bounds(const AtwoodParams& p, double M);

double det_T(const State& z, const AtwoodParams& p);

struct Functionals {
  double f = 0.0;
  double g = 0.0;
};
Functionals relaxation_functionals(const State& z, const AtwoodParams& p);

// 4u.(u + Am + theta i + A i); the half-plane constraint reads B < M^2 - 1.
double b_functional(const State& z, const AtwoodParams& p);
// u.(u + Am + theta i)
double power_balance(const State& z, const AtwoodParams& p);

bool in_K(const State& z, const AtwoodParams& p, double tol = 1e-12);
bool in_K_M(const State& z, const AtwoodParams& p, const BoundParams& b, double tol = 1e-12);

// |Au + i| at or below this is treated as the pinch.
double pinch_threshold(const State& z);
bool at_pinch(const State& z, const AtwoodParams& p);

bool in_U(const State& z, const AtwoodParams& p);
// Closure of U. tol loosens f <= 0 to f <= tol for roundoff-level checks.
bool in_U_closed(const State& z, const AtwoodParams& p, double tol = 0.0);

struct UMMembership {
  bool inside = false;
  // relaxation disc, half-plane, ball B_-, ball B_+
  std::array<bool, 4> holds{};
};
UMMembership in_U_M(const State& z, const AtwoodParams& p, const BoundParams& b);
bool in_U_M_strict(const State& z, const AtwoodParams& p, const BoundParams& b);

// Signed slacks (positive means strictly inside) of the four inequalities.
struct UMMargins {
  double disc = 0.0;
  double half_plane = 0.0;
  double ball_minus = 0.0;
  double ball_plus = 0.0;
  double min() const;
};
UMMargins u_m_margins(const State& z, const AtwoodParams& p, const BoundParams& b);

Vec2 omega_of(const State& z, const AtwoodParams& p);

struct SliceSigma {
  Vec2 minus{};
  Vec2 plus{};
};
SliceSigma sigma_pm(const State& z, const AtwoodParams& p, const BoundParams& b);

enum class DiscMap { T, T_inv, phi };
// T(w) = 2w+1, its inverse, or phi_b(w) = (1-b)w/(1+wb).
Vec2 disc_transport(Vec2 b, Vec2 w, DiscMap mode);
inline Vec2 disc_T(Vec2 w) { return 2.0 * w + 1.0; }
inline Vec2 disc_T_inv(Vec2 t) { return 0.5 * (t - 1.0); }
// disc_T_inv for |e| = 1 without cancellation when e is near 1.
inline Vec2 omega_on_S(Vec2 e) {
  const double c = e.real(), s = e.imag();
  return 0.5 * Vec2(c > 0.0 ? -s * s / (1.0 + c) : c - 1.0, s);
}

double u_bound(const AtwoodParams& p, const BoundParams& b);

// (theta, -i/A, -theta i/A): the state where Au + i vanishes on the closure.
State pinch_state(const AtwoodParams& p, double theta);

}  // namespace ipmix

#endif
