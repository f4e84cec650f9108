#ifndef IPMIX_TYPES_HPP
#define IPMIX_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace ipmix {

// Points of the plane are complex numbers; I = (0,1) is the upward unit vector.
// Every product of two Vec2 values in this library is a complex product.
using Vec2 = std::complex<double>;
inline constexpr Vec2 I{0.0, 1.0};

inline double dot(Vec2 a, Vec2 b) { return a.real() * b.real() + a.imag() * b.imag(); }
// (x, y) -> (-y, x)
inline Vec2 perp(Vec2 a) { return I * a; }

// z = (theta, u, m): phase, velocity, momentum.
struct State {
  double theta = 0.0;
  Vec2 u{};
  Vec2 m{};

  State& operator+=(const State& o) { theta += o.theta; u += o.u; m += o.m; return *this; }
  State& operator-=(const State& o) { theta -= o.theta; u -= o.u; m -= o.m; return *this; }
  State& operator*=(double s) { theta *= s; u *= s; m *= s; return *this; }
};

inline State operator+(State a, const State& b) { return a += b; }
inline State operator-(State a, const State& b) { return a -= b; }
inline State operator*(double s, State a) { return a *= s; }
inline State operator*(State a, double s) { return a *= s; }

// Max-norm over the five real components.
double norm_inf(const State& z);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
// Argument outside the domain where an operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};
// Vanishing denominator.
class SingularError : public Error {
 public:
  using Error::Error;
};
// Parameter combination deliberately not handled (M equal to the critical bound).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};
class ShapeError : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ipmix

#endif
