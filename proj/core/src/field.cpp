#include "ipmix/field.hpp"

#include <cmath>
#include <numbers>

namespace ipmix {

namespace {

bool same_axis(const Axis& a, const Axis& b) {
  return a.n == b.n && a.periodic == b.periodic && std::abs(a.step - b.step) <= 1e-14 * std::abs(a.step) &&
         std::abs(a.origin - b.origin) <= 1e-12 * (1.0 + std::abs(a.origin));
}

const Axis& axis_of(const Grid& g, Direction d) {
  switch (d) {
    case Direction::t: return g.t;
    case Direction::x1: return g.x1;
    default: return g.x2;
  }
}

// Applies a 1-D stencil operator along one axis.
template <class Op>
ScalarField along(const ScalarField& f, Direction d, Op op) {
  const Grid& g = f.grid;
  const Axis& ax = axis_of(g, d);
  ScalarField out(g, 0.0);
  if (ax.n == 1) return out;
  std::vector<double> line(ax.n), res(ax.n);
  const int n0 = g.t.n, n1 = g.x1.n, n2 = g.x2.n;
  auto idx = [&](int a, int b, int k) -> std::size_t {
    switch (d) {
      case Direction::t: return g.index(k, a, b);
      case Direction::x1: return g.index(a, k, b);
      default: return g.index(a, b, k);
    }
  };
  const int na = d == Direction::t ? n1 : n0;
  const int nb = d == Direction::x2 ? n1 : n2;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      for (int k = 0; k < ax.n; ++k) line[k] = f.values[idx(a, b, k)];
      op(line, res, ax);
      for (int k = 0; k < ax.n; ++k) out.values[idx(a, b, k)] = res[k];
    }
  return out;
}

}  // namespace

bool Grid::conforms(const Grid& o) const {
  return same_axis(t, o.t) && same_axis(x1, o.x1) && same_axis(x2, o.x2);
}

Grid Grid::torus(int n1, int n2) {
  if (n1 <= 0 || n2 <= 0) throw ShapeError("torus sizes must be positive");
  Grid g;
  const double two_pi = 2.0 * std::numbers::pi;
  g.x1 = Axis{n1, 0.0, two_pi / n1, true};
  g.x2 = Axis{n2, 0.0, two_pi / n2, true};
  return g;
}

Grid Grid::rectangle(int n1, double a1, double b1, int n2, double a2, double b2) {
  if (n1 <= 0 || n2 <= 0 || !(b1 > a1) || !(b2 > a2)) throw ShapeError("bad rectangle");
  Grid g;
  const double h1 = (b1 - a1) / n1, h2 = (b2 - a2) / n2;
  g.x1 = Axis{n1, a1 + 0.5 * h1, h1, false};
  g.x2 = Axis{n2, a2 + 0.5 * h2, h2, false};
  return g;
}

Grid Grid::with_time(int nt, double t0, double dt, bool periodic) const {
  if (nt <= 0) throw ShapeError("time axis needs at least one node");
  Grid g = *this;
  g.t = Axis{nt, t0, dt, periodic};
  return g;
}

ScalarField derivative(const ScalarField& f, Direction d) {
  return along(f, d, [](const std::vector<double>& v, std::vector<double>& r, const Axis& ax) {
    const int n = ax.n;
    const double h = ax.step;
    if (ax.periodic) {
      for (int k = 0; k < n; ++k) r[k] = (v[(k + 1) % n] - v[(k - 1 + n) % n]) / (2.0 * h);
      return;
    }
    if (n == 2) {
      r[0] = r[1] = (v[1] - v[0]) / h;
      return;
    }
    for (int k = 1; k + 1 < n; ++k) r[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
    r[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    r[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  });
}

ScalarField second_derivative(const ScalarField& f, Direction d) {
  return along(f, d, [](const std::vector<double>& v, std::vector<double>& r, const Axis& ax) {
    const int n = ax.n;
    const double h2 = ax.step * ax.step;
    if (ax.periodic) {
      for (int k = 0; k < n; ++k) r[k] = (v[(k + 1) % n] - 2.0 * v[k] + v[(k - 1 + n) % n]) / h2;
      return;
    }
    if (n < 4) {
      // too short for the one-sided second-order stencil
      for (int k = 0; k < n; ++k) r[k] = 0.0;
      if (n == 3) r[0] = r[1] = r[2] = (v[2] - 2.0 * v[1] + v[0]) / h2;
      return;
    }
    for (int k = 1; k + 1 < n; ++k) r[k] = (v[k + 1] - 2.0 * v[k] + v[k - 1]) / h2;
    r[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
    r[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) / h2;
  });
}

}  // namespace ipmix
