#ifndef IPMIX_FIELD_HPP
#define IPMIX_FIELD_HPP

#include <cstddef>
#include <vector>

#include "ipmix/types.hpp"

namespace ipmix {

struct Axis {
  int n = 1;
  double origin = 0.0;
  double step = 1.0;
  bool periodic = false;

  double coord(int i) const { return origin + step * i; }
  double length() const { return step * n; }
};

// Uniform samples over (t, x1, x2). A purely spatial field has t.n == 1.
struct Grid {
  Axis t, x1, x2;

  std::size_t size() const { return std::size_t(t.n) * x1.n * x2.n; }
  std::size_t index(int it, int ix, int iy) const {
    return (std::size_t(it) * x1.n + ix) * x2.n + iy;
  }
  bool conforms(const Grid& o) const;

  // [0, 2pi)^2 with n1 x n2 nodes.
  static Grid torus(int n1, int n2);
  // Cell centres of [a1,b1] x [a2,b2].
  static Grid rectangle(int n1, double a1, double b1, int n2, double a2, double b2);
  // Adds a time axis t_k = t0 + k dt, k = 0..nt-1, to a spatial grid.
  Grid with_time(int nt, double t0, double dt, bool periodic = false) const;
};

template <class T>
struct Field {
  Grid grid;
  std::vector<T> values;

  Field() = default;
  explicit Field(const Grid& g, const T& fill = T{}) : grid(g), values(g.size(), fill) {}

  T& at(int it, int ix, int iy) { return values[grid.index(it, ix, iy)]; }
  const T& at(int it, int ix, int iy) const { return values[grid.index(it, ix, iy)]; }
};

using ScalarField = Field<double>;
using VectorField = Field<Vec2>;
using StateField = Field<State>;

enum class Direction { t = 0, x1 = 1, x2 = 2 };

// Second-order centred difference; periodic wrap on periodic axes, second-order
// one-sided stencils at the ends otherwise. Zero along axes with a single node.
ScalarField derivative(const ScalarField& f, Direction d);
ScalarField second_derivative(const ScalarField& f, Direction d);

}  // namespace ipmix

#endif
