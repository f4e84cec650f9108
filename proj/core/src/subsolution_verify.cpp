#include "ipmix/subsolution_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace ipmix {

bool in_mixing_zone(const AtwoodParams& p, double alpha, double t, double x2) {
  return t > 0.0 && x2 > -alpha * p.c_minus * t && x2 < alpha * p.c_plus * t;
}

namespace {

SubsolutionField build(const AtwoodParams& p, double alpha, const Grid& grid) {
  SubsolutionField out;
  out.grid = grid;
  out.params = p;
  out.alpha = alpha;
  out.z.resize(grid.size());
  out.mask.assign(grid.size(), 0);
  const EntropyProfile prof{p, alpha};
  for (int it = 0; it < grid.t.n; ++it) {
    const double t = grid.t.coord(it);
    for (int iy = 0; iy < grid.x2.n; ++iy) {
      const double x2 = grid.x2.coord(iy);
      double th;
      if (t > 0.0)
        th = theta_exact(prof, t, x2);
      else
        th = x2 > 0.0 ? 1.0 : (x2 < 0.0 ? -1.0 : 0.0);
      const bool mix = in_mixing_zone(p, alpha, t, x2);
      const State z{th, 0.0, mix ? m_breve(th, p, alpha) : Vec2{}};
      for (int ix = 0; ix < grid.x1.n; ++ix) {
        const std::size_t k = grid.index(it, ix, iy);
        out.z[k] = z;
        out.mask[k] = mix ? 1 : 0;
      }
    }
  }
  return out;
}

double bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return q * q * q;
}

struct TestFunction {
  double c1, r1, c2, r2, a;
};

}  // namespace

SubsolutionField build_subsolution(const AtwoodParams& p, double alpha, const Grid& grid) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  return build(p, alpha, grid);
}

SubsolutionField build_profile_subsolution(const AtwoodParams& p, double alpha, const Grid& grid) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  return build(p, alpha, grid);
}

WeakResiduals weak_residuals(const SubsolutionField& field, const std::function<double(double, double)>& theta0,
                             const TestFamilyConfig& cfg) {
  const Grid& g = field.grid;
  const int nt = g.t.n, n1 = g.x1.n, n2 = g.x2.n;
  const double h1 = g.x1.step, h2 = g.x2.step, dA = h1 * h2;
  const double A = field.params.A;
  const double lo1 = g.x1.coord(0), hi1 = g.x1.coord(n1 - 1);
  const double lo2 = g.x2.coord(0), hi2 = g.x2.coord(n2 - 1);
  const double t0 = g.t.coord(0), T = g.t.coord(nt - 1);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<TestFunction> family;
  for (int s = 0; s < cfg.scales; ++s) {
    const double r1 = 0.5 * (hi1 - lo1) * std::pow(0.5, s), r2 = 0.5 * (hi2 - lo2) * std::pow(0.5, s);
    for (int k = 0; k < cfg.per_scale; ++k) {
      TestFunction f;
      f.r1 = std::max(r1 - 2.0 * h1, 2.0 * h1);
      f.r2 = std::max(r2 - 2.0 * h2, 2.0 * h2);
      const double s1 = std::max(0.0, hi1 - lo1 - 2.0 * (f.r1 + h1)), s2 = std::max(0.0, hi2 - lo2 - 2.0 * (f.r2 + h2));
      f.c1 = lo1 + f.r1 + h1 + s1 * U(rng);
      f.c2 = lo2 + f.r2 + h2 + s2 * U(rng);
      f.a = U(rng) - 0.5;
      family.push_back(f);
    }
  }

  WeakResiduals res;
  std::vector<double> X(n1), DX(n1), Y(n2), DY(n2);
  for (const TestFunction& f : family) {
    for (int i = 0; i < n1; ++i) {
      const double x = g.x1.coord(i);
      X[i] = bump((x - f.c1) / f.r1);
      DX[i] = (bump((x + h1 - f.c1) / f.r1) - bump((x - h1 - f.c1) / f.r1)) / (2.0 * h1);
    }
    for (int j = 0; j < n2; ++j) {
      const double y = g.x2.coord(j);
      Y[j] = bump((y - f.c2) / f.r2);
      DY[j] = (bump((y + h2 - f.c2) / f.r2) - bump((y - h2 - f.c2) / f.r2)) / (2.0 * h2);
    }
    const double span = T > t0 ? T - t0 : 1.0;
    auto tau = [&](double t) { return 1.0 + f.a * (t - t0) / span; };
    const double dtau = f.a / span;

    double bulk = 0.0;
    for (int it = 0; it < nt; ++it) {
      const double t = g.t.coord(it);
      double s1 = 0.0, s2 = 0.0, s3 = 0.0;
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
          const State& z = field.at(it, i, j);
          const double ph = X[i] * Y[j], p1 = DX[i] * Y[j], p2 = X[i] * DY[j];
          s1 += z.theta * dtau * ph + tau(t) * (z.m.real() * p1 + z.m.imag() * p2);
          s2 += z.u.real() * p1 + z.u.imag() * p2;
          s3 += -(z.u.real() + A * z.m.real()) * p2 + (z.u.imag() + A * z.m.imag() + z.theta) * p1;
        }
      res.r2 = std::max(res.r2, std::abs(s2 * dA));
      res.r3 = std::max(res.r3, std::abs(s3 * dA));
      if (it + 1 < nt) bulk += s1 * dA * g.t.step;
    }
    double end = 0.0, start = 0.0;
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        const double ph = X[i] * Y[j];
        end += field.at(nt - 1, i, j).theta * ph;
        start += theta0(g.x1.coord(i), g.x2.coord(j)) * ph;
      }
    const double r1 = bulk - (tau(T) * end - tau(t0) * start) * dA;
    res.r1 = std::max(res.r1, std::abs(r1));
  }
  return res;
}

AdmissibilityReport admissibility(const SubsolutionField& field, const AtwoodParams& p) {
  AdmissibilityReport r;
  r.worst_f = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 0; k < field.z.size(); ++k) {
    const State& z = field.z[k];
    if (field.mask[k]) {
      any = true;
      double f = relaxation_functionals(z, p).f;
      if (!(std::abs(z.theta) < 1.0) || at_pinch(z, p)) f = std::numeric_limits<double>::infinity();
      r.worst_f = std::max(r.worst_f, f);
    } else {
      r.exterior_defect = std::max(r.exterior_defect, std::abs(z.m - z.theta * z.u) + (1.0 - std::abs(z.theta)));
    }
  }
  if (!any) r.worst_f = 0.0;
  r.strict = !any || r.worst_f < 0.0;
  r.closed = !any || r.worst_f <= 1e-12;
  return r;
}

void validate(const ErrorBudget& eb) {
  if (!eb.S || !eb.T) throw ConfigError("error budget needs both error functions");
  if (!(eb.gamma >= 0.0 && eb.gamma < 1.0)) throw ConfigError("gamma must lie in [0, 1)");
  if (eb.S(0.0) != 0.0 || eb.T(0.0) != 0.0) throw ConfigError("error functions must vanish at 0");
}

namespace {

void require_inside(const SubsolutionField& field, int it, const Rect& rect) {
  const Grid& g = field.grid;
  bool any = false;
  for (int i = 0; i < g.x1.n; ++i)
    for (int j = 0; j < g.x2.n; ++j)
      if (rect.contains(g.x1.coord(i), g.x2.coord(j))) {
        any = true;
        if (!field.inside(it, i, j)) throw DomainError("rectangle leaves the mixing zone");
      }
  if (!any) throw DomainError("rectangle contains no grid node");
}

}  // namespace

double error_budget(const ErrorBudget& eb, const SubsolutionField& field, int it, const Rect& rect) {
  validate(eb);
  const Grid& g = field.grid;
  if (it < 0 || it >= g.t.n) throw ShapeError("time index out of range");
  const double t = g.t.coord(it);
  if (t <= 0.0) return 0.0;
  require_inside(field, it, rect);

  // faces between cells of different mask value, as segments a-b
  std::vector<std::pair<Vec2, Vec2>> faces;
  const double hh1 = 0.5 * g.x1.step, hh2 = 0.5 * g.x2.step;
  for (int i = 0; i < g.x1.n; ++i)
    for (int j = 0; j < g.x2.n; ++j) {
      const bool in = field.inside(it, i, j);
      const double x = g.x1.coord(i), y = g.x2.coord(j);
      if (j + 1 < g.x2.n && in != field.inside(it, i, j + 1))
        faces.push_back({{x - hh1, y + hh2}, {x + hh1, y + hh2}});
      if (i + 1 < g.x1.n && in != field.inside(it, i + 1, j))
        faces.push_back({{x + hh1, y - hh2}, {x + hh1, y + hh2}});
    }
  auto seg_dist = [](Vec2 q, Vec2 a, Vec2 b) {
    const Vec2 d = b - a;
    const double s = std::clamp(dot(q - a, d) / std::norm(d), 0.0, 1.0);
    return std::abs(q - (a + s * d));
  };
  double sup = 1.0;
  if (!faces.empty()) {
    std::vector<Vec2> pts{{rect.x1_lo, rect.x2_lo}, {rect.x1_hi, rect.x2_lo}, {rect.x1_lo, rect.x2_hi}, {rect.x1_hi, rect.x2_hi}};
    for (int i = 0; i < g.x1.n; ++i)
      for (int j = 0; j < g.x2.n; ++j)
        if (rect.contains(g.x1.coord(i), g.x2.coord(j))) pts.emplace_back(g.x1.coord(i), g.x2.coord(j));
    sup = 0.0;
    for (const Vec2& x : pts) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& [a, b] : faces) d = std::min(d, seg_dist(x, a, b));
      sup = std::max(sup, d);
    }
  }
  const double area = rect.area();
  return eb.S(std::min(1.0, sup)) * eb.T(t) * std::min(1.0, std::pow(area, eb.gamma)) / area;
}

std::vector<RectComparison> rectangle_compare(const ScalarField& theta_field, const SubsolutionField& field, int it,
                                              const std::vector<Rect>& rects, Observable F, const ErrorBudget& eb) {
  const Grid& g = field.grid;
  if (theta_field.grid.x1.n != g.x1.n || theta_field.grid.x2.n != g.x2.n) throw ShapeError("phase field does not match the subsolution grid");
  const AtwoodParams& p = field.params;
  std::vector<RectComparison> out;
  for (const Rect& R : rects) {
    RectComparison c;
    long count = 0;
    for (int i = 0; i < g.x1.n; ++i)
      for (int j = 0; j < g.x2.n; ++j) {
        if (!R.contains(g.x1.coord(i), g.x2.coord(j))) continue;
        const State& zb = field.at(it, i, j);
        const double th = theta_field.at(0, i, j);
        if (F == Observable::identity) {
          c.avg_micro += th;
          c.avg_macro += zb.theta;
        } else {
          c.avg_micro += power_balance(State{th, 0.0, 0.0}, p);
          c.avg_macro += power_balance(zb, p);
        }
        ++count;
      }
    if (count == 0) throw DomainError("rectangle contains no grid node");
    c.avg_micro /= double(count);
    c.avg_macro /= double(count);
    c.budget = error_budget(eb, field, it, R);
    c.margin = c.budget - std::abs(c.avg_micro - c.avg_macro);
    out.push_back(c);
  }
  return out;
}

std::vector<double> line_average(const ScalarField& theta_field) {
  const Grid& g = theta_field.grid;
  std::vector<double> out(g.x2.n, 0.0);
  for (int j = 0; j < g.x2.n; ++j) {
    double s = 0.0;
    for (int i = 0; i < g.x1.n; ++i) s += theta_field.at(0, i, j);
    out[j] = s / g.x1.n;
  }
  return out;
}

MaxmixReport maxmix_check(const SubsolutionField& field, const AtwoodParams& p) {
  const Grid& g = field.grid;
  MaxmixReport r;
  r.min_slack = std::numeric_limits<double>::infinity();
  r.support_ok = true;
  for (int it = 0; it < g.t.n; ++it) {
    const double t = g.t.coord(it);
    for (int i = 0; i < g.x1.n; ++i)
      for (int j = 0; j < g.x2.n; ++j) {
        const State& z = field.at(it, i, j);
        const double slack = z.m.imag() + flux(z.theta, p);
        r.min_slack = std::min(r.min_slack, slack);
        if (field.inside(it, i, j)) r.max_equality_gap = std::max(r.max_equality_gap, std::abs(slack));
        const double x2 = g.x2.coord(j);
        if (t > 0.0 && x2 >= p.c_plus * t && z.theta != 1.0) r.support_ok = false;
        if (t > 0.0 && x2 <= -p.c_minus * t && z.theta != -1.0) r.support_ok = false;
      }
  }
  return r;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::stable_line: return "stable_line";
    case Regime::boundary_pinch: return "boundary_pinch";
    case Regime::mixing: return "mixing";
  }
  return "?";
}

InterfaceClass classify_interface(const InterfacePoint& pt, const AtwoodParams& p, double tol) {
  if (std::abs(std::abs(pt.tangent) - 1.0) > 1e-9) throw DomainError("tangent must be a unit vector");
  const Vec2 v = -pt.jump * std::conj(p.A * pt.mean_velocity + I) * pt.tangent;
  InterfaceClass c;
  c.varpi = v.real();
  c.sigma = v.imag();
  if (std::abs(c.varpi) + std::abs(c.sigma) <= tol)
    c.regime = Regime::boundary_pinch;
  else if (std::abs(c.varpi) <= tol && c.sigma > 0.0)
    c.regime = Regime::stable_line;
  else
    c.regime = Regime::mixing;
  return c;
}

}  // namespace ipmix
