#include "ipmix/entropy_claw.hpp"

#include <algorithm>
#include <cmath>

namespace ipmix {

EntropyProfile make_profile(const AtwoodParams& p, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  return EntropyProfile{p, alpha};
}

double theta_interior(const AtwoodParams& p, double t, double x2, ProfileForm form) {
  const double A = p.A;
  if (A == 0.0) return x2 / (2.0 * t);
  const double s = t + A * x2;
  switch (form) {
    case ProfileForm::ratio:
      return (x2 + A * t) / (s + std::sqrt((1.0 - A * A) * t * s));
    case ProfileForm::sqrt_b: {
      const double r = std::sqrt(p.B * t * s);
      return ((x2 - t) + r) / (s + r);
    }
    case ProfileForm::reduced:
      return (1.0 - std::sqrt((1.0 - A * A) * t / s)) / A;
  }
  return 0.0;
}

double theta_exact(const EntropyProfile& prof, double t, double x2) {
  if (!(t > 0.0)) throw DomainError("theta_exact needs t > 0");
  const AtwoodParams& p = prof.params;
  const double ts = prof.alpha * t;
  if (x2 >= p.c_plus * ts) return 1.0;
  if (x2 <= -p.c_minus * ts) return -1.0;
  return std::clamp(theta_interior(p, ts, x2), -1.0, 1.0);
}

double flux(double theta, const AtwoodParams& p) {
  return (1.0 - theta * theta) / (1.0 - theta * p.A);
}

double flux_prime(double theta, const AtwoodParams& p) {
  const double A = p.A, d = 1.0 - theta * A;
  return (-2.0 * theta * d + A * (1.0 - theta * theta)) / (d * d);
}

double flux_critical_point(const AtwoodParams& p) {
  const double A = p.A;
  if (A == 0.0) return 0.0;
  // root of A s^2 - 2 s + A in [-1, 1], written without cancellation
  return A / (1.0 + std::sqrt(1.0 - A * A));
}

void validate(const ClawConfig& cfg) {
  if (!(cfg.x_max > cfg.x_min)) throw ConfigError("empty interval");
  if (cfg.n_cells < 2) throw ConfigError("need at least two cells");
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 0.45)) throw ConfigError("CFL number must lie in (0, 0.45]");
  if (cfg.snapshots < 2) throw ConfigError("need at least two snapshots");
  if (std::abs(cfg.left_value) > 1.0 || std::abs(cfg.right_value) > 1.0) throw ConfigError("ghost values must lie in [-1, 1]");
}

std::vector<double> flat_datum(const ClawConfig& cfg) {
  std::vector<double> v(cfg.n_cells);
  const double h = cfg.dx();
  for (int j = 0; j < cfg.n_cells; ++j) {
    const double a = cfg.x_min + j * h, b = a + h;
    if (a >= 0.0)
      v[j] = 1.0;
    else if (b <= 0.0)
      v[j] = -1.0;
    else
      v[j] = (b + a) / h;  // (b - 0 - (0 - a)) / h
  }
  return v;
}

namespace {

// F = -alpha G is convex with its minimum at s*.
struct ConvexFlux {
  const AtwoodParams& p;
  double alpha;
  double s_star;

  double F(double v) const { return -alpha * flux(v, p); }

  double numerical(double a, double b, NumericalFlux scheme) const {
    if (scheme == NumericalFlux::engquist_osher) return F(std::max(a, s_star)) + F(std::min(b, s_star)) - F(s_star);
    if (a <= b) return F(std::clamp(s_star, a, b));
    return std::max(F(a), F(b));
  }
};

void claw_step(const std::vector<double>& u, std::vector<double>& v, std::vector<double>& fx, const ConvexFlux& fl,
               double r, const ClawConfig& cfg) {
  const int n = int(u.size());
  for (int j = 1; j < n; ++j) fx[j] = fl.numerical(u[j - 1], u[j], cfg.scheme);
  if (cfg.boundary == Boundary::reflecting) {
    fx[0] = fx[n] = 0.0;
  } else {
    fx[0] = fl.numerical(cfg.left_value, u[0], cfg.scheme);
    fx[n] = fl.numerical(u[n - 1], cfg.right_value, cfg.scheme);
  }
  for (int j = 0; j < n; ++j) v[j] = std::clamp(u[j] - r * (fx[j + 1] - fx[j]), -1.0, 1.0);
}

}  // namespace

ClawSolution solve_claw(const std::vector<double>& theta0, const AtwoodParams& p, double alpha, double T,
                        const ClawConfig& cfg) {
  validate(cfg);
  if (int(theta0.size()) != cfg.n_cells) throw ShapeError("initial datum does not match the cell count");
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (!(T >= 0.0)) throw DomainError("final time must be non-negative");
  for (double v : theta0)
    if (!(std::abs(v) <= 1.0)) throw DomainError("initial datum must lie in [-1, 1]");

  const int n = cfg.n_cells;
  const double dx = cfg.dx();
  const double speed = alpha * std::max(p.c_plus, p.c_minus);
  const int steps = T == 0.0 ? 0 : int(std::ceil(T * speed / (cfg.cfl * dx)));
  const double dt = steps == 0 ? 0.0 : T / steps;
  const ConvexFlux fl{p, alpha, flux_critical_point(p)};

  ClawSolution sol;
  sol.x.resize(n);
  for (int j = 0; j < n; ++j) sol.x[j] = cfg.center(j);
  sol.steps = steps;
  sol.dt = dt;

  std::vector<int> marks(cfg.snapshots);
  for (int s = 0; s < cfg.snapshots; ++s) marks[s] = int(std::llround(double(steps) * s / (cfg.snapshots - 1)));

  std::vector<double> u = theta0, v(n), fx(n + 1);
  std::size_t next = 0;
  auto record = [&](int k) {
    while (next < marks.size() && marks[next] == k) {
      sol.times.push_back(k * dt);
      sol.snapshots.push_back(u);
      ++next;
    }
  };
  record(0);
  const double r = dt / dx;
  for (int k = 1; k <= steps; ++k) {
    claw_step(u, v, fx, fl, r, cfg);
    u.swap(v);
    record(k);
  }
  return sol;
}

double l1_error(const std::vector<double>& cells, const ClawConfig& cfg, const EntropyProfile& prof, double t) {
  const double h = cfg.dx();
  double e = 0.0;
  for (int j = 0; j < cfg.n_cells; ++j) {
    // cell average of the exact profile by 4-point Gauss-Legendre
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
    const double c = cfg.center(j);
    double avg = 0.0;
    for (int q = 0; q < 4; ++q) avg += 0.5 * gw[q] * theta_exact(prof, t, c + 0.5 * h * gx[q]);
    e += std::abs(cells[j] - avg) * h;
  }
  return e;
}

double entropy_residual(const std::vector<double>& theta0, const AtwoodParams& p, double alpha, double T, double k,
                        const ClawConfig& cfg) {
  ClawConfig c = cfg;
  c.snapshots = 2;
  const ClawSolution probe = solve_claw(theta0, p, alpha, 0.0, c);
  const int n = cfg.n_cells;
  const double dx = cfg.dx();
  const double speed = alpha * std::max(p.c_plus, p.c_minus);
  const int steps = T == 0.0 ? 0 : int(std::ceil(T * speed / (cfg.cfl * dx)));
  const double r = steps == 0 ? 0.0 : T / steps / dx;
  const ConvexFlux fl{p, alpha, flux_critical_point(p)};
  // numerical entropy flux for |theta - k|
  auto q = [&](double a, double b) {
    return fl.numerical(std::max(a, k), std::max(b, k), cfg.scheme) - fl.numerical(std::min(a, k), std::min(b, k), cfg.scheme);
  };
  std::vector<double> u = probe.final(), v(n), fx(n + 1), qx(n + 1);
  double worst = 0.0;
  for (int s = 0; s < steps; ++s) {
    claw_step(u, v, fx, fl, r, cfg);
    for (int j = 1; j < n; ++j) qx[j] = q(u[j - 1], u[j]);
    if (cfg.boundary == Boundary::reflecting) {
      qx[0] = qx[n] = 0.0;
    } else {
      qx[0] = q(cfg.left_value, u[0]);
      qx[n] = q(u[n - 1], cfg.right_value);
    }
    for (int j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(v[j] - k) - std::abs(u[j] - k) + r * (qx[j + 1] - qx[j]));
    u.swap(v);
  }
  return worst;
}

double profile_antiderivative(const AtwoodParams& p, double t, double x2) {
  const double A = p.A;
  if (A == 0.0) return x2 * x2 / (4.0 * t);
  return (A * x2 - 2.0 * std::sqrt((1.0 - A * A) * t * (t + A * x2))) / (A * A);
}

double mean_interval(const EntropyProfile& prof, double l1, double l2) {
  const AtwoodParams& p = prof.params;
  const double al = prof.alpha, A = p.A;
  if (!(l1 < l2)) throw DomainError("mean_interval needs l1 < l2");
  const double eps = 1e-14 * al * std::max(p.c_plus, p.c_minus);
  if (l1 < -al * p.c_minus - eps || l2 > al * p.c_plus + eps) throw DomainError("interval leaves the mixing zone");
  if (A == 0.0) return (l1 + l2) / (4.0 * al);
  const double s1 = std::sqrt(std::max(0.0, al + A * l1)), s2 = std::sqrt(std::max(0.0, al + A * l2));
  return (1.0 - 2.0 * std::sqrt((1.0 - A * A) * al) / (s1 + s2)) / A;
}

Vec2 m_breve(double theta, const AtwoodParams& p, double alpha) {
  if (std::abs(theta) >= 1.0) return 0.0;
  return -alpha * flux(theta, p) * I;
}

namespace {

class FreeBoundary {
 public:
  FreeBoundary(const AtwoodParams& p, int sign, double dt)
      : p_(p), sign_(sign), dt_(dt), t0_(1.0 / (sign > 0 ? p.c_plus : p.c_minus)) {}

  // f at time T; steps are committed on the grid t0 + k dt only.
  double at(double T) {
    if (T <= t0_) return 0.0;
    if (!started_) {
      t_ = t0_;
      f_ = 0.0;
      started_ = true;
    }
    while (!collapsed_ && t_ + dt_ <= T) advance(dt_);
    if (collapsed_) return T >= tc_ ? 1.0 : partial(T);
    return partial(T);
  }
  bool collapsed() const { return collapsed_; }
  std::optional<double> t_collapse() const { return collapsed_ ? std::optional<double>(tc_) : std::nullopt; }

 private:
  double rhs(double t, double f) const {
    const double x = sign_ * (1.0 - f);
    const double th = theta_interior(p_, t, x);
    return (1.0 - sign_ * th) / (1.0 - th * p_.A);
  }
  double rk4(double t, double f, double h) const {
    const double k1 = rhs(t, f);
    const double k2 = rhs(t + 0.5 * h, f + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, f + 0.5 * h * k2);
    const double k4 = rhs(t + h, f + h * k3);
    return f + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  void advance(double h) {
    const double fn = rk4(t_, f_, h);
    if (fn < 1.0) {
      t_ += h;
      f_ = fn;
      return;
    }
    double lo = 0.0, hi = h;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      (rk4(t_, f_, mid) >= 1.0 ? hi : lo) = mid;
    }
    tc_ = t_ + hi;
    collapsed_ = true;
  }
  double partial(double T) const {
    if (T <= t_) return f_;
    return std::min(1.0, rk4(t_, f_, T - t_));
  }

  const AtwoodParams& p_;
  int sign_;
  double dt_, t0_;
  bool started_ = false, collapsed_ = false;
  double t_ = 0.0, f_ = 0.0, tc_ = 0.0;
};

}  // namespace

double confined_theta(const AtwoodParams& p, const FreeBoundaryState& s, double x2) {
  if (s.collapsed) return x2 < 0.0 ? 1.0 : -1.0;
  const double t = s.t;
  if (t <= 0.0) return x2 > 0.0 ? 1.0 : -1.0;
  if (p.c_plus * t > 1.0) {
    if (x2 > 1.0 - s.f_plus) return -1.0;
  } else if (x2 >= p.c_plus * t) {
    return 1.0;
  }
  if (p.c_minus * t > 1.0) {
    if (x2 < -(1.0 - s.f_minus)) return 1.0;
  } else if (x2 <= -p.c_minus * t) {
    return -1.0;
  }
  return std::clamp(theta_interior(p, t, x2), -1.0, 1.0);
}

double confined_mass(const AtwoodParams& p, const FreeBoundaryState& s) {
  if (s.collapsed || s.t <= 0.0) return 0.0;
  const double t = s.t;
  double hi, lo, mass = 0.0;
  if (p.c_plus * t > 1.0) {
    hi = 1.0 - s.f_plus;
    mass -= 1.0 - hi;
  } else {
    hi = p.c_plus * t;
    mass += 1.0 - hi;
  }
  if (p.c_minus * t > 1.0) {
    lo = -(1.0 - s.f_minus);
    mass += lo + 1.0;
  } else {
    lo = -p.c_minus * t;
    mass -= lo + 1.0;
  }
  if (hi > lo) mass += profile_antiderivative(p, t, hi) - profile_antiderivative(p, t, lo);
  return mass;
}

ConfinedRun confined_run(const AtwoodParams& p, double dt, const ConfinedConfig& cfg) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  if (!(cfg.output_dt > 0.0) || !(cfg.t_end >= 0.0)) throw ConfigError("bad output schedule");
  FreeBoundary up(p, +1, dt), down(p, -1, dt);
  ConfinedRun run;
  const long n_out = std::lround(std::floor(cfg.t_end / cfg.output_dt + 1e-9));
  for (long k = 0; k <= n_out; ++k) {
    FreeBoundaryState s;
    s.t = k * cfg.output_dt;
    s.f_plus = up.at(s.t);
    s.f_minus = down.at(s.t);
    const auto tp = up.t_collapse(), tm = down.t_collapse();
    if (tp && tm && s.t >= std::max(*tp, *tm)) {
      s.collapsed = true;
      s.t_collapse = std::max(*tp, *tm);
    }
    s.mass = confined_mass(p, s);
    run.trajectory.push_back(s);
  }
  // keep integrating past t_end if needed so the collapse times are reported
  const double horizon = std::max(cfg.t_end, 100.0);
  if (!up.collapsed()) up.at(horizon);
  if (!down.collapsed()) down.at(horizon);
  run.t_collapse_plus = up.t_collapse();
  run.t_collapse_minus = down.t_collapse();
  return run;
}

ProfileReport profile_props(const EntropyProfile& prof) {
  const AtwoodParams& p = prof.params;
  const double A = p.A;
  ProfileReport r;
  const double t = 1.0, ts = prof.alpha * t;
  const double lo = -p.c_minus * ts, hi = p.c_plus * ts;
  const double e = 1e-9 * (hi - lo);
  r.continuous_at_edges = std::abs(theta_exact(prof, t, hi - e) - 1.0) <= 1e-6 &&
                          std::abs(theta_exact(prof, t, lo + e) + 1.0) <= 1e-6;

  const int n = 2000;
  std::vector<double> v(n + 1);
  for (int k = 0; k <= n; ++k) v[k] = theta_interior(p, ts, lo + (hi - lo) * (k + 0.5) / (n + 1));
  r.increasing = true;
  for (int k = 1; k <= n; ++k) r.increasing = r.increasing && v[k] > v[k - 1];
  r.curvature_sign = true;
  for (int k = 1; k < n; ++k) {
    const double d2 = v[k + 1] - 2.0 * v[k] + v[k - 1];
    if (A == 0.0)
      r.curvature_sign = r.curvature_sign && std::abs(d2) <= 1e-12;
    else
      r.curvature_sign = r.curvature_sign && (A > 0.0 ? d2 < 0.0 : d2 > 0.0);
  }

  const EntropyProfile mirror{make_atwood(-A), prof.alpha};
  for (int k = 0; k < 200; ++k) {
    const double tt = 0.1 + 0.05 * k;
    const double tau = 0.3 + 0.07 * (k % 17);
    const double x = (lo + (hi - lo) * ((k * 37) % 200) / 199.0) * tt * 1.2;
    r.self_similarity = std::max(r.self_similarity, std::abs(theta_exact(prof, tt, x) - theta_exact(prof, tau, tau * x / tt)));
    r.antisymmetry = std::max(r.antisymmetry, std::abs(theta_exact(mirror, tt, x) + theta_exact(prof, tt, -x)));
  }
  const double h = 1e-5;
  r.slope_at_origin = (theta_exact(prof, 1.0, h) - theta_exact(prof, 1.0, -h)) / (2.0 * h);
  return r;
}

}  // namespace ipmix
