#include "ipmix/wave_cone.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

namespace ipmix {

namespace {

double mag(const State& z) {
  return std::max({std::abs(z.theta), std::abs(z.u), std::abs(z.m)});
}

void require_conforming(const Grid& a, const Grid& b, const char* what) {
  if (!a.conforms(b)) throw ShapeError(std::string("non-conforming grids: ") + what);
}

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Fft2 {
 public:
  Fft2(int n1, int n2) : n1_(n1), n2_(n2) {
    const std::size_t n = std::size_t(n1) * n2;
    buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_2d(n1, n2, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_2d(n1, n2, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~Fft2() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }
  Fft2(const Fft2&) = delete;
  Fft2& operator=(const Fft2&) = delete;

  std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& in) {
    load(in);
    fftw_execute(fwd_);
    return store(1.0);
  }
  std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& in) {
    load(in);
    fftw_execute(bwd_);
    return store(1.0 / (double(n1_) * n2_));
  }

 private:
  void load(const std::vector<std::complex<double>>& in) {
    for (std::size_t i = 0; i < in.size(); ++i) {
      buf_[i][0] = in[i].real();
      buf_[i][1] = in[i].imag();
    }
  }
  std::vector<std::complex<double>> store(double scale) const {
    std::vector<std::complex<double>> out(std::size_t(n1_) * n2_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {buf_[i][0] * scale, buf_[i][1] * scale};
    return out;
  }

  int n1_, n2_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

// Signed integer wave number of FFT bin j; nyquist flags the unpaired bin.
int wavenumber(int j, int n, bool& nyquist) {
  nyquist = (n % 2 == 0 && j == n / 2);
  return j <= n / 2 ? j : j - n;
}

void require_torus(const Grid& g) {
  if (g.t.n != 1 || !g.x1.periodic || !g.x2.periodic) throw ShapeError("expected a spatial periodic grid");
}

}  // namespace

ConeClass in_Lambda(const State& zbar, const AtwoodParams& p, double tol) {
  const double scale = std::max(1.0, mag(zbar));
  const double A = p.A;
  if (std::abs(zbar.theta) <= tol * scale && std::abs(zbar.u + A * zbar.m) <= tol * scale)
    return {ConeKind::Lambda0, {}};
  if (zbar.theta == 0.0) return {ConeKind::None, {}};
  const Vec2 v = A * zbar.m + zbar.theta * I;
  if (std::abs(v) <= tol * scale) {
    if (std::abs(zbar.u) <= tol * scale) return {ConeKind::Lambda1, {}};
    return {ConeKind::None, {}};
  }
  const Vec2 w = zbar.u / v;
  if (std::abs(std::abs(disc_T(w)) - 1.0) <= tol) return {ConeKind::Lambda1, w};
  return {ConeKind::None, {}};
}

PlaneWaveSpec plane_wave_params(const State& zbar, const AtwoodParams& p, int sign) {
  const ConeClass cls = in_Lambda(zbar, p, 1e-12);
  if (cls.kind == ConeKind::None) throw DomainError("direction is not in the wave cone");
  if (mag(zbar) == 0.0) throw DomainError("zero direction");
  PlaneWaveSpec s;
  s.h = [](double x) { return std::cos(x); };
  s.H = [](double x) { return -std::cos(x); };
  s.H_prime = [](double x) { return std::sin(x); };
  s.a = zbar.theta;
  const double sg = sign < 0 ? -1.0 : 1.0;
  if (cls.kind == ConeKind::Lambda0) {
    s.a = 0.0;
    const double bm = std::abs(zbar.m);
    // m = b zeta_perp; with m = 0 any zeta works
    const Vec2 zperp = bm > 0.0 ? zbar.m / bm : Vec2{0.0, 1.0};
    s.zeta = sg * (-I * zperp);
    s.b = dot(zbar.m, perp(s.zeta));
    s.xi0 = 0.0;
    return s;
  }
  const Vec2 v = p.A * zbar.m + s.a * I;
  // on the cone omega_bar * v is u itself; use it directly, v can be tiny near the pinch
  const Vec2 wv = zbar.u;
  Vec2 zeta;
  if (std::abs(wv) <= 1e-14 * std::max(1.0, std::abs(v))) {
    zeta = std::abs(v) > 0.0 ? v / std::abs(v) : Vec2{0.0, 1.0};
  } else {
    zeta = -I * (wv / std::abs(wv));
  }
  s.zeta = sg * zeta;
  s.xi0 = -dot(zbar.m, s.zeta) / s.a;
  s.b = dot(zbar.m, perp(s.zeta));
  return s;
}

Mat3 T_matrix(const State& z, const AtwoodParams& p) {
  const double A = p.A;
  const double u1 = z.u.real(), u2 = z.u.imag(), m1 = z.m.real(), m2 = z.m.imag();
  return Mat3{{{z.theta, m1, m2}, {0.0, u1, u2}, {0.0, u2 + A * m2 + z.theta, -u1 - A * m1}}};
}

double det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::array<double, 3> multiply(const Mat3& m, const std::array<double, 3>& v) {
  std::array<double, 3> r{};
  for (int i = 0; i < 3; ++i) r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return r;
}

StateField potential_field(const ScalarField& phi, const ScalarField& varphi, const AtwoodParams& p) {
  require_conforming(phi.grid, varphi.grid, "potential_field");
  const ScalarField p11 = second_derivative(phi, Direction::x1);
  const ScalarField p22 = second_derivative(phi, Direction::x2);
  const ScalarField p1 = derivative(phi, Direction::x1);
  const ScalarField p2 = derivative(phi, Direction::x2);
  ScalarField w = p1;
  for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] += p.A * varphi.values[i];
  const ScalarField w1 = derivative(w, Direction::x1);
  const ScalarField w2 = derivative(w, Direction::x2);
  const ScalarField v1 = derivative(varphi, Direction::x1);
  const ScalarField v2 = derivative(varphi, Direction::x2);
  const ScalarField pt1 = derivative(p1, Direction::t);
  const ScalarField pt2 = derivative(p2, Direction::t);
  StateField z(phi.grid);
  for (std::size_t i = 0; i < z.values.size(); ++i) {
    z.values[i].theta = p11.values[i] + p22.values[i];
    z.values[i].u = {w2.values[i], -w1.values[i]};
    z.values[i].m = {-v2.values[i] - pt1.values[i], v1.values[i] - pt2.values[i]};
  }
  return z;
}

LinearResiduals linear_residuals(const StateField& z, const AtwoodParams& p, int margin) {
  const Grid& g = z.grid;
  auto comp = [&](auto get) {
    ScalarField f(g);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = get(z.values[i]);
    return f;
  };
  const ScalarField th = comp([](const State& s) { return s.theta; });
  const ScalarField u1 = comp([](const State& s) { return s.u.real(); });
  const ScalarField u2 = comp([](const State& s) { return s.u.imag(); });
  const ScalarField m1 = comp([](const State& s) { return s.m.real(); });
  const ScalarField m2 = comp([](const State& s) { return s.m.imag(); });
  const double A = p.A;
  const ScalarField th_t = derivative(th, Direction::t);
  const ScalarField th_1 = derivative(th, Direction::x1);
  const ScalarField m1_1 = derivative(m1, Direction::x1), m1_2 = derivative(m1, Direction::x2);
  const ScalarField m2_1 = derivative(m2, Direction::x1), m2_2 = derivative(m2, Direction::x2);
  const ScalarField u1_1 = derivative(u1, Direction::x1), u1_2 = derivative(u1, Direction::x2);
  const ScalarField u2_1 = derivative(u2, Direction::x1), u2_2 = derivative(u2, Direction::x2);

  auto range = [margin](const Axis& ax, int& lo, int& hi) {
    lo = 0;
    hi = ax.n;
    if (!ax.periodic && ax.n > 1) {
      lo = margin;
      hi = ax.n - margin;
    }
  };
  int t0, t1, a0, a1, b0, b1;
  range(g.t, t0, t1);
  range(g.x1, a0, a1);
  range(g.x2, b0, b1);
  LinearResiduals r;
  for (int it = t0; it < t1; ++it)
    for (int ix = a0; ix < a1; ++ix)
      for (int iy = b0; iy < b1; ++iy) {
        const std::size_t k = g.index(it, ix, iy);
        r.t1 = std::max(r.t1, std::abs(th_t.values[k] + m1_1.values[k] + m2_2.values[k]));
        r.t2 = std::max(r.t2, std::abs(u1_1.values[k] + u2_2.values[k]));
        const double curl = (u2_1.values[k] + A * m2_1.values[k] + th_1.values[k]) - (u1_2.values[k] + A * m1_2.values[k]);
        r.t3 = std::max(r.t3, std::abs(curl));
      }
  return r;
}

LocalizedWave localized_wave(const State& zbar, const ScalarField& psi, int k, const AtwoodParams& p) {
  if (k <= 0) throw DomainError("k must be positive");
  const Grid& g = psi.grid;
  LocalizedWave out;
  out.field = StateField(g);
  if (mag(zbar) == 0.0) return out;
  const PlaneWaveSpec s = plane_wave_params(zbar, p);
  const ScalarField pt = derivative(psi, Direction::t);
  const ScalarField p1 = derivative(psi, Direction::x1);
  const ScalarField p2 = derivative(psi, Direction::x2);
  const ScalarField p11 = second_derivative(psi, Direction::x1);
  const ScalarField p22 = second_derivative(psi, Direction::x2);
  const ScalarField p12 = derivative(p1, Direction::x2);
  const ScalarField pt1 = derivative(p1, Direction::t);
  const ScalarField pt2 = derivative(p2, Direction::t);
  const double kk = k, a = s.a, b = s.b, A = p.A;
  const std::array<double, 3> xi = s.xi();

  // Only psi is differenced; the oscillating factor is differentiated exactly.
  for (int it = 0; it < g.t.n; ++it)
    for (int ix = 0; ix < g.x1.n; ++ix)
      for (int iy = 0; iy < g.x2.n; ++iy) {
        const std::size_t n = g.index(it, ix, iy);
        const double arg = kk * (xi[0] * g.t.coord(it) + xi[1] * g.x1.coord(ix) + xi[2] * g.x2.coord(iy));
        const double H = s.H(arg), Hp = s.H_prime(arg), h = s.h(arg);
        const double Phi = a / (kk * kk) * H;
        auto dPhi = [&](int mu) { return a / kk * Hp * xi[mu]; };
        auto ddPhi = [&](int mu, int nu) { return a * h * xi[mu] * xi[nu]; };
        const double V = b / kk * Hp;
        auto dV = [&](int mu) { return b * h * xi[mu]; };

        const double ps = psi.values[n];
        const double d[3] = {pt.values[n], p1.values[n], p2.values[n]};
        const double d11 = p11.values[n], d22 = p22.values[n], d12 = p12.values[n];
        const double dt1 = pt1.values[n], dt2 = pt2.values[n];

        State z;
        z.theta = ddPhi(1, 1) * ps + 2.0 * dPhi(1) * d[1] + Phi * d11 + ddPhi(2, 2) * ps + 2.0 * dPhi(2) * d[2] + Phi * d22;
        const double d1j[3] = {0.0, d11, d12};
        auto wj = [&](int j) {
          return ddPhi(1, j) * ps + dPhi(1) * d[j] + dPhi(j) * d[1] + Phi * d1j[j] + A * (dV(j) * ps + V * d[j]);
        };
        z.u = {wj(2), -wj(1)};
        auto vphi_j = [&](int j) { return dV(j) * ps + V * d[j]; };
        const double dtj[3] = {0.0, dt1, dt2};
        auto phi_tj = [&](int j) { return ddPhi(0, j) * ps + dPhi(0) * d[j] + dPhi(j) * d[0] + Phi * dtj[j]; };
        z.m = {-vphi_j(2) - phi_tj(1), vphi_j(1) - phi_tj(2)};
        out.field.values[n] = z;
        out.sup_deviation = std::max(out.sup_deviation, norm_inf(z - (h * ps) * zbar));
      }
  return out;
}

VectorField biot_savart(const ScalarField& theta, const VectorField& m, const AtwoodParams& p) {
  require_conforming(theta.grid, m.grid, "biot_savart");
  require_torus(theta.grid);
  const Grid& g = theta.grid;
  const int n1 = g.x1.n, n2 = g.x2.n;
  const std::size_t n = g.size();
  std::vector<std::complex<double>> w1(n), w2(n);
  for (std::size_t i = 0; i < n; ++i) {
    w1[i] = p.A * m.values[i].real();
    w2[i] = p.A * m.values[i].imag() + theta.values[i];
  }
  Fft2 fft(n1, n2);
  const auto h1 = fft.forward(w1), h2 = fft.forward(w2);
  std::vector<std::complex<double>> uh1(n), uh2(n);
  const double s1 = 2.0 * std::numbers::pi / g.x1.length(), s2 = 2.0 * std::numbers::pi / g.x2.length();
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      bool ny1, ny2;
      const double k1 = s1 * wavenumber(i, n1, ny1), k2 = s2 * wavenumber(j, n2, ny2);
      const std::size_t q = std::size_t(i) * n2 + j;
      if ((i == 0 && j == 0) || ny1 || ny2) continue;
      const double kk = k1 * k1 + k2 * k2;
      const std::complex<double> s = -k2 * h1[q] + k1 * h2[q];
      uh1[q] = k2 * s / kk;
      uh2[q] = -k1 * s / kk;
    }
  const auto u1 = fft.inverse(uh1), u2 = fft.inverse(uh2);
  VectorField u(g);
  for (std::size_t i = 0; i < n; ++i) u.values[i] = {u1[i].real(), u2[i].real()};
  return u;
}

double max_mode_divergence(const VectorField& u) {
  const Grid& g = u.grid;
  require_torus(g);
  const int n1 = g.x1.n, n2 = g.x2.n;
  const std::size_t n = g.size();
  std::vector<std::complex<double>> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = u.values[i].real();
    b[i] = u.values[i].imag();
  }
  Fft2 fft(n1, n2);
  const auto ha = fft.forward(a), hb = fft.forward(b);
  const double s1 = 2.0 * std::numbers::pi / g.x1.length(), s2 = 2.0 * std::numbers::pi / g.x2.length();
  double worst = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      bool ny1, ny2;
      const double k1 = s1 * wavenumber(i, n1, ny1), k2 = s2 * wavenumber(j, n2, ny2);
      if (ny1 || ny2) continue;
      const std::size_t q = std::size_t(i) * n2 + j;
      worst = std::max(worst, std::abs(k1 * ha[q] + k2 * hb[q]) / double(n));
    }
  return worst;
}

double l2_norm(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.values) s += v * v;
  return std::sqrt(s * f.grid.x1.step * f.grid.x2.step);
}

double l2_norm(const VectorField& f) {
  double s = 0.0;
  for (const Vec2& v : f.values) s += std::norm(v);
  return std::sqrt(s * f.grid.x1.step * f.grid.x2.step);
}

L2Report l2_check(const StateField& z, const AtwoodParams& p) {
  L2Report r;
  r.pointwise_margin = -std::numeric_limits<double>::infinity();
  double su = 0.0, sm = 0.0, sth = 0.0, sone = 0.0;
  for (const State& s : z.values) {
    r.pointwise_margin = std::max(r.pointwise_margin, std::abs(s.m) - std::abs(s.u) - (1.0 + std::abs(s.theta)));
    su += std::norm(s.u);
    sm += std::norm(s.m);
    sth += s.theta * s.theta;
    sone += (1.0 + std::abs(s.theta)) * (1.0 + std::abs(s.theta));
  }
  const double w = z.grid.x1.step * z.grid.x2.step;
  r.u_l2 = std::sqrt(su * w);
  r.m_l2 = std::sqrt(sm * w);
  const double one = std::sqrt(sone * w), th = std::sqrt(sth * w);
  r.u_bound = (std::abs(p.A) * one + th) / (1.0 - std::abs(p.A));
  r.m_bound = r.u_l2 + one;
  return r;
}

}  // namespace ipmix
