#ifndef IPMIX_WAVE_CONE_HPP
#define IPMIX_WAVE_CONE_HPP

#include <array>
#include <functional>
#include <optional>

#include "ipmix/field.hpp"
#include "ipmix/state_geometry.hpp"

namespace ipmix {

struct LambdaDirection {
  double theta_bar = 0.0;
  Vec2 u_bar{};
  Vec2 m_bar{};
  std::optional<Vec2> omega_bar;  // set on the theta_bar != 0 branch

  State state() const { return State{theta_bar, u_bar, m_bar}; }
};

enum class ConeKind { Lambda0, Lambda1, None };

struct ConeClass {
  ConeKind kind = ConeKind::None;
  Vec2 omega_bar{};  // meaningful for Lambda1
};

ConeClass in_Lambda(const State& zbar, const AtwoodParams& p, double tol = 1e-12);

struct PlaneWaveSpec {
  double xi0 = 0.0;
  Vec2 zeta{0.0, 1.0};
  double a = 0.0;
  double b = 0.0;
  int k = 1;
  // h and its second antiderivative H (H'' = h); defaults cos and -cos.
  std::function<double(double)> h;
  std::function<double(double)> H;
  std::function<double(double)> H_prime;

  std::array<double, 3> xi() const { return {xi0, zeta.real(), zeta.imag()}; }
};

// sign = -1 flips zeta (both orientations are valid).
PlaneWaveSpec plane_wave_params(const State& zbar, const AtwoodParams& p, int sign = 1);

using Mat3 = std::array<std::array<double, 3>, 3>;

// Row 1 is (theta, m1, m2).
Mat3 T_matrix(const State& z, const AtwoodParams& p);
double det3(const Mat3& m);
std::array<double, 3> multiply(const Mat3& m, const std::array<double, 3>& v);

// P(phi, varphi) on a space-time grid.
StateField potential_field(const ScalarField& phi, const ScalarField& varphi, const AtwoodParams& p);

// Discrete residuals of the linear system, evaluated with centred differences:
// d_t theta + div m, div u, curl(u + A m + theta i).
struct LinearResiduals {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
};
// Max over nodes at distance >= margin from non-periodic edges.
LinearResiduals linear_residuals(const StateField& z, const AtwoodParams& p, int margin = 2);

struct LocalizedWave {
  StateField field;
  double sup_deviation = 0.0;
};
LocalizedWave localized_wave(const State& zbar, const ScalarField& psi, int k, const AtwoodParams& p);

// Velocity of the periodic problem, zero mean.
VectorField biot_savart(const ScalarField& theta, const VectorField& m, const AtwoodParams& p);

// Largest |u_hat(k) . k| over Fourier modes, for divergence checks.
double max_mode_divergence(const VectorField& u);

double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& f);

struct L2Report {
  double pointwise_margin = 0.0;  // max of |m| - |u| - (1+|theta|); <= 0 passes
  double u_l2 = 0.0;
  double m_l2 = 0.0;
  double u_bound = 0.0;  // (|A| ||1+|theta| ||_2 + ||theta||_2) / (1-|A|)
  double m_bound = 0.0;  // ||u||_2 + ||1+|theta| ||_2
  bool pass() const { return pointwise_margin <= 1e-12 && u_l2 <= u_bound * (1 + 1e-12) && m_l2 <= m_bound * (1 + 1e-12); }
};
L2Report l2_check(const StateField& z, const AtwoodParams& p);

}  // namespace ipmix

#endif
