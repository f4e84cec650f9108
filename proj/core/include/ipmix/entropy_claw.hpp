#ifndef IPMIX_ENTROPY_CLAW_HPP
#define IPMIX_ENTROPY_CLAW_HPP

#include <optional>
#include <vector>

#include "ipmix/state_geometry.hpp"

namespace ipmix {

struct EntropyProfile {
  AtwoodParams params;
  double alpha = 1.0;
};

EntropyProfile make_profile(const AtwoodParams& p, double alpha);

// Theta_A(alpha t, x2).
double theta_exact(const EntropyProfile& prof, double t, double x2);

// The three equivalent expressions inside the mixing zone (unscaled time).
enum class ProfileForm { ratio, sqrt_b, reduced };
double theta_interior(const AtwoodParams& p, double t, double x2, ProfileForm form = ProfileForm::ratio);

// G(theta) = (1 - theta^2)/(1 - theta A); the conservation law is
// d_t theta = alpha d_x2 G(theta).
double flux(double theta, const AtwoodParams& p);
double flux_prime(double theta, const AtwoodParams& p);
// Maximiser of G on [-1, 1].
double flux_critical_point(const AtwoodParams& p);

enum class NumericalFlux { godunov, engquist_osher };
enum class Boundary { dirichlet, reflecting };

struct ClawConfig {
  double x_min = -3.0;
  double x_max = 3.0;
  int n_cells = 1600;
  double cfl = 0.45;
  NumericalFlux scheme = NumericalFlux::godunov;
  Boundary boundary = Boundary::dirichlet;
  double left_value = -1.0;   // ghost state below x_min
  double right_value = 1.0;   // ghost state above x_max
  int snapshots = 2;          // equally spaced in time, including t = 0 and t = T

  double dx() const { return (x_max - x_min) / n_cells; }
  double center(int j) const { return x_min + (j + 0.5) * dx(); }
};

void validate(const ClawConfig& cfg);

struct ClawSolution {
  std::vector<double> x;
  std::vector<double> times;
  std::vector<std::vector<double>> snapshots;
  int steps = 0;
  double dt = 0.0;

  const std::vector<double>& final() const { return snapshots.back(); }
};

// Cell averages of the unstable planar datum on the configured grid.
std::vector<double> flat_datum(const ClawConfig& cfg);

ClawSolution solve_claw(const std::vector<double>& theta0, const AtwoodParams& p, double alpha, double T,
                        const ClawConfig& cfg = {});

// Discrete L1 distance between a cell-average array and theta_exact at time t.
double l1_error(const std::vector<double>& cells, const ClawConfig& cfg, const EntropyProfile& prof, double t);

// Largest positive part of the discrete Kruzhkov entropy production over one
// run, for entropy |theta - k|.
double entropy_residual(const std::vector<double>& theta0, const AtwoodParams& p, double alpha, double T, double k,
                        const ClawConfig& cfg);

// Mean of Theta_A(alpha, .) over (l1, l2).
double mean_interval(const EntropyProfile& prof, double l1, double l2);
// Antiderivative in x2 of Theta_A(t, .) inside the mixing zone.
double profile_antiderivative(const AtwoodParams& p, double t, double x2);

Vec2 m_breve(double theta, const AtwoodParams& p, double alpha);

struct FreeBoundaryState {
  double t = 0.0;
  double f_plus = 0.0;
  double f_minus = 0.0;
  bool collapsed = false;
  std::optional<double> t_collapse;
  double mass = 0.0;
};

struct ConfinedConfig {
  double t_end = 2.5;
  double output_dt = 0.01;
};

struct ConfinedRun {
  std::vector<FreeBoundaryState> trajectory;
  std::optional<double> t_collapse_plus;
  std::optional<double> t_collapse_minus;
};

ConfinedRun confined_run(const AtwoodParams& p, double dt, const ConfinedConfig& cfg = {});
double confined_theta(const AtwoodParams& p, const FreeBoundaryState& s, double x2);
double confined_mass(const AtwoodParams& p, const FreeBoundaryState& s);

struct ProfileReport {
  bool continuous_at_edges = false;
  bool increasing = false;
  bool curvature_sign = false;  // sign of second difference equals -sign(A)
  double self_similarity = 0.0;  // max deviation
  double antisymmetry = 0.0;     // max deviation
  double slope_at_origin = 0.0;  // d_x2 Theta at (1, 0)
  bool pass() const { return continuous_at_edges && increasing && curvature_sign && self_similarity <= 1e-12 && antisymmetry <= 1e-12; }
};
ProfileReport profile_props(const EntropyProfile& prof);

}  // namespace ipmix

#endif
