#ifndef IPMIX_SUBSOLUTION_VERIFY_HPP
#define IPMIX_SUBSOLUTION_VERIFY_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "ipmix/entropy_claw.hpp"
#include "ipmix/field.hpp"

namespace ipmix {

struct SubsolutionField {
  Grid grid;  // (t, x1, x2)
  AtwoodParams params;
  double alpha = 0.5;
  std::vector<State> z;
  std::vector<std::uint8_t> mask;  // 1 inside the mixing zone

  const State& at(int it, int ix, int iy) const { return z[grid.index(it, ix, iy)]; }
  bool inside(int it, int ix, int iy) const { return mask[grid.index(it, ix, iy)] != 0; }
};

// 0 < alpha < 1.
SubsolutionField build_subsolution(const AtwoodParams& p, double alpha, const Grid& grid);
// Same construction with 0 < alpha <= 1; alpha = 1 sits on the boundary of U.
SubsolutionField build_profile_subsolution(const AtwoodParams& p, double alpha, const Grid& grid);

bool in_mixing_zone(const AtwoodParams& p, double alpha, double t, double x2);

struct TestFamilyConfig {
  int per_scale = 32;
  int scales = 3;
  std::uint64_t seed = 20240611;
};

struct WeakResiduals {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
};

// Weak forms against tensor bumps (1 - s^2)^3. Spatial gradients of the test
// functions are centred differences on the grid, time integrals use the left
// rectangle rule, so r1 is first order in the time step.
WeakResiduals weak_residuals(const SubsolutionField& field, const std::function<double(double, double)>& theta0,
                             const TestFamilyConfig& cfg = {});

struct AdmissibilityReport {
  bool strict = false;        // f < 0 at every interior node
  bool closed = false;        // f <= 1e-12 at every interior node
  double worst_f = 0.0;       // max of f over interior nodes
  double exterior_defect = 0.0;  // max of |m - theta u| + (1 - |theta|) outside
  bool pass() const { return strict && exterior_defect <= 1e-12; }
};
AdmissibilityReport admissibility(const SubsolutionField& field, const AtwoodParams& p);

struct ErrorBudget {
  std::function<double(double)> S;
  std::function<double(double)> T;
  double gamma = 0.0;
};

void validate(const ErrorBudget& eb);

struct Rect {
  double x1_lo = 0.0, x1_hi = 1.0, x2_lo = 0.0, x2_hi = 1.0;
  double area() const { return (x1_hi - x1_lo) * (x2_hi - x2_lo); }
  bool contains(double x1, double x2) const { return x1 >= x1_lo && x1 <= x1_hi && x2 >= x2_lo && x2 <= x2_hi; }
};

// Error function for the rectangle at time slice it, with distances measured
// to the boundary of the discrete mask.
double error_budget(const ErrorBudget& eb, const SubsolutionField& field, int it, const Rect& rect);

enum class Observable { identity, power };

struct RectComparison {
  double avg_micro = 0.0;
  double avg_macro = 0.0;
  double budget = 0.0;
  double margin = 0.0;  // budget - |avg_micro - avg_macro|
};

// theta_field is a spatial field of phases; the micro state is (theta, 0, 0).
std::vector<RectComparison> rectangle_compare(const ScalarField& theta_field, const SubsolutionField& field, int it,
                                              const std::vector<Rect>& rects, Observable F, const ErrorBudget& eb);

// Average over x1 of each x2 row.
std::vector<double> line_average(const ScalarField& theta_field);

struct MaxmixReport {
  double min_slack = 0.0;       // min of m2 + (1-theta^2)/(1-theta A)
  double max_equality_gap = 0.0;  // max of |m2 + (1-theta^2)/(1-theta A)| inside the mask
  bool support_ok = false;
  bool pass() const { return min_slack >= -1e-12 && support_ok; }
};
MaxmixReport maxmix_check(const SubsolutionField& field, const AtwoodParams& p);

struct InterfacePoint {
  Vec2 mean_velocity{};
  Vec2 tangent{1.0, 0.0};
  double jump = 0.0;  // value above minus value below
};

enum class Regime { stable_line, boundary_pinch, mixing };
const char* to_string(Regime r);

struct InterfaceClass {
  double varpi = 0.0;
  double sigma = 0.0;
  Regime regime = Regime::mixing;
};
InterfaceClass classify_interface(const InterfacePoint& pt, const AtwoodParams& p, double tol = 1e-12);

}  // namespace ipmix

#endif
