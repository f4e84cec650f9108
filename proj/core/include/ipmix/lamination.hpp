#ifndef IPMIX_LAMINATION_HPP
#define IPMIX_LAMINATION_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ipmix/state_geometry.hpp"
#include "ipmix/wave_cone.hpp"

namespace ipmix {

struct SegmentSolverConfig {
  double D = 0.1;
  double dykstra_tol = 1e-10;
  double bisect_tol = 1e-12;
  int max_iter = 200;
  int scan_points = 256;
  double scan_bound = 1e3;  // used when theta_bar = 0
};

void validate(const SegmentSolverConfig& cfg);

// Which inequality-slice ball decides the sign of n_bar: minus when
// |sigma_-| <= |sigma_+|.
enum class NBranch { minus, plus };
NBranch n_branch(const State& z, const AtwoodParams& p, const BoundParams& b);

// Direction (1, u_bar, m_bar) obtained from (n_bar, omega_bar).
LambdaDirection direction_from(const State& z, const AtwoodParams& p, Vec2 omega_bar, Vec2 n_bar);
Vec2 n_bar_of(const State& z, const AtwoodParams& p, Vec2 omega_bar, NBranch br);

LambdaDirection unbounded_direction(const State& z, const AtwoodParams& p);

enum class DirectionCase { pinch_band, interior, half_plane, corner, fallback };
const char* to_string(DirectionCase c);

struct BoundedDirection {
  LambdaDirection dir;
  DirectionCase which = DirectionCase::interior;
  bool warning = false;  // root solve failed, unbounded direction used instead
};
BoundedDirection bounded_direction(const State& z, const AtwoodParams& p, const BoundParams& b,
                                   const SegmentSolverConfig& cfg = {});

// First-order change of the half-plane functional along the direction built
// from omega_bar.
double b_value(const State& z, Vec2 omega_bar, const AtwoodParams& p, const BoundParams& b);
double alpha_interp(const State& z, const AtwoodParams& p, const BoundParams& b, const SegmentSolverConfig& cfg = {});
// Distance from m to the convex slice U_M(theta, u).
double slice_distance(const State& z, const AtwoodParams& p, const BoundParams& b, const SegmentSolverConfig& cfg = {});

// Empty when the discriminant is negative. Ordered s = +1, s = -1.
std::vector<Vec2> solve_b(const State& z, double alpha, const AtwoodParams& p, const BoundParams& b);

enum class SetId { U, U_M };
struct Interval {
  double minus = 0.0;
  double plus = 0.0;
  double radius() const { return std::min(-minus, plus); }
};
Interval segment_radius(const State& z, const State& zbar, SetId set, const AtwoodParams& p,
                        const std::optional<BoundParams>& b = std::nullopt, const SegmentSolverConfig& cfg = {});

// Half-width of the band |Au + i| <= gamma where U_M agrees with U. Sampled
// once per (A, M) and cached; zero when M < M_*.
double pinch_band_gamma(const AtwoodParams& p, const BoundParams& b);

struct LaminateNode {
  State state;
  double weight = 1.0;  // absolute weight in the tree
  LambdaDirection direction;  // split direction, unused on leaves
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  std::vector<LaminateNode> children;

  bool leaf() const { return children.empty(); }
};

struct LaminateTree {
  LaminateNode root;

  std::vector<const LaminateNode*> leaves() const;
  std::vector<const LaminateNode*> splits() const;
};

LaminateTree laminate_decompose(const State& z, const AtwoodParams& p);
std::string to_json(const LaminateTree& tree, int indent = 2);

State random_laminate(int depth, const AtwoodParams& p, std::mt19937_64& rng);
State random_laminate(int depth, const AtwoodParams& p, std::uint64_t seed);

struct IdentityResiduals {
  double id1 = 0.0;  // absolute
  double id1_scale = 1.0;
  double id4 = 0.0;
  double id4_scale = 1.0;
  double fg = 0.0;  // 4(1-theta A) g = f (f + 2(1-theta^2)|Au+i|)
  double fg_scale = 1.0;
  double max_relative() const;
};
IdentityResiduals identity_check(const State& z, const AtwoodParams& p, const BoundParams& b);

// f along (lambda, -i/A, 0).
std::vector<double> nonconvexity_curve(const AtwoodParams& p, const std::vector<double>& lambda_grid);

// Samplers biased toward the boundary, toward |theta| -> 1 and toward the pinch.
State sample_U(const AtwoodParams& p, std::mt19937_64& rng);
State sample_U_M(const AtwoodParams& p, const BoundParams& b, std::mt19937_64& rng);

}  // namespace ipmix

#endif
