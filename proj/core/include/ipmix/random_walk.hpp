#ifndef IPMIX_RANDOM_WALK_HPP
#define IPMIX_RANDOM_WALK_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "ipmix/state_geometry.hpp"

namespace ipmix {

// Lattice of n_cols x n_rows cells of size r, advanced in steps of length h.
// The mean-field limit mixes at speed alpha = c a / 2 where r = c h.
struct WalkConfig {
  AtwoodParams params;
  int n_cols = 256;
  int n_rows = 0;
  double r = 0.0;
  double h = 0.0;
  double c = 0.0;
  int steps = 0;
  std::uint64_t seed = 1;

  double alpha() const { return 0.5 * c * params.a; }
  double time() const { return steps * h; }
};

// Config reaching time T with mixing speed alpha; rows are sized so the
// fronts never reach the lattice edge.
WalkConfig make_walk_config(const AtwoodParams& p, double alpha, double h, double T, int n_cols, std::uint64_t seed);
void validate(const WalkConfig& cfg);

double swap_probability(double theta_mean, const AtwoodParams& p);

struct Lattice {
  int n_cols = 0;
  int n_rows = 0;
  long step = 0;
  std::vector<std::int8_t> values;  // column-major: values[s * n_rows + row]

  std::int8_t at(int s, int row) const { return values[std::size_t(s) * n_rows + row]; }
  std::int8_t& at(int s, int row) { return values[std::size_t(s) * n_rows + row]; }
  // Row index of lattice level j = 0, the first row above the interface.
  int j0() const { return n_rows / 2; }
  long mass() const;
};

// +1 on rows j >= 0, -1 below.
Lattice flat_lattice(int n_cols, int n_rows);
double row_x2(const WalkConfig& cfg, int row);

// One independent generator per column, derived from the master seed.
class ColumnStreams {
 public:
  ColumnStreams(std::uint64_t seed, int n_cols);
  std::mt19937_64& operator[](int s) { return gens_[s]; }

 private:
  std::vector<std::mt19937_64> gens_;
};

// simultaneous: every unstable pair (+1 above -1) present at the start of the
// step may swap; such pairs never share a cell.
// checkerboard: pairs whose upper level j is even first, then odd ones, so a
// cell can move twice per step.
// Swap probability uses the upper row's mean from before the step.
enum class Schedule { simultaneous, checkerboard };

void mc_step_columns(Lattice& lat, const std::vector<double>& row_means, const AtwoodParams& p, ColumnStreams& rng,
                     int col_begin, int col_end, Schedule schedule = Schedule::simultaneous);
void mc_step(Lattice& lat, const AtwoodParams& p, ColumnStreams& rng, Schedule schedule = Schedule::simultaneous);

std::vector<double> line_average(const Lattice& lat);

// Mean-field recursion; nothing crosses the first or last row, as on the lattice.
std::vector<double> recursion_step(const std::vector<double>& theta, const AtwoodParams& p);

struct RecursionRun {
  std::vector<double> times;
  std::vector<std::vector<double>> theta;
};
RecursionRun recursion_run(const std::vector<double>& theta0, const AtwoodParams& p, double c, double h, int steps,
                           int record_every = 1);

// Runs the recursion in its two-probability form alongside the phase form.
struct RecursionIdentity {
  double sum_defect = 0.0;    // max |d+ + d- - 1|
  double phase_defect = 0.0;  // max |theta - (d+ - d-)|
};
RecursionIdentity recursion_identity(const std::vector<double>& theta0, const AtwoodParams& p, int steps);

struct Fronts {
  double top = 0.0;     // x2 where the average first drops to 1 - tau from above
  double bottom = 0.0;  // x2 where it first rises to -1 + tau from below
};
Fronts front_positions(const std::vector<double>& avg, const WalkConfig& cfg, double tau = 0.01);

struct WalkOptions {
  int snapshot_every = 0;  // 0: initial and final only
  int threads = 1;
  Schedule schedule = Schedule::simultaneous;
  double front_level = 0.01;
};

struct WalkArtifacts {
  std::vector<long> snapshot_steps;
  std::vector<Lattice> snapshots;
  std::vector<double> final_average;
  std::vector<double> recursion_final;
  std::vector<double> exact_final;
  long initial_mass = 0;
  long final_mass = 0;
  double sup_mc_recursion = 0.0;
  double l1_mc_recursion = 0.0;
  double max_sigma_ratio = 0.0;  // max over rows of |mc - rec| / sqrt((1 - rec^2)/n_cols)
  double sup_recursion_exact = 0.0;
  double l1_recursion_exact = 0.0;
  double sup_mc_exact = 0.0;
  Fronts mc_fronts;
  Fronts recursion_fronts;
};

WalkArtifacts run_simulation(const WalkConfig& cfg, const WalkOptions& opt = {});

}  // namespace ipmix

#endif
