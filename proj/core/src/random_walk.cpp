#include "ipmix/random_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "ipmix/entropy_claw.hpp"

namespace ipmix {

WalkConfig make_walk_config(const AtwoodParams& p, double alpha, double h, double T, int n_cols, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (!(h > 0.0) || !(T >= 0.0)) throw DomainError("step and horizon must be positive");
  WalkConfig cfg;
  cfg.params = p;
  cfg.h = h;
  cfg.c = 2.0 * alpha / p.a;
  cfg.r = cfg.c * h;
  cfg.steps = int(std::lround(T / h));
  cfg.n_cols = n_cols;
  cfg.n_rows = 2 * (cfg.steps + 2);
  cfg.seed = seed;
  validate(cfg);
  return cfg;
}

void validate(const WalkConfig& cfg) {
  if (cfg.n_cols <= 0 || cfg.n_rows <= 1 || cfg.n_rows % 2 != 0) throw ConfigError("lattice needs positive columns and an even row count");
  if (cfg.steps < 0) throw ConfigError("negative step count");
  if (!(cfg.h > 0.0) || !(cfg.c > 0.0)) throw ConfigError("h and c must be positive");
  if (!(cfg.c * cfg.params.a < 2.0)) throw ConfigError("c must stay below 2/a so that alpha < 1");
  if (std::abs(cfg.r - cfg.c * cfg.h) > 1e-12 * cfg.r) throw ConfigError("cell size must equal c h");
}

double swap_probability(double theta_mean, const AtwoodParams& p) {
  return p.a / (1.0 - theta_mean * p.A);
}

long Lattice::mass() const {
  return std::accumulate(values.begin(), values.end(), 0L, [](long s, std::int8_t v) { return s + v; });
}

Lattice flat_lattice(int n_cols, int n_rows) {
  Lattice lat;
  lat.n_cols = n_cols;
  lat.n_rows = n_rows;
  lat.values.resize(std::size_t(n_cols) * n_rows);
  for (int s = 0; s < n_cols; ++s)
    for (int r = 0; r < n_rows; ++r) lat.at(s, r) = r >= lat.j0() ? 1 : -1;
  return lat;
}

double row_x2(const WalkConfig& cfg, int row) { return cfg.r * (row - cfg.n_rows / 2 + 0.5); }

ColumnStreams::ColumnStreams(std::uint64_t seed, int n_cols) {
  gens_.reserve(n_cols);
  for (int s = 0; s < n_cols; ++s) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(s), 0x6d69780u};
    gens_.emplace_back(seq);
  }
}

void mc_step_columns(Lattice& lat, const std::vector<double>& row_means, const AtwoodParams& p, ColumnStreams& rng,
                     int col_begin, int col_end, Schedule schedule) {
  const int n = lat.n_rows;
  std::vector<double> prob(n);
  for (int r = 0; r < n; ++r) prob[r] = swap_probability(row_means[r], p);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int s = col_begin; s < col_end; ++s) {
    std::int8_t* col = &lat.values[std::size_t(s) * n];
    auto& gen = rng[s];
    if (schedule == Schedule::simultaneous) {
      int r = n - 1;
      while (r >= 1) {
        if (col[r] == 1 && col[r - 1] == -1) {
          if (U(gen) < prob[r]) std::swap(col[r], col[r - 1]);
          r -= 2;  // the lower cell belongs to this pair
        } else {
          r -= 1;
        }
      }
    } else {
      const int j0 = n / 2;
      for (int parity = 0; parity < 2; ++parity)
        for (int r = n - 1; r >= 1; --r)
          if (((r - j0) % 2 + 2) % 2 == parity && col[r] == 1 && col[r - 1] == -1 && U(gen) < prob[r]) std::swap(col[r], col[r - 1]);
    }
  }
}

void mc_step(Lattice& lat, const AtwoodParams& p, ColumnStreams& rng, Schedule schedule) {
  const std::vector<double> means = line_average(lat);
  mc_step_columns(lat, means, p, rng, 0, lat.n_cols, schedule);
  ++lat.step;
}

std::vector<double> line_average(const Lattice& lat) {
  std::vector<long> sum(lat.n_rows, 0);
  for (int s = 0; s < lat.n_cols; ++s) {
    const std::int8_t* col = &lat.values[std::size_t(s) * lat.n_rows];
    for (int r = 0; r < lat.n_rows; ++r) sum[r] += col[r];
  }
  std::vector<double> out(lat.n_rows);
  for (int r = 0; r < lat.n_rows; ++r) out[r] = double(sum[r]) / lat.n_cols;
  return out;
}

std::vector<double> recursion_step(const std::vector<double>& th, const AtwoodParams& p) {
  const int n = int(th.size());
  std::vector<double> out(n);
  for (int r = 0; r < n; ++r) {
    const double me = th[r];
    const double in = r + 1 < n ? swap_probability(th[r + 1], p) * (1.0 + th[r + 1]) * (1.0 - me) : 0.0;
    const double outf = r > 0 ? swap_probability(me, p) * (1.0 + me) * (1.0 - th[r - 1]) : 0.0;
    out[r] = std::clamp(me + 0.5 * (in - outf), -1.0, 1.0);
  }
  return out;
}

RecursionRun recursion_run(const std::vector<double>& theta0, const AtwoodParams& p, double c, double h, int steps,
                           int record_every) {
  for (double v : theta0)
    if (!(std::abs(v) <= 1.0)) throw DomainError("recursion values must lie in [-1, 1]");
  if (record_every <= 0) throw ConfigError("record interval must be positive");
  (void)c;
  RecursionRun run;
  std::vector<double> th = theta0;
  run.times.push_back(0.0);
  run.theta.push_back(th);
  for (int k = 1; k <= steps; ++k) {
    th = recursion_step(th, p);
    if (k % record_every == 0 || k == steps) {
      run.times.push_back(k * h);
      run.theta.push_back(th);
    }
  }
  return run;
}

RecursionIdentity recursion_identity(const std::vector<double>& theta0, const AtwoodParams& p, int steps) {
  const int n = int(theta0.size());
  std::vector<double> th = theta0, dp(n), dm(n), np(n), nm(n);
  for (int r = 0; r < n; ++r) {
    dp[r] = 0.5 * (1.0 + th[r]);
    dm[r] = 0.5 * (1.0 - th[r]);
  }
  RecursionIdentity out;
  for (int k = 0; k < steps; ++k) {
    for (int r = 0; r < n; ++r) {
      const double pu = r + 1 < n ? swap_probability(dp[r + 1] - dm[r + 1], p) : 0.0;
      const double dpu = r + 1 < n ? dp[r + 1] : 0.0;
      const double pm = swap_probability(dp[r] - dm[r], p);
      const double dmd = r > 0 ? dm[r - 1] : 0.0;
      const double gain = pu * dpu * dm[r], loss = pm * dp[r] * dmd;
      np[r] = dp[r] + gain - loss;
      nm[r] = dm[r] - gain + loss;
    }
    dp.swap(np);
    dm.swap(nm);
    th = recursion_step(th, p);
    for (int r = 0; r < n; ++r) {
      out.sum_defect = std::max(out.sum_defect, std::abs(dp[r] + dm[r] - 1.0));
      out.phase_defect = std::max(out.phase_defect, std::abs(th[r] - (dp[r] - dm[r])));
    }
  }
  return out;
}

Fronts front_positions(const std::vector<double>& avg, const WalkConfig& cfg, double tau) {
  const int n = int(avg.size());
  Fronts f;
  const double top_level = 1.0 - tau, bot_level = -1.0 + tau;
  for (int r = n - 1; r > 0; --r) {
    if (avg[r - 1] <= top_level && avg[r] > top_level) {
      const double w = (avg[r] - top_level) / (avg[r] - avg[r - 1]);
      f.top = row_x2(cfg, r) - w * cfg.r;
      break;
    }
  }
  for (int r = 0; r + 1 < n; ++r) {
    if (avg[r + 1] >= bot_level && avg[r] < bot_level) {
      const double w = (bot_level - avg[r]) / (avg[r + 1] - avg[r]);
      f.bottom = row_x2(cfg, r) + w * cfg.r;
      break;
    }
  }
  return f;
}

WalkArtifacts run_simulation(const WalkConfig& cfg, const WalkOptions& opt) {
  validate(cfg);
  const AtwoodParams& p = cfg.params;
  Lattice lat = flat_lattice(cfg.n_cols, cfg.n_rows);
  ColumnStreams rng(cfg.seed, cfg.n_cols);
  WalkArtifacts art;
  art.initial_mass = lat.mass();
  art.snapshot_steps.push_back(0);
  art.snapshots.push_back(lat);

  const int threads = std::max(1, std::min(opt.threads, cfg.n_cols));
  for (int k = 1; k <= cfg.steps; ++k) {
    const std::vector<double> means = line_average(lat);
    if (threads == 1) {
      mc_step_columns(lat, means, p, rng, 0, cfg.n_cols, opt.schedule);
    } else {
      std::vector<std::thread> pool;
      const int chunk = (cfg.n_cols + threads - 1) / threads;
      for (int w = 0; w < threads; ++w) {
        const int b = w * chunk, e = std::min(cfg.n_cols, b + chunk);
        if (b < e) pool.emplace_back([&, b, e] { mc_step_columns(lat, means, p, rng, b, e, opt.schedule); });
      }
      for (auto& t : pool) t.join();
    }
    lat.step = k;
    if ((opt.snapshot_every > 0 && k % opt.snapshot_every == 0) || k == cfg.steps) {
      if (art.snapshot_steps.back() != k) {
        art.snapshot_steps.push_back(k);
        art.snapshots.push_back(lat);
      }
    }
  }
  art.final_mass = lat.mass();
  art.final_average = line_average(lat);

  std::vector<double> th0(cfg.n_rows);
  for (int r = 0; r < cfg.n_rows; ++r) th0[r] = r >= cfg.n_rows / 2 ? 1.0 : -1.0;
  const RecursionRun rec = recursion_run(th0, p, cfg.c, cfg.h, cfg.steps, std::max(1, cfg.steps));
  art.recursion_final = rec.theta.back();

  const double T = cfg.time();
  const EntropyProfile prof{p, cfg.alpha()};
  art.exact_final.resize(cfg.n_rows);
  for (int r = 0; r < cfg.n_rows; ++r) {
    const double x = row_x2(cfg, r);
    art.exact_final[r] = T > 0.0 ? theta_exact(prof, T, x) : (x > 0.0 ? 1.0 : -1.0);
  }
  for (int r = 0; r < cfg.n_rows; ++r) {
    const double mc = art.final_average[r], rc = art.recursion_final[r], ex = art.exact_final[r];
    art.sup_mc_recursion = std::max(art.sup_mc_recursion, std::abs(mc - rc));
    art.l1_mc_recursion += std::abs(mc - rc) * cfg.r;
    art.sup_recursion_exact = std::max(art.sup_recursion_exact, std::abs(rc - ex));
    art.l1_recursion_exact += std::abs(rc - ex) * cfg.r;
    art.sup_mc_exact = std::max(art.sup_mc_exact, std::abs(mc - ex));
    const double sigma = std::sqrt(std::max(0.0, 1.0 - rc * rc) / cfg.n_cols);
    if (sigma > 1e-12)
      art.max_sigma_ratio = std::max(art.max_sigma_ratio, std::abs(mc - rc) / sigma);
    else if (std::abs(mc - rc) > 0.0)
      art.max_sigma_ratio = std::numeric_limits<double>::infinity();
  }
  art.mc_fronts = front_positions(art.final_average, cfg, opt.front_level);
  art.recursion_fronts = front_positions(art.recursion_final, cfg, opt.front_level);
  return art;
}

}  // namespace ipmix
