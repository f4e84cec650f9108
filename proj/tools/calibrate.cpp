// Brute-force c0 tables for the segment radius bound radius >= c0 (1 - theta^2).
// Writes a header; the acceptance suite checks fresh samples against it.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "ipmix/io.hpp"
#include "ipmix/lamination.hpp"

using namespace ipmix;

namespace {

struct Row {
  double A, M, min_ratio, c0;
};

double min_ratio_U(const AtwoodParams& p, int samples, std::mt19937_64& rng) {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const State z = sample_U(p, rng);
    const auto r = segment_radius(z, unbounded_direction(z, p).state(), SetId::U, p);
    lo = std::min(lo, r.radius() / (1.0 - z.theta * z.theta));
  }
  return lo;
}

double min_ratio_UM(const AtwoodParams& p, const BoundParams& b, int samples, std::mt19937_64& rng) {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const State z = sample_U_M(p, b, rng);
    const auto r = segment_radius(z, bounded_direction(z, p, b).dir.state(), SetId::U_M, p, b);
    lo = std::min(lo, r.radius() / (1.0 - z.theta * z.theta));
  }
  return lo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"c0 calibration sweep"};
  int samples = 100000;
  std::uint64_t seed = 0x5eed0c0;
  std::string out = "calibration.hpp";
  app.add_option("--samples", samples)->check(CLI::PositiveNumber);
  app.add_option("--seed", seed);
  app.add_option("--out", out);
  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Row> rows;
  for (double A : {-0.8, -0.5, 0.0, 0.5, 0.8}) {
    const auto p = make_atwood(A);
    std::mt19937_64 rng(seed ^ std::uint64_t(std::llround((A + 1.0) * 1000.0)));
    const double lo = min_ratio_U(p, samples, rng);
    rows.push_back({A, 0.0, lo, 0.5 * lo});
    std::fprintf(stderr, "A=%+.1f U      min %.6g\n", A, lo);
    for (double M : {2.0, 4.0, 8.0}) {
      const auto b = make_bounds(p, M);
      const double lm = min_ratio_UM(p, b, samples, rng);
      rows.push_back({A, M, lm, 0.5 * lm});
      std::fprintf(stderr, "A=%+.1f U_M M=%g min %.6g\n", A, M, lm);
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream h;
  h << "#ifndef IPMIX_CALIBRATION_HPP\n#define IPMIX_CALIBRATION_HPP\n\n"
    << "// Generated by ipmix_calibrate --samples " << samples << " --seed " << seed << " (" << int(secs) << " s).\n"
    << "// c0 is half the smallest radius / (1 - theta^2) seen; M = 0 marks the unbounded set.\n\n"
    << "#include <cmath>\n#include <stdexcept>\n\nnamespace ipmix::calibration {\n\n"
    << "struct C0Entry {\n  double A;\n  double M;\n  double min_ratio;\n  double c0;\n};\n\n"
    << "inline constexpr C0Entry kC0[] = {\n";
  for (const Row& r : rows)
    h << "    {" << format_double(r.A) << ", " << format_double(r.M) << ", " << format_double(r.min_ratio) << ", "
      << format_double(r.c0) << "},\n";
  h << "};\n\n"
    << "inline double c0(double A, double M = 0.0) {\n"
    << "  for (const C0Entry& e : kC0)\n"
    << "    if (std::abs(e.A - A) < 1e-12 && std::abs(e.M - M) < 1e-12) return e.c0;\n"
    << "  throw std::out_of_range(\"no calibrated c0 for this (A, M)\");\n}\n\n"
    << "}  // namespace ipmix::calibration\n\n#endif\n";
  atomic_write(out, h.str());
  std::fprintf(stderr, "wrote %s in %.1f s\n", out.c_str(), secs);
  return 0;
}
