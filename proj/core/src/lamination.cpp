#include "ipmix/lamination.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "json.hpp"

namespace ipmix {

namespace {

Vec2 radial_omega_bar(Vec2 omega) {
  const Vec2 T = disc_T(omega);
  if (std::abs(T) <= 0.5) return 0.0;
  return omega_on_S(T / std::abs(T));
}

Vec2 unit_omega_bar(Vec2 omega) {
  const Vec2 T = disc_T(omega);
  if (std::abs(T) == 0.0) return 0.0;
  return omega_on_S(T / std::abs(T));
}

bool near_critical(const AtwoodParams& p, const BoundParams& b) {
  return std::isfinite(p.M_star) && std::abs(b.M - p.M_star) <= 1e-12 * p.M_star;
}

State along(const State& z, const State& zb, double l) { return z + l * zb; }

double id4_lhs(const State& z, const AtwoodParams& p, const BoundParams& b, Vec2 omega) {
  const double th = z.theta, A = p.A;
  const Vec2 w = A * z.u + I;
  const Vec2 T = disc_T(omega);
  return (1.0 - th * th) * std::norm(w / (1.0 + omega * th * A)) * (1.0 - std::norm(T)) +
         (b.M * b.M - 1.0 - b_functional(z, p));
}

// Projections onto the four convex pieces of the slice U_M(theta, u) in m-space.
struct Disc {
  Vec2 c;
  double r;
  Vec2 project(Vec2 x) const {
    const Vec2 d = x - c;
    const double n = std::abs(d);
    return n <= r ? x : c + d * (r / n);
  }
};

struct HalfPlane {
  Vec2 n;  // {m : n.m <= c}
  double c;
  Vec2 project(Vec2 x) const {
    const double nn = std::norm(n);
    if (nn == 0.0) return x;
    const double e = dot(n, x) - c;
    return e <= 0.0 ? x : x - n * (e / nn);
  }
};

}  // namespace

void validate(const SegmentSolverConfig& cfg) {
  if (!(cfg.D > 0.0 && cfg.D < 0.5)) throw ConfigError("D must lie in (0, 1/2)");
  if (!(cfg.dykstra_tol > 0.0) || !(cfg.bisect_tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (cfg.max_iter <= 0 || cfg.scan_points <= 0) throw ConfigError("iteration counts must be positive");
  if (!(cfg.scan_bound > 0.0)) throw ConfigError("scan bound must be positive");
}

NBranch n_branch(const State& z, const AtwoodParams& p, const BoundParams& b) {
  const SliceSigma s = sigma_pm(z, p, b);
  return std::abs(s.minus) <= std::abs(s.plus) ? NBranch::minus : NBranch::plus;
}

Vec2 n_bar_of(const State& z, const AtwoodParams& p, Vec2 wb, NBranch br) {
  const double th = z.theta, A = p.A;
  const Vec2 den = br == NBranch::minus ? 1.0 + wb * A : 1.0 - wb * A;
  if (std::abs(den) == 0.0) throw SingularError("n_bar: vanishing denominator");
  return br == NBranch::minus ? -(1.0 - th) / den : (1.0 + th) / den;
}

LambdaDirection direction_from(const State& z, const AtwoodParams& p, Vec2 wb, Vec2 nb) {
  const double th = z.theta, A = p.A;
  const Vec2 w = omega_of(z, p);
  const Vec2 v = z.u + nb * (A * z.u + I) * (wb - w) / (1.0 + w * th * A);
  const Vec2 den = 1.0 + wb * th * A;
  if (std::abs(den) == 0.0) throw SingularError("direction: 1 + theta omega_bar A = 0");
  const Vec2 pv = (A * v + I) / den;
  LambdaDirection d;
  d.theta_bar = 1.0;
  d.u_bar = wb * pv;
  d.m_bar = v - th * d.u_bar;
  d.omega_bar = wb;
  return d;
}

LambdaDirection unbounded_direction(const State& z, const AtwoodParams& p) {
  if (!in_U(z, p)) throw DomainError("unbounded_direction needs z in U");
  const double th = z.theta, A = p.A;
  const Vec2 wb = radial_omega_bar(omega_of(z, p));
  LambdaDirection d;
  d.theta_bar = 1.0;
  d.m_bar = (z.u - th * wb * I) / (1.0 + th * wb * A);
  d.u_bar = wb * (A * d.m_bar + I);
  d.omega_bar = wb;
  return d;
}

const char* to_string(DirectionCase c) {
  switch (c) {
    case DirectionCase::pinch_band: return "pinch_band";
    case DirectionCase::interior: return "interior";
    case DirectionCase::half_plane: return "half_plane";
    case DirectionCase::corner: return "corner";
    case DirectionCase::fallback: return "fallback";
  }
  return "?";
}

double b_value(const State& z, Vec2 wb, const AtwoodParams& p, const BoundParams& b) {
  if (!(std::abs(z.theta) < 1.0)) throw DomainError("b_value needs |theta| < 1");
  const LambdaDirection d = direction_from(z, p, wb, n_bar_of(z, p, wb, n_branch(z, p, b)));
  const double A = p.A;
  const Vec2 bv = z.u + A * z.m + z.theta * I + A * I;
  return 4.0 * dot(d.u_bar, bv) + 4.0 * dot(z.u, d.u_bar + A * d.m_bar + I);
}

double slice_distance(const State& z, const AtwoodParams& p, const BoundParams& b, const SegmentSolverConfig& cfg) {
  const double th = z.theta, A = p.A;
  if (!(std::abs(th) < 1.0)) throw DomainError("slice_distance needs |theta| < 1");
  const Vec2 u = z.u, w = A * u + I;
  const double one_m = 1.0 - th * th;
  const Disc disc{th * u - one_m * w / (2.0 * (1.0 - th * A)), one_m * std::abs(w) / (2.0 * (1.0 - th * A))};
  const HalfPlane hp{4.0 * A * u, b.M * b.M - 1.0 - 4.0 * dot(u, u + (th + A) * I)};
  const Disc bm{u - 0.5 * (1.0 - th) * I, 0.5 * b.M_minus * (1.0 - th)};
  const Disc bp{-u - 0.5 * (1.0 + th) * I, 0.5 * b.M_plus * (1.0 + th)};
  if (std::norm(hp.n) == 0.0 && hp.c < 0.0) return std::numeric_limits<double>::infinity();

  const Vec2 m0 = z.m;
  Vec2 x = m0;
  std::array<Vec2, 4> inc{};
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Vec2 before = x;
    for (int k = 0; k < 4; ++k) {
      const Vec2 y = x + inc[k];
      Vec2 px;
      switch (k) {
        case 0: px = disc.project(y); break;
        case 1: px = hp.project(y); break;
        case 2: px = bm.project(y); break;
        default: px = bp.project(y); break;
      }
      inc[k] = y - px;
      x = px;
    }
    if (std::abs(x - before) <= cfg.dykstra_tol) break;
  }
  return std::abs(m0 - x);
}

double alpha_interp(const State& z, const AtwoodParams& p, const BoundParams& b, const SegmentSolverConfig& cfg) {
  if (!(std::abs(z.theta) < 1.0)) throw DomainError("alpha_interp needs |theta| < 1");
  if (at_pinch(z, p)) throw DomainError("alpha_interp is undefined at the pinch");
  const double A = p.A, M2 = b.M * b.M;
  const Vec2 w = omega_of(z, p);
  const SliceSigma s = sigma_pm(z, p, b);
  const double d = 8.0 * std::max(1.0, std::abs(A * z.u)) * slice_distance(z, p, b, cfg);
  const double den = id4_lhs(z, p, b, w) + d;
  if (den == 0.0) throw SingularError("alpha_interp: vanishing denominator");
  const double hp = M2 - 1.0 - b_functional(z, p);
  return (hp + d) / den * 0.5 * ((M2 - A) * (1.0 - std::norm(s.minus)) - (M2 + A) * (1.0 - std::norm(s.plus)));
}

std::vector<Vec2> solve_b(const State& z, double alpha, const AtwoodParams& p, const BoundParams& b) {
  const double th = z.theta, A = p.A;
  if (!(std::abs(th) < 1.0)) throw DomainError("solve_b needs |theta| < 1");
  if (at_pinch(z, p)) throw DomainError("solve_b is undefined at the pinch");
  const double eps = n_branch(z, p, b) == NBranch::minus ? 1.0 : -1.0;
  const Vec2 w = omega_of(z, p);
  const Vec2 bv = z.u + A * z.m + th * I + A * I;
  const Vec2 q = (1.0 + eps * w * A) * (A * z.u + I) / (1.0 + w * th * A);
  const Vec2 P = 4.0 * q * std::conj(bv - z.u);
  const Vec2 Q = 4.0 * q * std::conj(bv + z.u);
  const Vec2 R = (2.0 - eps * A) * P + eps * A * Q;
  const double Bz = b_functional(z, p);
  const double a2 = 1.0 - eps * A;
  const double a1 = 0.5 * R.imag();
  const double a0 = (1.0 - eps * A) * alpha * alpha + 0.5 * R.real() * alpha - 4.0 * std::norm(q) * Bz;
  const double disc = a1 * a1 - 4.0 * a2 * a0;
  if (disc < 0.0) return {};
  std::vector<Vec2> roots;
  for (double s : {1.0, -1.0}) {
    const double beta = (-a1 + s * std::sqrt(disc)) / (2.0 * a2);
    const Vec2 g{alpha, beta};
    const Vec2 den = Q - eps * A * g;
    if (std::abs(den) == 0.0) continue;
    Vec2 W = (P + (2.0 - eps * A) * g) / den;
    if (std::abs(W) == 0.0) continue;
    W /= std::abs(W);
    roots.push_back(omega_on_S(W));
  }
  return roots;
}

double pinch_band_gamma(const AtwoodParams& p, const BoundParams& b) {
  if (p.A == 0.0 || !(b.M > p.M_star)) return 0.0;
  static std::mutex mu;
  static std::map<std::pair<double, double>, double> cache;
  const auto key = std::make_pair(p.A, b.M);
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(key); it != cache.end()) return it->second;

  std::mt19937_64 rng(0x5eed0fba11ULL);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  double gamma = 0.5;
  for (int halving = 0; halving < 60; ++halving) {
    bool ok = true;
    for (int k = 0; k < 4000 && ok; ++k) {
      double th = 2.0 * U(rng) - 1.0;
      if (U(rng) < 0.3) th = std::copysign(1.0 - std::pow(10.0, -6.0 * U(rng)), th);
      const double rho = U(rng) < 0.3 ? 1.0 : std::sqrt(U(rng));
      const Vec2 wv = gamma * rho * std::polar(1.0, two_pi * U(rng));
      State z;
      z.theta = th;
      z.u = (wv - I) / p.A;
      if (at_pinch(z, p)) continue;
      const double rad = U(rng) < 0.5 ? 1.0 - std::pow(10.0, -8.0 * U(rng)) : std::sqrt(U(rng));
      const Vec2 om = disc_T_inv(rad * std::polar(1.0, two_pi * U(rng)));
      z.m = th * z.u + (1.0 - th * th) * (p.A * z.u + I) * om / (1.0 + om * th * p.A);
      if (in_U(z, p) && !in_U_M_strict(z, p, b)) ok = false;
    }
    if (ok) break;
    gamma *= 0.5;
  }
  cache[key] = gamma;
  return gamma;
}

BoundedDirection bounded_direction(const State& z, const AtwoodParams& p, const BoundParams& b,
                                   const SegmentSolverConfig& cfg) {
  if (near_critical(p, b)) throw UnsupportedError("M equals the critical bound M_*(A)");
  if (!in_U_M_strict(z, p, b)) throw DomainError("bounded_direction needs z in U_M");
  const double th = z.theta, A = p.A, M2 = b.M * b.M;
  BoundedDirection out;
  if (b.M > p.M_star && std::abs(A * z.u + I) <= pinch_band_gamma(p, b)) {
    out.dir = unbounded_direction(z, p);
    out.which = DirectionCase::pinch_band;
    return out;
  }
  const Vec2 w = omega_of(z, p);
  const Vec2 T = disc_T(w);
  const double delta = cfg.D * (1.0 - th * th) * (M2 - 1.0);
  const NBranch br = n_branch(z, p, b);
  const double hp = M2 - 1.0 - b_functional(z, p);
  if (hp > delta) {
    const Vec2 wb = radial_omega_bar(w);
    const SliceSigma s = sigma_pm(z, p, b);
    // deep inside both balls the n_bar drift is not needed
    const Vec2 nb = std::max(std::abs(s.minus), std::abs(s.plus)) <= 0.5 ? Vec2{} : n_bar_of(z, p, wb, br);
    out.dir = direction_from(z, p, wb, nb);
    out.which = DirectionCase::interior;
    return out;
  }
  const bool flat = 1.0 - std::abs(T) > delta;
  const double alpha = flat ? 0.0 : alpha_interp(z, p, b, cfg);
  const std::vector<Vec2> roots = solve_b(z, alpha, p, b);
  if (roots.empty()) {
    out.dir = unbounded_direction(z, p);
    out.which = DirectionCase::fallback;
    out.warning = true;
    return out;
  }
  Vec2 wb = roots.front();
  for (std::size_t k = 1; k < roots.size(); ++k)
    if (std::abs(disc_T(roots[k]) - T) < std::abs(disc_T(wb) - T)) wb = roots[k];
  out.dir = direction_from(z, p, wb, n_bar_of(z, p, wb, br));
  out.which = flat ? DirectionCase::half_plane : DirectionCase::corner;
  return out;
}

Interval segment_radius(const State& z, const State& zb, SetId set, const AtwoodParams& p,
                        const std::optional<BoundParams>& b, const SegmentSolverConfig& cfg) {
  if (set == SetId::U_M && !b) throw ConfigError("segment_radius on U_M needs bounds");
  auto inside = [&](const State& s) { return set == SetId::U ? in_U(s, p) : in_U_M_strict(s, p, *b); };
  if (!inside(z)) throw DomainError("segment_radius: z is not in the set");
  Interval r;
  for (int side : {1, -1}) {
    double lim = cfg.scan_bound;
    if (zb.theta != 0.0) {
      const double room = side * zb.theta > 0.0 ? 1.0 - z.theta : 1.0 + z.theta;
      lim = std::min(lim, room / std::abs(zb.theta));
    }
    double lo = 0.0, hi = -1.0;
    for (int k = 1; k <= cfg.scan_points; ++k) {
      const double l = lim * k / cfg.scan_points * (1.0 - 1e-12);
      if (inside(along(z, zb, side * l))) {
        lo = l;
      } else {
        hi = l;
        break;
      }
    }
    if (hi < 0.0) {
      lo = lim;
    } else {
      for (int it = 0; it < 200 && hi - lo > cfg.bisect_tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (inside(along(z, zb, side * mid)))
          lo = mid;
        else
          hi = mid;
      }
    }
    (side > 0 ? r.plus : r.minus) = side * lo;
  }
  return r;
}

std::vector<const LaminateNode*> LaminateTree::leaves() const {
  std::vector<const LaminateNode*> out;
  std::vector<const LaminateNode*> stack{&root};
  while (!stack.empty()) {
    const LaminateNode* n = stack.back();
    stack.pop_back();
    if (n->leaf()) out.push_back(n);
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
  }
  return out;
}

std::vector<const LaminateNode*> LaminateTree::splits() const {
  std::vector<const LaminateNode*> out;
  std::vector<const LaminateNode*> stack{&root};
  while (!stack.empty()) {
    const LaminateNode* n = stack.back();
    stack.pop_back();
    if (!n->leaf()) out.push_back(n);
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
  }
  return out;
}

namespace {

// Splits a boundary state into its two K points.
void split_boundary(LaminateNode& node, const AtwoodParams& p) {
  const State& z = node.state;
  const double th = z.theta, A = p.A;
  if (std::abs(th) >= 1.0) return;
  const Vec2 wb = at_pinch(z, p) ? Vec2{} : unit_omega_bar(omega_of(z, p));
  const Vec2 mb = (z.u - th * wb * I) / (1.0 + th * wb * A);
  const Vec2 ub = wb * (A * mb + I);
  LaminateNode a, c;
  a.state = State{1.0, mb + ub, mb + ub};
  c.state = State{-1.0, mb - ub, -(mb - ub)};
  a.weight = node.weight * 0.5 * (1.0 + th);
  c.weight = node.weight * 0.5 * (1.0 - th);
  node.direction = LambdaDirection{1.0, ub, mb, wb};
  node.lambda_minus = -1.0 - th;
  node.lambda_plus = 1.0 - th;
  node.children = {a, c};
}

}  // namespace

LaminateTree laminate_decompose(const State& z, const AtwoodParams& p) {
  if (!in_U_closed(z, p, 1e-12)) throw DomainError("laminate_decompose needs z in the closure of U");
  LaminateTree tree;
  tree.root.state = z;
  tree.root.weight = 1.0;
  const double th = z.theta, A = p.A;
  if (std::abs(th) >= 1.0) return tree;
  const double g = relaxation_functionals(z, p).g;
  const bool on_edge = at_pinch(z, p) || std::abs(disc_T(omega_of(z, p))) >= 1.0 - 1e-12;
  if (!(g < 0.0) || on_edge) {
    split_boundary(tree.root, p);
    return tree;
  }
  const Vec2 G0 = z.m - th * z.u;
  const Vec2 F0 = (1.0 - th * A) * G0 + (1.0 - th * th) * (A * z.u + I);
  const Vec2 mb = G0 / std::abs(G0);
  const State zb{0.0, -A * mb, mb};
  const double a2 = (1.0 - A * A) * (1.0 + th * A);
  const double a1 = (1.0 - A * A) * dot(mb, G0) + (1.0 + th * A) * dot(mb, F0);
  const double a0 = dot(F0, G0);
  const double q = -0.5 * (a1 + std::copysign(std::sqrt(a1 * a1 - 4.0 * a2 * a0), a1));
  double lm = q / a2, lp = a0 / q;
  if (lm > lp) std::swap(lm, lp);
  LaminateNode& r = tree.root;
  r.direction = LambdaDirection{0.0, zb.u, zb.m, std::nullopt};
  r.lambda_minus = lm;
  r.lambda_plus = lp;
  LaminateNode e1, e2;
  e1.state = along(z, zb, lm);
  e1.weight = lp / (lp - lm);
  e2.state = along(z, zb, lp);
  e2.weight = -lm / (lp - lm);
  split_boundary(e1, p);
  split_boundary(e2, p);
  r.children = {e1, e2};
  return tree;
}

namespace {

nlohmann::ordered_json state_json(const State& z) {
  return {z.theta, z.u.real(), z.u.imag(), z.m.real(), z.m.imag()};
}

nlohmann::ordered_json node_json(const LaminateNode& n) {
  nlohmann::ordered_json j;
  j["state"] = state_json(n.state);
  j["weight"] = n.weight;
  if (!n.leaf()) {
    nlohmann::ordered_json s;
    s["direction"] = state_json(n.direction.state());
    if (n.direction.omega_bar)
      s["omega_bar"] = {n.direction.omega_bar->real(), n.direction.omega_bar->imag()};
    else
      s["omega_bar"] = nullptr;
    s["lambda_minus"] = n.lambda_minus;
    s["lambda_plus"] = n.lambda_plus;
    j["split"] = s;
    j["children"] = nlohmann::ordered_json::array();
    for (const auto& c : n.children) j["children"].push_back(node_json(c));
  }
  return j;
}

}  // namespace

std::string to_json(const LaminateTree& tree, int indent) {
  nlohmann::ordered_json j;
  j["root"] = node_json(tree.root);
  j["leaves"] = nlohmann::ordered_json::array();
  for (const LaminateNode* l : tree.leaves()) j["leaves"].push_back({{"state", state_json(l->state)}, {"weight", l->weight}});
  return j.dump(indent);
}

State random_laminate(int depth, const AtwoodParams& p, std::mt19937_64& rng) {
  if (depth != 1 && depth != 2) throw DomainError("random_laminate depth must be 1 or 2");
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double A = p.A;
  const double scales[] = {0.1, 1.0, 3.0};
  const double sc = scales[std::min(2, int(3.0 * U(rng)))];
  const Vec2 u1 = sc * Vec2{N(rng), N(rng)};
  const Vec2 wb = omega_on_S(std::polar(1.0, 2.0 * std::numbers::pi * U(rng)));
  const Vec2 u2 = (u1 * (1.0 - wb * A) - 2.0 * I * wb) / (1.0 + wb * A);
  const State z1{1.0, u1, u1}, z2{-1.0, u2, -u2};
  double s = 2.0 * U(rng) - 1.0;
  if (U(rng) < 0.02) s = U(rng) < 0.5 ? -1.0 : 1.0;
  const State z = 0.5 * (1.0 + s) * z1 + 0.5 * (1.0 - s) * z2;
  if (depth == 1) return z;

  // second split along a wave-cone line with no phase change
  const double th = z.theta;
  const Vec2 mb = std::polar(1.0, 2.0 * std::numbers::pi * U(rng));
  const Vec2 G0 = z.m - th * z.u;
  const Vec2 F0 = (1.0 - th * A) * G0 + (1.0 - th * th) * (A * z.u + I);
  const double a2 = (1.0 - A * A) * (1.0 + th * A);
  const double a1 = (1.0 - A * A) * dot(mb, G0) + (1.0 + th * A) * dot(mb, F0);
  const double lstar = -a1 / a2;
  return along(z, State{0.0, -A * mb, mb}, U(rng) * lstar);
}

State random_laminate(int depth, const AtwoodParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_laminate(depth, p, rng);
}

double IdentityResiduals::max_relative() const {
  return std::max({id1 / id1_scale, id4 / id4_scale, fg / fg_scale});
}

IdentityResiduals identity_check(const State& z, const AtwoodParams& p, const BoundParams& b) {
  const double th = z.theta, A = p.A, M2 = b.M * b.M;
  const Vec2 w = A * z.u + I;
  const double one_m = 1.0 - th * th, ta = 1.0 - th * A;
  const Vec2 X = 2.0 * ta * (z.m - th * z.u) + one_m * w;
  const double B = b_functional(z, p);
  IdentityResiduals r;

  const double l1a = one_m * one_m * std::norm(w) / ta, l1b = std::norm(X) / ta;
  const double l2a = one_m * (M2 - 1.0), l2b = one_m * B;
  const double r1a = 0.5 * (1.0 + th) * (M2 - A) * (1.0 - th) * (1.0 - th);
  const double r1b = 0.5 * (1.0 + th) * (1.0 - A) * std::norm(2.0 * (z.m - z.u) + (1.0 - th) * I);
  const double r2a = 0.5 * (1.0 - th) * (M2 + A) * (1.0 + th) * (1.0 + th);
  const double r2b = 0.5 * (1.0 - th) * (1.0 + A) * std::norm(2.0 * (z.m + z.u) + (1.0 + th) * I);
  r.id1 = std::abs((l1a - l1b + l2a - l2b) - (r1a - r1b + r2a - r2b));
  r.id1_scale = std::max({1.0, std::abs(l1a) + std::abs(l1b) + std::abs(l2a) + std::abs(l2b) + std::abs(r1a) +
                                   std::abs(r1b) + std::abs(r2a) + std::abs(r2b)});

  const Functionals fg = relaxation_functionals(z, p);
  const double lhs = 4.0 * ta * fg.g, rhs = fg.f * (fg.f + 2.0 * one_m * std::abs(w));
  r.fg = std::abs(lhs - rhs);
  r.fg_scale = std::max({1.0, std::abs(lhs), std::abs(rhs), std::norm(X)});

  if (std::abs(th) < 1.0 && !at_pinch(z, p)) {
    const Vec2 om = omega_of(z, p);
    const SliceSigma s = sigma_pm(z, p, b);
    const double a = one_m * std::norm(w / (1.0 + om * th * A)), t2 = std::norm(disc_T(om));
    const double hp = M2 - 1.0 - B;
    const double q1 = 0.5 * (1.0 - th) * (M2 - A), q2 = 0.5 * (1.0 + th) * (M2 + A);
    const double left = a * (1.0 - t2) + hp;
    const double right = q1 * (1.0 - std::norm(s.minus)) + q2 * (1.0 - std::norm(s.plus));
    r.id4 = std::abs(left - right);
    r.id4_scale = std::max({1.0, a + a * t2 + M2 + 1.0 + std::abs(B), q1 * (1.0 + std::norm(s.minus)) + q2 * (1.0 + std::norm(s.plus))});
  } else {
    r.id4 = 0.0;
  }
  return r;
}

std::vector<double> nonconvexity_curve(const AtwoodParams& p, const std::vector<double>& lambda_grid) {
  if (p.A == 0.0) throw DomainError("nonconvexity_curve needs A != 0");
  std::vector<double> out;
  out.reserve(lambda_grid.size());
  for (double l : lambda_grid) out.push_back(relaxation_functionals(State{l, -I / p.A, 0.0}, p).f);
  return out;
}

namespace {
constexpr double kResolvable = 1e-11;

bool resolvable(const State& z, const AtwoodParams& p, const BoundParams& b) {
  return u_m_margins(z, p, b).min() > kResolvable * (1.0 + b.M * b.M + std::norm(z.u) + std::norm(z.m));
}
}  // namespace

State sample_U(const AtwoodParams& p, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  const double A = p.A;
  for (;;) {
    double th = 2.0 * U(rng) - 1.0;
    if (U(rng) < 0.3) th = std::copysign(1.0 - std::pow(10.0, -6.0 * U(rng)), th);
    const double scales[] = {0.1, 1.0, 3.0};
    Vec2 u = scales[std::min(2, int(3.0 * U(rng)))] * Vec2{N(rng), N(rng)};
    if (A != 0.0 && U(rng) < 0.15) u = (std::pow(10.0, -6.0 * U(rng)) * std::polar(1.0, two_pi * U(rng)) - I) / A;
    double rad = std::sqrt(U(rng));
    if (U(rng) < 0.5) rad = 1.0 - std::pow(10.0, -8.0 * U(rng));
    const Vec2 om = disc_T_inv(rad * std::polar(1.0, two_pi * U(rng)));
    State z{th, u, th * u + (1.0 - th * th) * (A * u + I) * om / (1.0 + om * th * A)};
    // margins below roundoff make membership of nearby points a coin flip
    if (in_U(z, p) && -relaxation_functionals(z, p).f > kResolvable * (1.0 + std::norm(z.u) + std::norm(z.m))) return z;
  }
}

State sample_U_M(const AtwoodParams& p, const BoundParams& b, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    const State z = sample_U(p, rng);
    if (!in_U_M_strict(z, p, b) || !resolvable(z, p, b)) continue;
    if (U(rng) >= 0.3) return z;
    // push toward the boundary along a random (u, m) direction
    const State d{0.0, Vec2{N(rng), N(rng)}, Vec2{N(rng), N(rng)}};
    double lo = 0.0, hi = 1e-3;
    while (in_U_M_strict(along(z, d, hi), p, b) && hi < 1e6) {
      lo = hi;
      hi *= 2.0;
    }
    if (hi >= 1e6) return z;
    for (int k = 0; k < 60; ++k) {
      const double mid = 0.5 * (lo + hi);
      (in_U_M_strict(along(z, d, mid), p, b) ? lo : hi) = mid;
    }
    const double back = lo * (1.0 - std::pow(10.0, -1.0 - 7.0 * U(rng)));
    const State y = along(z, d, back);
    if (in_U_M_strict(y, p, b) && resolvable(y, p, b)) return y;
  }
}

}  // namespace ipmix
