#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "conecrit/angular.hpp"
#include "conecrit/detail/fornberg.hpp"
#include "conecrit/domain.hpp"
#include "conecrit/errors.hpp"
#include "conecrit/exponents.hpp"
#include "conecrit/spectral.hpp"

namespace conecrit {

// Coefficients of the radial equation
//   -v_rr - (N-1)/r v_r + lambda1/r^2 v = c r^{-s} v^p,  r > 1,
// without the shooting slope.
struct OdeParams {
  int N = 3;
  double lambda1 = 0;
  double s = 0;
  double p = 0;
  double c = 1;

  // delta = 1 for p < 0 and 0 for p in [0,1): the shift that moves the
  // nonlinearity away from zero in the sublinear-negative regime.
  double delta() const { return p < 0 ? 1.0 : 0.0; }

  void validate() const {
    if (N < 2) throw std::domain_error("N must be >= 2");
    if (!(lambda1 >= 0)) throw std::domain_error("lambda1 must be >= 0");
    if (!(c > 0)) throw std::domain_error("c must be positive");
    if (!(p < 1)) throw regime_error("shooting handles the sublinear range p < 1, got p = " +
                                     std::to_string(p));
  }
};

struct ShootingParams : OdeParams {
  double K = 2;  // initial slope v_r(1); K > 1

  void validate() const {
    OdeParams::validate();
    if (!(K > 1)) throw std::domain_error("shooting slope K must exceed 1");
  }
};

struct TrajectorySample {
  double r = 0;
  double v = 0;
  double vr = 0;
};

enum class ExitKind { blow_down, reached_rmax, step_failure };

inline const char* exit_kind_name(ExitKind k) {
  switch (k) {
    case ExitKind::blow_down: return "blow_down";
    case ExitKind::reached_rmax: return "reached_rmax";
    case ExitKind::step_failure: return "step_failure";
  }
  return "step_failure";
}

// Radial shooting solution. R is the blow-down radius (first r > 1 where v
// returns to delta) when exit == blow_down, otherwise infinity is represented
// by R = r_max together with the exit kind.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  double R = 0;
  ExitKind exit = ExitKind::reached_rmax;
  double r_max = 0;
  double delta = 0;

  bool blew_down() const { return exit == ExitKind::blow_down; }

  // Cubic Hermite evaluation between stored samples.
  double value_at(double r) const { return hermite(r, false); }
  double derivative_at(double r) const { return hermite(r, true); }

  double min_on(double a, double b, int probes = 2001) const {
    double m = std::min(value_at(a), value_at(b));
    for (int i = 1; i + 1 < probes; ++i)
      m = std::min(m, value_at(a + (b - a) * static_cast<double>(i) / (probes - 1)));
    for (const auto& s : samples)
      if (s.r >= a && s.r <= b) m = std::min(m, s.v);
    return m;
  }

 private:
  double hermite(double r, bool derivative) const {
    const auto it = std::upper_bound(samples.begin(), samples.end(), r,
                                     [](double x, const TrajectorySample& s) { return x < s.r; });
    std::size_t hi = static_cast<std::size_t>(it - samples.begin());
    hi = std::clamp<std::size_t>(hi, 1, samples.size() - 1);
    const auto& s0 = samples[hi - 1];
    const auto& s1 = samples[hi];
    const double h = s1.r - s0.r;
    const double t = (r - s0.r) / h;
    if (!derivative) {
      const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
      const double h10 = t * (1 - t) * (1 - t);
      const double h01 = t * t * (3 - 2 * t);
      const double h11 = t * t * (t - 1);
      return h00 * s0.v + h10 * h * s0.vr + h01 * s1.v + h11 * h * s1.vr;
    }
    const double d00 = 6 * t * (t - 1) / h;
    const double d10 = (1 - t) * (1 - 3 * t);
    const double d01 = -6 * t * (t - 1) / h;
    const double d11 = t * (3 * t - 2);
    return d00 * s0.v + d10 * s0.vr + d01 * s1.v + d11 * s1.vr;
  }
};

namespace detail {

struct State {
  double v = 0;
  double w = 0;  // v_r
};

// Dormand-Prince 5(4) pair. Stage 7 equals the 5th-order result (FSAL).
struct Dopri5 {
  static constexpr std::array<double, 6> kC = {0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0};
  template <class F>
  static State step(const F& f, double r, const State& y, double h, State& err, State& f_start) {
    constexpr double a21 = 0.2;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const State k1 = f_start;
    auto lin = [&](double c1, const State& s1) {
      return State{y.v + h * c1 * s1.v, y.w + h * c1 * s1.w};
    };
    State k2 = f(r + kC[0] * h, lin(a21, k1));
    State k3 = f(r + kC[1] * h, State{y.v + h * (a31 * k1.v + a32 * k2.v),
                                      y.w + h * (a31 * k1.w + a32 * k2.w)});
    State k4 = f(r + kC[2] * h, State{y.v + h * (a41 * k1.v + a42 * k2.v + a43 * k3.v),
                                      y.w + h * (a41 * k1.w + a42 * k2.w + a43 * k3.w)});
    State k5 = f(r + kC[3] * h,
                 State{y.v + h * (a51 * k1.v + a52 * k2.v + a53 * k3.v + a54 * k4.v),
                       y.w + h * (a51 * k1.w + a52 * k2.w + a53 * k3.w + a54 * k4.w)});
    State k6 = f(r + h, State{y.v + h * (a61 * k1.v + a62 * k2.v + a63 * k3.v + a64 * k4.v +
                                         a65 * k5.v),
                              y.w + h * (a61 * k1.w + a62 * k2.w + a63 * k3.w + a64 * k4.w +
                                         a65 * k5.w)});
    State ynew{y.v + h * (b1 * k1.v + b3 * k3.v + b4 * k4.v + b5 * k5.v + b6 * k6.v),
               y.w + h * (b1 * k1.w + b3 * k3.w + b4 * k4.w + b5 * k5.w + b6 * k6.w)};
    State k7 = f(r + h, ynew);
    err = State{h * (e1 * k1.v + e3 * k3.v + e4 * k4.v + e5 * k5.v + e6 * k6.v + e7 * k7.v),
                h * (e1 * k1.w + e3 * k3.w + e4 * k4.w + e5 * k5.w + e6 * k6.w + e7 * k7.w)};
    f_start = k7;
    return ynew;
  }
};

}  // namespace detail

// Integrates the radial IVP v(1) = delta, v_r(1) = K with an adaptive
// Dormand-Prince 5(4) pair, stopping at the first downcrossing of v = delta
// (located by bisection to |v - delta| <= 1e-10) or at r_max. The relative
// step length is capped so transformed-trajectory stencils stay accurate.
inline Trajectory shoot(const ShootingParams& params, double r_max, double step_tol = 1e-10) {
  params.validate();
  if (!(r_max > 1)) throw std::domain_error("r_max must exceed 1");
  const double delta = params.delta();
  const double floor_v = params.p < 0 ? 0.5 * delta : 0.0;

  auto rhs = [&](double r, detail::State y) {
    const double vp = std::pow(std::max(y.v, floor_v), params.p);
    const double acc = -(params.N - 1) / r * y.w + params.lambda1 / (r * r) * y.v -
                       params.c * std::pow(r, -params.s) * vp;
    return detail::State{y.w, acc};
  };

  constexpr double kMaxRelStep = 0.01;
  constexpr double kEventTol = 1e-10;
  const double scale_v = std::max(1.0, params.K);

  Trajectory traj;
  traj.delta = delta;
  traj.r_max = r_max;
  double r = 1.0;
  detail::State y{delta, params.K};
  traj.samples.push_back({r, y.v, y.w});
  detail::State fy = rhs(r, y);
  double h = 1e-8;
  bool armed = false;

  while (r < r_max) {
    const double h_left = r_max - r;
    if (h_left <= 1e-14 * r) break;
    h = std::min({h, kMaxRelStep * r, h_left});
    if (h < 1e-14 * r) {
      traj.exit = ExitKind::step_failure;
      traj.R = r;
      return traj;
    }
    detail::State err, fnext = fy;
    detail::State ynew = detail::Dopri5::step(rhs, r, y, h, err, fnext);
    const double en = std::max(std::abs(err.v), std::abs(err.w)) /
                      (step_tol * scale_v + step_tol * std::max({std::abs(y.v), std::abs(ynew.v),
                                                                 std::abs(y.w), std::abs(ynew.w)}));
    if (en > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      continue;
    }
    const double r_new = r + h;
    if (armed && ynew.v <= delta) {
      // Bracketed downcrossing: bisect with single fixed steps from the left
      // anchor, which stays strictly inside the region.
      double ra = r, rb = r_new;
      detail::State ya = y;
      detail::State fa = fy;
      detail::State best = ynew;
      double rbest = rb;
      for (int it = 0; it < 200; ++it) {
        if (std::abs(best.v - delta) <= kEventTol || rb - ra < 1e-15 * ra) break;
        const double rm = 0.5 * (ra + rb);
        detail::State e2, fm = fa;
        detail::State ym = detail::Dopri5::step(rhs, ra, ya, rm - ra, e2, fm);
        if (ym.v > delta) {
          ra = rm;
          ya = ym;
          fa = fm;
          if (std::abs(ym.v - delta) < std::abs(best.v - delta)) {
            best = ym;
            rbest = rm;
          }
        } else {
          rb = rm;
          best = ym;
          rbest = rm;
        }
      }
      traj.samples.push_back({rbest, best.v, best.w});
      traj.R = rbest;
      traj.exit = ExitKind::blow_down;
      return traj;
    }
    r = r_new;
    y = ynew;
    fy = fnext;
    traj.samples.push_back({r, y.v, y.w});
    if (!armed && y.v > delta + 1e-12) armed = true;
    h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(en, 1e-10), -0.2)));
  }
  traj.R = r_max;
  traj.exit = ExitKind::reached_rmax;
  return traj;
}

// Checks the hypothesis of the blow-down lemma: s < 2 and p in [p_*, 1) with
// p_* = 1 - (2-s)/alpha_+ (all p < 1 when alpha_+ = 0). Throws regime_error
// naming the violated inequality.
inline void require_blowdown_hypothesis(const OdeParams& params) {
  if (!(params.s < 2))
    throw regime_error("blow-down lemma needs s < 2, got s = " + std::to_string(params.s));
  if (!(params.p < 1))
    throw regime_error("blow-down lemma needs p < 1, got p = " + std::to_string(params.p));
  const SpectralData spec = alpha_roots(params.lambda1, params.N);
  if (spec.alpha_plus > 0) {
    const double threshold = 1.0 - (2.0 - params.s) / spec.alpha_plus;
    if (params.p < threshold - 1e-12)
      throw regime_error("p = " + std::to_string(params.p) + " < p_star = " +
                         std::to_string(threshold) + ": existence regime, no blow-down guarantee");
  }
}

struct FindKResult {
  double K = 0;
  Trajectory trajectory;
  double min_on_compact = 0;
};

// Doubling search over the shooting slope: the first K whose trajectory blows
// down past r_dstar with min over [r_star, r_dstar] at least M. The lemma
// guarantees such K exists under its hypothesis; exhausting K_cap therefore
// signals an implementation problem, reported with the best minimum achieved.
inline FindKResult find_K(const OdeParams& params, double r_star, double r_dstar, double M,
                          double K_cap = 1073741824.0 /* 2^30 */, double step_tol = 1e-10) {
  params.validate();
  if (!(1 < r_star && r_star < r_dstar))
    throw std::domain_error("compact interval needs 1 < r_star < r_dstar");
  if (!(M > params.delta())) throw std::domain_error("target M must exceed delta");
  require_blowdown_hypothesis(params);

  double best_min = -std::numeric_limits<double>::infinity();
  for (double K = 2.0; K <= K_cap; K *= 2.0) {
    ShootingParams sp;
    static_cast<OdeParams&>(sp) = params;
    sp.K = K;
    double r_max = std::max({1e3, 100.0 * r_dstar, 8.0 * K});
    for (int escalation = 0; escalation < 4; ++escalation) {
      const Trajectory traj = shoot(sp, r_max, step_tol);
      if (traj.exit == ExitKind::reached_rmax) {
        r_max *= 8.0;
        continue;
      }
      if (traj.exit == ExitKind::blow_down && traj.R > r_dstar) {
        const double mn = traj.min_on(r_star, r_dstar);
        best_min = std::max(best_min, mn);
        if (mn >= M) return {K, traj, mn};
      }
      break;
    }
  }
  throw search_failure_error(K_cap, best_min);
}

struct TransformedSample {
  double t = 0;
  double w = 0;
  double wt = 0;
};

// Emden-Fowler image of a trajectory under t = r^{-(N-2+2a)}, w = v r^{-a}
// with a = alpha_+, where the radial equation collapses to
//   w_tt + c1 t^{-sigma} w^p = 0,  c1 = c / (N-2+2a)^2.
// Samples are kept in integration order, so t decreases from 1 toward T.
struct TransformedTrajectory {
  std::vector<TransformedSample> samples;
  double alpha = 0;
  double beta = 0;  // N - 2 + 2 alpha
  double sigma_ode = 0;
  double c1 = 0;
  double L = 0;  // -w_t(1) = (K - alpha delta) / beta
  double T = 0;  // R^{-beta}, 0 when R = infinity
  double delta = 0;

  double residual_rel_max = 0;    // of w_tt + c1 t^{-sigma} w^p, interior samples
  double concavity_defect_max = 0;  // max over interior of chord value minus w
  double w_min_interior = 0;
  double w_max_interior = 0;
  double w_max = 0;
};

inline TransformedTrajectory emden_fowler_transform(const Trajectory& traj, double alpha_plus,
                                                    const OdeParams& params) {
  const double beta = static_cast<double>(params.N - 2) + 2.0 * alpha_plus;
  if (!(beta > 0))
    throw std::domain_error("degenerate transform: N - 2 + 2 alpha_+ <= 0 (N = 2 with alpha_+ = 0)");
  if (traj.samples.size() < 8) throw std::invalid_argument("trajectory too short to transform");

  TransformedTrajectory out;
  out.alpha = alpha_plus;
  out.beta = beta;
  out.delta = traj.delta;
  out.sigma_ode = (2.0 * (params.N - 1) + alpha_plus * (params.p + 3.0) - params.s) / beta;
  out.c1 = params.c / (beta * beta);
  const double K = traj.samples.front().vr;
  out.L = (K - alpha_plus * traj.delta) / beta;
  out.T = traj.blew_down() ? std::pow(traj.R, -beta) : 0.0;

  out.samples.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    TransformedSample q;
    q.t = std::pow(s.r, -beta);
    q.w = s.v * std::pow(s.r, -alpha_plus);
    q.wt = -std::pow(s.r, beta + 1.0 - alpha_plus) * (s.vr - alpha_plus * s.v / s.r) / beta;
    out.samples.push_back(q);
  }

  const std::size_t n = out.samples.size();
  std::vector<double> ts(n), ws(n), wts(n);
  for (std::size_t i = 0; i < n; ++i) {
    ts[i] = out.samples[i].t;
    ws[i] = out.samples[i].w;
    wts[i] = out.samples[i].wt;
    out.w_max = std::max(out.w_max, out.samples[i].w);
  }

  // w_tt from the exact slope data by five-point differentiation; residual
  // normalized by the larger of the two competing terms.
  std::vector<double> scratch;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double wtt = detail::fd_derivative(ts, wts, i, 1, 5, scratch);
    const double force = out.c1 * std::pow(ts[i], -out.sigma_ode) *
                         std::pow(std::max(ws[i], 0.0), params.p);
    const double denom = std::max(std::abs(wtt), std::abs(force));
    if (denom > 0)
      out.residual_rel_max = std::max(out.residual_rel_max, std::abs(wtt + force) / denom);
  }

  out.w_min_interior = std::numeric_limits<double>::infinity();
  out.w_max_interior = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out.w_min_interior = std::min(out.w_min_interior, ws[i]);
    out.w_max_interior = std::max(out.w_max_interior, ws[i]);
    const double span = ts[i + 1] - ts[i - 1];
    const double chord = ws[i - 1] + (ws[i + 1] - ws[i - 1]) * (ts[i] - ts[i - 1]) / span;
    out.concavity_defect_max = std::max(out.concavity_defect_max, chord - ws[i]);
  }
  return out;
}

// The comparison-function field w_M = (v - delta) phi_1 on the tensor grid of
// the trajectory's own radii and the eigenfunction's angular nodes. Radial
// nodes are taken from the trajectory so no interpolation enters the discrete
// subsolution verification.
inline ConeField build_subsolution(const Trajectory& traj, const AngularGrid& phi1,
                                   const OdeParams& params) {
  if (!traj.blew_down())
    throw std::invalid_argument("subsolution field needs finite blow-down radius R");
  ConeField f;
  f.N = params.N;
  f.s = params.s;
  f.p = params.p;
  f.c = params.c;
  f.shift = traj.delta;
  f.r.reserve(traj.samples.size());
  std::vector<double> v;
  v.reserve(traj.samples.size());
  for (const auto& smp : traj.samples) {
    if (!f.r.empty() && !(smp.r > f.r.back())) continue;
    f.r.push_back(smp.r);
    v.push_back(smp.v);
  }
  f.theta = phi1.nodes;
  f.values.resize(f.r.size() * f.theta.size());
  for (std::size_t j = 0; j < f.r.size(); ++j)
    for (std::size_t i = 0; i < f.theta.size(); ++i)
      f.at(j, i) = (v[j] - traj.delta) * phi1.values[i];
  return f;
}

// Discrete embodiment of the comparison principle: both fields are first
// verified as sub/supersolution of -Delta w = c r^{-s} (w + delta)^p by their
// residual signs; ordering is asserted only for a verified pair.
struct ComparisonReport {
  bool sub_boundary_ok = false;
  bool sub_verified = false;
  bool super_verified = false;
  bool ordering_checked = false;
  bool ordered = false;
  double sub_margin_min = 0;    // min over interior of RHS - LHS for the subsolution
  double super_margin_min = 0;  // min over interior of LHS - RHS for the supersolution
  double max_sub_minus_super = 0;
  double tolerance = 0;
};

inline ComparisonReport comparison_check(const ConeField& sub, const ConeField& super,
                                         double margin_rel_tol = 0.02) {
  if (sub.r != super.r || sub.theta != super.theta)
    throw std::invalid_argument("comparison requires identical grids");
  if (sub.N != super.N || sub.s != super.s || sub.p != super.p || sub.c != super.c ||
      sub.shift != super.shift)
    throw std::invalid_argument("comparison requires identical equation parameters");

  ComparisonReport rep;
  const auto res_sub = residual_polar(sub);
  const auto res_super = residual_polar(super);
  const double tol = margin_rel_tol * std::max(res_sub.max_rhs, res_super.max_rhs);
  rep.tolerance = tol;

  double boundary_max = 0;
  for (std::size_t i = 0; i < sub.ntheta(); ++i) {
    boundary_max = std::max(boundary_max, std::abs(sub.at(0, i)));
    boundary_max = std::max(boundary_max, std::abs(sub.at(sub.nr() - 1, i)));
  }
  for (std::size_t j = 0; j < sub.nr(); ++j)
    boundary_max = std::max(boundary_max, std::abs(sub.at(j, sub.ntheta() - 1)));
  rep.sub_boundary_ok = boundary_max <= 1e-8 * std::max(1.0, *std::max_element(sub.values.begin(),
                                                                               sub.values.end()));

  double worst_sub = std::numeric_limits<double>::infinity();
  for (double v : res_sub.values) worst_sub = std::min(worst_sub, -v);
  rep.sub_margin_min = worst_sub;
  rep.sub_verified = rep.sub_boundary_ok && worst_sub >= -tol;

  double worst_super = std::numeric_limits<double>::infinity();
  for (double v : res_super.values) worst_super = std::min(worst_super, v);
  rep.super_margin_min = worst_super;
  rep.super_verified = worst_super >= -tol;

  if (rep.sub_verified && rep.super_verified) {
    rep.ordering_checked = true;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sub.values.size(); ++k)
      worst = std::max(worst, sub.values[k] - super.values[k]);
    rep.max_sub_minus_super = worst;
    const double scale = std::max(1.0, *std::max_element(super.values.begin(), super.values.end()));
    rep.ordered = worst <= 1e-9 * scale + tol;
  }
  return rep;
}

// Cross-section actually used for certificate grids: caps and arcs directly;
// the k = 1 orthant via its cap/arc realization (the halfsphere is the
// geodesic cap of aperture pi/2). Higher orthants have no 1-D grid geometry.
inline DomainSpec certificate_cross_section(const DomainSpec& domain) {
  domain.validate();
  if (domain.is_grid_representable()) return domain;
  if (const auto* o = std::get_if<Orthant>(&domain.shape)) {
    if (o->k == 1)
      return domain.N == 2 ? DomainSpec::arc(kPi) : DomainSpec::cap(domain.N, kPi / 2.0);
    throw unsupported_shape_error("certificates need an eigenfunction grid; orthant k >= 2 has none");
  }
  throw unsupported_shape_error("certificates need an eigenfunction grid, got " + domain.describe());
}

// Machine-checkable nonexistence evidence: a trajectory witness, the
// subsolution field w_M = (v - delta) phi_1 it induces, the verified discrete
// subsolution margin, and the minimum of w_M over the embedded compact
// [r_star, r_dstar] x {phi_1 >= 1/2}, which must reach the requested M.
struct Certificate {
  OdeParams params;
  double delta = 0;
  double M = 0;
  double K = 0;
  double R = 0;
  double r_star = 0;
  double r_dstar = 0;
  int angular_resolution = 0;
  double lambda1_used = 0;
  double min_on_compact = 0;
  double sub_margin_min = 0;
  double margin_tol = 0;
  bool verified = false;
  Trajectory trajectory;
  ConeField w_M;
};

inline Certificate nonexistence_certificate(const DomainSpec& domain, double s, double p, double c,
                                            double r_star, double r_dstar, double M,
                                            int resolution = 512, double step_tol = 1e-10,
                                            double K_cap = 1073741824.0) {
  domain.validate();
  if (!(M > 0)) throw std::domain_error("certificate size M must be positive");
  const double l1 = lambda1(domain, resolution);
  const SpectralData spec = alpha_roots(l1, domain.N);
  const Classification cls = classify(spec, s, p, c);
  if (cls.zone != Zone::not_exists && cls.zone != Zone::critical_nonexistence) {
    const ExtendedReal ps = p_star_sub(spec, s);
    throw regime_error("(s, p) = (" + std::to_string(s) + ", " + std::to_string(p) +
                       ") is not in the nonexistence range: need p_star <= p < 1 with s < 2" +
                       (ps.is_finite() && p < ps.value()
                            ? " (p = " + std::to_string(p) + " < p_star = " +
                                  std::to_string(ps.value()) + ")"
                            : ""));
  }
  OdeParams params{domain.N, l1, s, p, c};
  require_blowdown_hypothesis(params);

  const DomainSpec cross = certificate_cross_section(domain);
  const AngularGrid phi1 = principal_eigenfunction(cross, resolution);

  // min over the phi_1 >= 1/2 angular region is at least min(v - delta)/2, so
  // aim the trajectory minimum at 2M + delta.
  const double M_ode = 2.0 * M + params.delta();
  FindKResult hit = find_K(params, r_star, r_dstar, M_ode, K_cap, step_tol);

  Certificate cert;
  cert.params = params;
  cert.delta = params.delta();
  cert.M = M;
  cert.K = hit.K;
  cert.R = hit.trajectory.R;
  cert.r_star = r_star;
  cert.r_dstar = r_dstar;
  cert.angular_resolution = resolution;
  cert.lambda1_used = l1;
  cert.w_M = build_subsolution(hit.trajectory, phi1, params);
  cert.trajectory = std::move(hit.trajectory);

  const auto res = residual_polar(cert.w_M);
  double worst = std::numeric_limits<double>::infinity();
  for (double v : res.values) worst = std::min(worst, -v);
  cert.sub_margin_min = worst;
  cert.margin_tol = 0.02 * res.max_rhs;

  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < cert.w_M.nr(); ++j) {
    if (cert.w_M.r[j] < r_star || cert.w_M.r[j] > r_dstar) continue;
    for (std::size_t i = 0; i < cert.w_M.ntheta(); ++i) {
      if (phi1.values[i] < 0.5) continue;
      mn = std::min(mn, cert.w_M.at(j, i));
    }
  }
  cert.min_on_compact = mn;
  cert.verified = cert.trajectory.blew_down() && cert.R > r_dstar &&
                  cert.sub_margin_min >= -cert.margin_tol && cert.min_on_compact >= M;
  return cert;
}

}  // namespace conecrit
