#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "conecrit/detail/angular_operator.hpp"
#include "conecrit/detail/fornberg.hpp"
#include "conecrit/detail/tridiag.hpp"
#include "conecrit/domain.hpp"
#include "conecrit/errors.hpp"
#include "conecrit/exponents.hpp"

namespace conecrit {

namespace detail {

// (A - mu D) x = D rhs on the unknowns; pivot positivity of the factorization
// certifies coercivity of the shifted operator at this resolution.
inline std::vector<double> solve_shifted(const AngularOperator& op, double mu,
                                         const std::vector<double>& rhs) {
  const SymTridiag a = op.shifted(mu);
  TridiagFactor f = TridiagFactor::make(a);
  if (!f.positive_definite) {
    const double l1 = principal_eigenpair(op.standard_form()).value;
    throw coercivity_error(mu, l1);
  }
  std::vector<double> x(op.m());
  for (std::size_t i = 0; i < op.m(); ++i) x[i] = op.mass[i] * rhs[i];
  f.solve(x);
  return x;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace detail

// Solution of -Delta_omega phi - mu phi = rhs with Dirichlet data, as a grid
// function (zero appended at theta0). The resolution is taken from the rhs.
inline AngularGrid solve_linear_angular(const DomainSpec& domain, double mu,
                                        const AngularGrid& rhs) {
  const auto op = detail::make_angular_operator(domain, static_cast<int>(rhs.interior_count()));
  std::vector<double> r(rhs.values.begin(), rhs.values.end() - 1);
  return op.to_grid(detail::solve_shifted(op, mu, r), 0.0);
}

inline AngularGrid constant_grid(const DomainSpec& domain, int resolution, double value) {
  const auto op = detail::make_angular_operator(domain, resolution);
  return op.to_grid(std::vector<double>(op.m(), value), value);
}

// Sub/supersolution scaling constants for the case p in [0,1):
//   eps^{1-p} (lambda1 - mu) <= 1   makes eps*phi1 a subsolution,
//   tau^{1-p} >= ||phibar||_inf^p  makes tau*phibar a supersolution.
// Both inequalities are re-checked nodewise on the discrete data.
struct BracketConstants {
  double epsilon = 0;
  double tau = 0;
};

inline BracketConstants bracket_constants(const DomainSpec& domain, double mu, double p,
                                          int resolution = 1024) {
  if (!(p >= 0.0 && p < 1.0))
    throw regime_error("bracket constants are defined for p in [0,1), got p = " + std::to_string(p));
  const auto op = detail::make_angular_operator(domain, resolution);
  const auto pair = detail::principal_eigenpair(op.standard_form());
  const double l1 = pair.value;
  if (!(mu < l1)) throw coercivity_error(mu, l1);

  const auto phibar = detail::solve_shifted(op, mu, std::vector<double>(op.m(), 1.0));
  const double phibar_max = *std::max_element(phibar.begin(), phibar.end());

  BracketConstants bc;
  bc.epsilon = std::min(1.0, std::pow(1.0 / (l1 - mu), 1.0 / (1.0 - p)));
  bc.tau = std::max(1.0, std::pow(phibar_max, p / (1.0 - p)));

  // Nodewise verification of the defining inequalities.
  std::vector<double> phi1 = pair.vector;
  for (std::size_t i = 0; i < op.m(); ++i) phi1[i] /= std::sqrt(op.mass[i]);
  const double peak = *std::max_element(phi1.begin(), phi1.end());
  for (std::size_t i = 0; i < op.m(); ++i) {
    const double sub = bc.epsilon * (l1 - mu) * phi1[i] / peak -
                       std::pow(bc.epsilon * phi1[i] / peak, p);
    const double super = bc.tau - std::pow(bc.tau * phibar[i], p);
    if (sub > 1e-12 || super < -1e-12)
      throw std::logic_error("bracket constants failed the discrete inequality check");
  }
  return bc;
}

// Discrete angular solution of the separated equation together with the
// iteration diagnostics and the ordered pair that sandwiches it.
struct AngularSolution {
  AngularGrid grid;  // psi samples, boundary node included
  double alpha = 0;
  double p = 0;
  double mu = 0;
  int iterations = 0;
  double residual_max = 0;
  AngularGrid bracket_low;
  AngularGrid bracket_high;
  // Largest nodewise increase between successive iterates; the descending
  // scheme keeps this at (numerical) zero.
  double monotone_defect = 0;
};

// Monotone sub/supersolution iteration for
//   -Delta_omega psi - mu psi = psi^p,  mu = alpha (alpha + N - 2),
// descending from the supersolution. For p in [0,1) the plain fixed-point map
// is order-preserving; for p < 0 the equation is solved in the shifted form on
// phi = psi - 1 with the Lipschitz shift |p| keeping the iteration monotone.
inline AngularSolution solve_psi(const DomainSpec& domain, double alpha, double p,
                                 double tol = 1e-8, int resolution = 1024,
                                 int iteration_cap = 100000) {
  if (!(p < 1.0)) throw regime_error("separated solutions need p < 1, got p = " + std::to_string(p));
  const auto op = detail::make_angular_operator(domain, resolution);
  const double mu = alpha * (alpha + static_cast<double>(domain.N - 2));
  const auto pair = detail::principal_eigenpair(op.standard_form());
  const double l1 = pair.value;
  if (!(mu > 0.0))
    throw regime_error("alpha = " + std::to_string(alpha) +
                       " lies outside the coercivity window: alpha(alpha+N-2) = " +
                       std::to_string(mu) + " <= 0");
  if (!(mu < l1)) throw coercivity_error(mu, l1);

  const std::size_t m = op.m();
  const detail::TridiagFactor plain = detail::TridiagFactor::make(op.shifted(mu));

  auto solve_with = [&](const detail::TridiagFactor& f, const std::vector<double>& rhs) {
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = op.mass[i] * rhs[i];
    f.solve(x);
    return x;
  };

  AngularSolution out;
  out.alpha = alpha;
  out.p = p;
  out.mu = mu;

  if (p >= 0.0) {
    std::vector<double> phi1 = pair.vector;
    for (std::size_t i = 0; i < m; ++i) phi1[i] /= std::sqrt(op.mass[i]);
    const double peak = *std::max_element(phi1.begin(), phi1.end());
    for (double& v : phi1) v /= peak;

    const auto phibar = solve_with(plain, std::vector<double>(m, 1.0));
    const double phibar_max = *std::max_element(phibar.begin(), phibar.end());
    const double eps = std::min(1.0, std::pow(1.0 / (l1 - mu), 1.0 / (1.0 - p)));
    double tau = std::max(1.0, std::pow(phibar_max, p / (1.0 - p)));
    for (int guard = 0; guard < 64; ++guard) {
      bool ordered = true;
      for (std::size_t i = 0; i < m; ++i)
        if (tau * phibar[i] < eps * phi1[i]) ordered = false;
      if (ordered) break;
      tau *= 2.0;
    }

    std::vector<double> psi(m), rhs(m), next;
    for (std::size_t i = 0; i < m; ++i) psi[i] = tau * phibar[i];
    double residual = 0;
    int stalled = 0;
    for (int it = 1; it <= iteration_cap; ++it) {
      for (std::size_t i = 0; i < m; ++i) rhs[i] = std::pow(std::max(psi[i], 0.0), p);
      next = solve_with(plain, rhs);
      double rise = 0;
      for (std::size_t i = 0; i < m; ++i) rise = std::max(rise, next[i] - psi[i]);
      out.monotone_defect = std::max(out.monotone_defect, rise);
      const double diff = detail::max_abs_diff(next, psi);
      psi.swap(next);
      const auto lpsi = op.apply(psi);
      residual = 0;
      for (std::size_t i = 0; i < m; ++i)
        residual = std::max(residual,
                            std::abs(lpsi[i] - mu * psi[i] - std::pow(std::max(psi[i], 0.0), p)));
      out.iterations = it;
      if (diff < tol / 10.0 && residual <= tol) break;
      // Iterates pinned at the discrete fixed point with the residual still
      // above tol means tol sits below the roundoff floor of this resolution.
      stalled = diff <= 1e-15 * std::max(1.0, psi[0]) ? stalled + 1 : 0;
      if (stalled > 40 || it == iteration_cap) throw iteration_limit_error(it, residual);
    }
    out.residual_max = residual;
    out.grid = op.to_grid(psi, 0.0);
    std::vector<double> low(m), high(m);
    for (std::size_t i = 0; i < m; ++i) {
      low[i] = eps * phi1[i];
      high[i] = tau * phibar[i];
    }
    out.bracket_low = op.to_grid(low, 0.0);
    out.bracket_high = op.to_grid(high, 0.0);
    return out;
  }

  // p < 0: solve -Delta phi - mu (phi + 1) = (phi + 1)^p for phi >= 0.
  // The nonlinearity decreases in phi, so the monotone scheme runs on the
  // shifted operator A - mu D + M D with M = |p| >= sup |d/dphi (phi+1)^p|.
  const double shift = -p;
  const detail::TridiagFactor shifted = detail::TridiagFactor::make(op.shifted(mu - shift));
  std::vector<double> rhs1(m, 1.0 + mu);
  const auto phibar = solve_with(plain, rhs1);  // supersolution of the phi problem
  std::vector<double> phi = phibar, rhs(m), next;
  double residual = 0;
  int stalled = 0;
  for (int it = 1; it <= iteration_cap; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      const double base = std::max(phi[i], 0.0) + 1.0;
      rhs[i] = std::pow(base, p) + mu + shift * phi[i];
    }
    next = solve_with(shifted, rhs);
    double rise = 0;
    for (std::size_t i = 0; i < m; ++i) rise = std::max(rise, next[i] - phi[i]);
    out.monotone_defect = std::max(out.monotone_defect, rise);
    const double diff = detail::max_abs_diff(next, phi);
    phi.swap(next);
    const auto lphi = op.apply(phi);
    residual = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double base = std::max(phi[i], 0.0) + 1.0;
      residual = std::max(residual, std::abs(lphi[i] - mu * base - std::pow(base, p)));
    }
    out.iterations = it;
    if (diff < tol / 10.0 && residual <= tol) break;
    stalled = diff <= 1e-15 * std::max(1.0, 1.0 + phi[0]) ? stalled + 1 : 0;
    if (stalled > 40 || it == iteration_cap) throw iteration_limit_error(it, residual);
  }
  out.residual_max = residual;
  std::vector<double> psi(m);
  for (std::size_t i = 0; i < m; ++i) psi[i] = phi[i] + 1.0;
  out.grid = op.to_grid(psi, 1.0);
  std::vector<double> high(m);
  for (std::size_t i = 0; i < m; ++i) high[i] = phibar[i] + 1.0;
  out.bracket_low = op.to_grid(std::vector<double>(m, 1.0), 1.0);
  out.bracket_high = op.to_grid(high, 1.0);
  return out;
}

// Tensor-product field u(r_j, theta_i) over a radial window of the cone.
// The radial nodes are geometric so power-law profiles keep uniform relative
// resolution. RHS evaluations use (u + shift)^p; shift is 0 for the direct
// equation and delta for the shifted nonexistence form.
struct ConeField {
  std::vector<double> r;
  std::vector<double> theta;
  std::vector<double> values;  // row-major, values[j * theta.size() + i]
  int N = 3;
  double s = 0;
  double p = 0;
  double c = 1;
  double shift = 0;

  std::size_t nr() const { return r.size(); }
  std::size_t ntheta() const { return theta.size(); }
  double at(std::size_t j, std::size_t i) const { return values[j * theta.size() + i]; }
  double& at(std::size_t j, std::size_t i) { return values[j * theta.size() + i]; }
};

inline std::vector<double> geometric_nodes(double r_min, double r_max, int count) {
  std::vector<double> r(count);
  const double step = std::log(r_max / r_min) / static_cast<double>(count - 1);
  for (int j = 0; j < count; ++j) r[j] = r_min * std::exp(step * j);
  r.front() = r_min;
  r.back() = r_max;
  return r;
}

// The explicit positive solution u = c^{1/(1-p)} r^alpha psi(theta) sampled on
// a tensor grid.
inline ConeField build_supersolution(const AngularSolution& solution, double c, double s,
                                     double r_min, double r_max, int radial_resolution) {
  if (!(c > 0)) throw std::domain_error("coupling c must be positive");
  ConeField f;
  f.N = solution.grid.weight_exponent + 2;
  f.s = s;
  f.p = solution.p;
  f.c = c;
  f.shift = 0;
  f.r = geometric_nodes(r_min, r_max, radial_resolution);
  f.theta = solution.grid.nodes;
  f.values.resize(f.r.size() * f.theta.size());
  const double amp = std::pow(c, 1.0 / (1.0 - solution.p));
  for (std::size_t j = 0; j < f.r.size(); ++j) {
    const double radial = amp * std::pow(f.r[j], solution.alpha);
    for (std::size_t i = 0; i < f.theta.size(); ++i)
      f.at(j, i) = radial * solution.grid.values[i];
  }
  return f;
}

// Pointwise finite-difference residual of the polar equation
//   -u_rr - (N-1)/r u_r - (1/r^2) Delta_omega u = c r^{-s} (u + shift)^p
// at interior nodes, using five-point stencils valid on the nonuniform grids
// in use. Interior means radial index 1..nr-2 and angular index 0..ntheta-2
// (the first angular node of a cap is a regular interior point).
struct PolarResidual {
  std::vector<double> values;  // row-major over the evaluated window
  std::size_t nr = 0;          // evaluated radial count
  std::size_t ntheta = 0;      // evaluated angular count
  double max_abs = 0;
  double max_rhs = 0;

  double max_relative() const { return max_abs / max_rhs; }
  double at(std::size_t j, std::size_t i) const { return values[j * ntheta + i]; }
};

inline PolarResidual residual_polar(const ConeField& field) {
  const std::size_t nr = field.nr(), nth = field.ntheta();
  constexpr std::size_t kWindow = 5;
  if (nr < kWindow + 1 || nth < kWindow + 1)
    throw std::invalid_argument("grid too coarse for the polar residual stencils");

  // Weight tables: wr[j] holds the 5-point weights for d/dr and d^2/dr^2 at
  // r_j; likewise wt[i] over theta. lo arrays record each window's offset.
  // Angular stencils stay on the first nth-1 nodes: solver output carries a
  // smooth O(h^2) error at those nodes but is exact at the appended Dirichlet
  // node, and mixing the two inside one stencil would destroy the order.
  std::vector<double> scratch;
  std::vector<std::array<double, 2 * kWindow>> wr(nr), wt(nth);
  std::vector<std::size_t> lo_r(nr), lo_t(nth);
  auto fill = [&](std::span<const double> x, std::vector<std::array<double, 2 * kWindow>>& w,
                  std::vector<std::size_t>& lo) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::size_t l = (i >= kWindow / 2) ? i - kWindow / 2 : 0;
      if (l + kWindow > x.size()) l = x.size() - kWindow;
      lo[i] = l;
      detail::fd_weights(x[i], x.subspan(l, kWindow), 2, scratch);
      for (std::size_t k = 0; k < kWindow; ++k) {
        w[i][k] = scratch[kWindow + k];            // first derivative row
        w[i][kWindow + k] = scratch[2 * kWindow + k];  // second derivative row
      }
    }
  };
  fill(field.r, wr, lo_r);
  fill(std::span(field.theta).first(nth - 1), wt, lo_t);

  PolarResidual res;
  res.nr = nr - 2;
  res.ntheta = nth - 1;
  res.values.resize(res.nr * res.ntheta);
  const double cot_exp = static_cast<double>(field.N - 2);
  for (std::size_t j = 1; j + 1 < nr; ++j) {
    const double r = field.r[j];
    for (std::size_t i = 0; i + 1 < nth; ++i) {
      double ur = 0, urr = 0, ut = 0, utt = 0;
      for (std::size_t k = 0; k < kWindow; ++k) {
        const double vr = field.at(lo_r[j] + k, i);
        ur += wr[j][k] * vr;
        urr += wr[j][kWindow + k] * vr;
        const double vt = field.at(j, lo_t[i] + k);
        ut += wt[i][k] * vt;
        utt += wt[i][kWindow + k] * vt;
      }
      const double th = field.theta[i];
      const double lap_omega = utt + cot_exp * (std::cos(th) / std::sin(th)) * ut;
      const double lhs = -urr - (field.N - 1) / r * ur - lap_omega / (r * r);
      const double rhs =
          field.c * std::pow(r, -field.s) * std::pow(field.at(j, i) + field.shift, field.p);
      const double v = lhs - rhs;
      res.values[(j - 1) * res.ntheta + i] = v;
      res.max_abs = std::max(res.max_abs, std::abs(v));
      res.max_rhs = std::max(res.max_rhs, std::abs(rhs));
    }
  }
  return res;
}

}  // namespace conecrit
