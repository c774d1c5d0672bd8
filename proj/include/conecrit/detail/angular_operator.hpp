#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "conecrit/detail/tridiag.hpp"
#include "conecrit/domain.hpp"
#include "conecrit/errors.hpp"

namespace conecrit::detail {

// Finite-volume discretization of the weighted Sturm-Liouville operator
//   L psi = -(sin^{N-2}(t) psi')' / sin^{N-2}(t)   on (0, theta0),
// Dirichlet at theta0. Two node layouts:
//
//  - Cap (N >= 3): cell-centered nodes t_i = (i + 1/2) h, h = theta0/m. The
//    weight sin^{N-2} vanishes at t = 0, so the left boundary flux drops out
//    and the regularity condition at the axis needs no special row.
//  - Arc (N = 2): vertex-centered interior nodes t_i = (i+1) h, h = L/(m+1),
//    Dirichlet at both endpoints. Sampled polynomials of degree <= 2 satisfy
//    the interior rows exactly, which the arc oracles rely on.
//
// Unknowns are coupled through face conductances c[0..m]; c[0] and c[m] tie
// the first/last unknown to zero-valued boundary ghosts.
struct AngularOperator {
  std::vector<double> theta;     // unknown locations, strictly increasing
  std::vector<double> coupling;  // size m+1
  std::vector<double> mass;      // lumped measure per unknown, size m
  double theta0 = 0;
  int N = 3;

  std::size_t m() const { return theta.size(); }

  // Stiffness matrix A with A_ii = c_i + c_{i+1}, A_{i,i+1} = -c_{i+1}.
  SymTridiag stiffness() const {
    SymTridiag a;
    const std::size_t n = m();
    a.diag.resize(n);
    a.off.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) a.diag[i] = coupling[i] + coupling[i + 1];
    for (std::size_t i = 0; i + 1 < n; ++i) a.off[i] = -coupling[i + 1];
    return a;
  }

  // A - mu * D (still symmetric tridiagonal).
  SymTridiag shifted(double mu) const {
    SymTridiag a = stiffness();
    for (std::size_t i = 0; i < m(); ++i) a.diag[i] -= mu * mass[i];
    return a;
  }

  // Standard symmetric form B = D^{-1/2} A D^{-1/2} of the pencil (A, D).
  SymTridiag standard_form() const {
    SymTridiag a = stiffness();
    const std::size_t n = m();
    for (std::size_t i = 0; i < n; ++i) a.diag[i] /= mass[i];
    for (std::size_t i = 0; i + 1 < n; ++i) a.off[i] /= std::sqrt(mass[i] * mass[i + 1]);
    return a;
  }

  // (A x)_i / D_ii: the discrete L psi at unknown i, for x given at unknowns.
  std::vector<double> apply(const std::vector<double>& x) const {
    std::vector<double> y;
    stiffness().apply(x, y);
    for (std::size_t i = 0; i < m(); ++i) y[i] /= mass[i];
    return y;
  }

  double rayleigh(const std::vector<double>& x) const {
    const SymTridiag a = stiffness();
    double num = a.quadratic_form(x);
    double den = 0;
    for (std::size_t i = 0; i < m(); ++i) den += mass[i] * x[i] * x[i];
    return num / den;
  }

  // Grid with the boundary node appended (Dirichlet value supplied).
  AngularGrid to_grid(const std::vector<double>& x, double boundary_value) const {
    AngularGrid g;
    g.nodes = theta;
    g.nodes.push_back(theta0);
    g.values = x;
    g.values.push_back(boundary_value);
    g.weight_exponent = N - 2;
    return g;
  }
};

inline AngularOperator make_angular_operator(const DomainSpec& domain, int resolution) {
  domain.validate();
  if (!domain.is_grid_representable())
    throw unsupported_shape_error("no grid geometry for shape " + domain.describe());
  if (resolution < 16)
    throw invalid_domain_error("resolution must be >= 16, got " + std::to_string(resolution));

  AngularOperator op;
  op.N = domain.N;
  op.theta0 = domain.theta0();
  const std::size_t m = static_cast<std::size_t>(resolution);
  op.theta.resize(m);
  op.coupling.resize(m + 1);
  op.mass.resize(m);

  if (std::holds_alternative<Cap>(domain.shape)) {
    const double h = op.theta0 / static_cast<double>(m);
    const int q = domain.N - 2;
    auto weight = [&](double t) { return std::pow(std::sin(t), q); };
    for (std::size_t i = 0; i < m; ++i) {
      op.theta[i] = (static_cast<double>(i) + 0.5) * h;
      op.mass[i] = weight(op.theta[i]) * h;
    }
    op.coupling[0] = 0.0;  // weight vanishes at the axis for N >= 3
    for (std::size_t i = 1; i < m; ++i) op.coupling[i] = weight(static_cast<double>(i) * h) / h;
    op.coupling[m] = 2.0 * weight(op.theta0) / h;  // Dirichlet ghost at distance h/2
  } else {
    const double h = op.theta0 / static_cast<double>(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
      op.theta[i] = static_cast<double>(i + 1) * h;
      op.mass[i] = h;
    }
    for (std::size_t i = 0; i <= m; ++i) op.coupling[i] = 1.0 / h;
  }
  return op;
}

}  // namespace conecrit::detail
