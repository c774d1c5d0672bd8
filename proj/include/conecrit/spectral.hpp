#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "conecrit/detail/angular_operator.hpp"
#include "conecrit/detail/tridiag.hpp"
#include "conecrit/domain.hpp"
#include "conecrit/errors.hpp"

namespace conecrit {

// Principal Dirichlet eigenvalue of the Laplace-Beltrami operator on the
// cross-section. Closed forms where available:
//   orthant S_k:    k (k + N - 2)
//   arc of length L on S^1:  (pi / L)^2
//   explicit:       the stored value
// Caps are solved numerically on the cell-centered grid; the result converges
// at second order in 1/resolution.
inline double lambda1(const DomainSpec& domain, int resolution = 1024) {
  domain.validate();
  if (const auto* o = std::get_if<Orthant>(&domain.shape))
    return static_cast<double>(o->k) * static_cast<double>(o->k + domain.N - 2);
  if (const auto* e = std::get_if<ExplicitLambda>(&domain.shape)) return e->lambda1;
  if (const auto* a = std::get_if<Arc>(&domain.shape)) {
    const double r = kPi / a->length;
    return r * r;
  }
  const auto op = detail::make_angular_operator(domain, resolution);
  return detail::principal_eigenpair(op.standard_form()).value;
}

// Principal eigenfunction sampled on the grid, normalized so the largest
// sample equals 1 (the sup-norm proxy), zero at theta0. Grid-representable
// shapes only; arcs get the exact sin profile.
inline AngularGrid principal_eigenfunction(const DomainSpec& domain, int resolution = 1024) {
  domain.validate();
  if (!domain.is_grid_representable())
    throw unsupported_shape_error("principal eigenfunction needs a cap or arc, got " +
                                  domain.describe());
  auto op = detail::make_angular_operator(domain, resolution);
  std::vector<double> values;
  if (std::holds_alternative<Arc>(domain.shape)) {
    const double L = domain.theta0();
    values.resize(op.m());
    for (std::size_t i = 0; i < op.m(); ++i) values[i] = std::sin(kPi * op.theta[i] / L);
  } else {
    auto pair = detail::principal_eigenpair(op.standard_form());
    // Back-transform the standard-form eigenvector to the pencil (A, D).
    values = std::move(pair.vector);
    for (std::size_t i = 0; i < op.m(); ++i) values[i] /= std::sqrt(op.mass[i]);
  }
  const double peak = *std::max_element(values.begin(), values.end());
  for (double& v : values) v /= peak;
  return op.to_grid(values, 0.0);
}

// Discrete Rayleigh quotient of a grid function with respect to the domain's
// discretization (boundary node excluded from the unknown vector).
inline double rayleigh_quotient(const DomainSpec& domain, const AngularGrid& grid) {
  const auto op = detail::make_angular_operator(domain, static_cast<int>(grid.interior_count()));
  std::vector<double> x(grid.values.begin(), grid.values.end() - 1);
  return op.rayleigh(x);
}

// Max-norm residual of the discrete eigen-equation, |A phi - lambda D phi|
// scaled by D, for diagnostics and tests.
inline double eigen_residual(const DomainSpec& domain, double lambda, const AngularGrid& grid) {
  const auto op = detail::make_angular_operator(domain, static_cast<int>(grid.interior_count()));
  std::vector<double> x(grid.values.begin(), grid.values.end() - 1);
  const auto lx = op.apply(x);
  double r = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) r = std::max(r, std::abs(lx[i] - lambda * x[i]));
  return r;
}

}  // namespace conecrit
