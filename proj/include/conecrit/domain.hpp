#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "conecrit/errors.hpp"

namespace conecrit {

inline constexpr double kPi = 3.14159265358979323846;

// Cross-section shapes of the cone. Orthants and explicit eigenvalues are
// closed-form only; caps and arcs additionally carry a 1-D grid geometry.
struct Orthant {
  int k = 1;  // intersection of k halfspaces, 1 <= k <= N
};
struct Cap {
  double theta0 = kPi / 2;  // geodesic radius, 0 < theta0 < pi (N >= 3)
};
struct Arc {
  double length = kPi;  // arc length on S^1, 0 < length <= 2*pi (N = 2)
};
struct ExplicitLambda {
  double lambda1 = 0;  // user-supplied principal eigenvalue, >= 0
};

using Shape = std::variant<Orthant, Cap, Arc, ExplicitLambda>;

// The cross-section Omega of the cone together with the ambient dimension N.
struct DomainSpec {
  int N = 3;
  Shape shape = Cap{};

  static DomainSpec orthant(int N, int k) { return {N, Orthant{k}}; }
  static DomainSpec cap(int N, double theta0) { return {N, Cap{theta0}}; }
  static DomainSpec arc(double length) { return {2, Arc{length}}; }
  static DomainSpec explicit_lambda(int N, double lambda1) { return {N, ExplicitLambda{lambda1}}; }

  void validate() const {
    if (N < 2) throw invalid_domain_error("ambient dimension N must be >= 2, got " + std::to_string(N));
    if (const auto* o = std::get_if<Orthant>(&shape)) {
      if (o->k < 1 || o->k > N)
        throw invalid_domain_error("orthant order k must satisfy 1 <= k <= N, got k = " + std::to_string(o->k));
    } else if (const auto* c = std::get_if<Cap>(&shape)) {
      if (N == 2)
        throw invalid_domain_error("a cap on S^1 is an arc; use Arc{length} for N = 2");
      if (!(c->theta0 > 0.0 && c->theta0 < kPi))
        throw invalid_domain_error("cap aperture must lie in (0, pi), got " + std::to_string(c->theta0));
    } else if (const auto* a = std::get_if<Arc>(&shape)) {
      if (N != 2) throw invalid_domain_error("arcs exist only on S^1 (N = 2), got N = " + std::to_string(N));
      if (!(a->length > 0.0 && a->length <= 2.0 * kPi))
        throw invalid_domain_error("arc length must lie in (0, 2*pi], got " + std::to_string(a->length));
    } else if (const auto* e = std::get_if<ExplicitLambda>(&shape)) {
      if (!(e->lambda1 >= 0.0))
        throw invalid_domain_error("explicit lambda1 must be >= 0, got " + std::to_string(e->lambda1));
    }
  }

  bool is_grid_representable() const {
    return std::holds_alternative<Cap>(shape) || std::holds_alternative<Arc>(shape);
  }

  // Angular width of the grid-representable shapes (cap aperture / arc length).
  double theta0() const {
    if (const auto* c = std::get_if<Cap>(&shape)) return c->theta0;
    if (const auto* a = std::get_if<Arc>(&shape)) return a->length;
    throw unsupported_shape_error("shape has no angular extent (orthant or explicit lambda1)");
  }

  std::string describe() const {
    if (const auto* o = std::get_if<Orthant>(&shape)) return "orthant:" + std::to_string(o->k);
    if (const auto* c = std::get_if<Cap>(&shape)) return "cap:" + std::to_string(c->theta0);
    if (const auto* a = std::get_if<Arc>(&shape)) return "arc:" + std::to_string(a->length);
    return "explicit:" + std::to_string(std::get<ExplicitLambda>(shape).lambda1);
  }
};

// Samples of an angular function on (0, theta0]. The last node is always the
// Dirichlet endpoint theta0; interior nodes carry the unknowns. The measure on
// the cross-section is sin^{N-2}(theta) dtheta, recorded via weight_exponent.
struct AngularGrid {
  std::vector<double> nodes;
  std::vector<double> values;
  int weight_exponent = 1;  // N - 2

  double theta0() const { return nodes.back(); }
  std::size_t size() const { return nodes.size(); }
  std::size_t interior_count() const { return nodes.size() - 1; }

  double max_abs() const {
    double m = 0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

}  // namespace conecrit
