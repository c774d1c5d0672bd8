#pragma once

#include <stdexcept>
#include <string>

namespace conecrit {

// Bad domain description (wrong shape/dimension combination, invalid angles).
class invalid_domain_error : public std::invalid_argument {
 public:
  explicit invalid_domain_error(const std::string& what) : std::invalid_argument(what) {}
};

// Operation needs a grid-representable cross-section (cap or arc).
class unsupported_shape_error : public std::invalid_argument {
 public:
  explicit unsupported_shape_error(const std::string& what) : std::invalid_argument(what) {}
};

// alpha_minus = 0 (N=2 with lambda1=0): superlinear/Kelvin exponents undefined.
class undefined_exponent_error : public std::domain_error {
 public:
  explicit undefined_exponent_error(const std::string& what) : std::domain_error(what) {}
};

// Shifted angular operator is not coercive: mu >= lambda1.
class coercivity_error : public std::domain_error {
 public:
  coercivity_error(double mu, double lambda1)
      : std::domain_error("operator -Delta_omega - mu is not coercive: mu = " + std::to_string(mu) +
                          " >= lambda1 = " + std::to_string(lambda1)),
        mu(mu),
        lambda1(lambda1) {}
  double mu;
  double lambda1;
};

// Parameters outside the regime an operation is valid in (existence/nonexistence gates).
class regime_error : public std::domain_error {
 public:
  explicit regime_error(const std::string& what) : std::domain_error(what) {}
};

// Fixed-point iteration hit its cap before reaching the residual tolerance.
class iteration_limit_error : public std::runtime_error {
 public:
  iteration_limit_error(int iterations, double last_residual)
      : std::runtime_error("iteration limit " + std::to_string(iterations) +
                           " reached, last residual " + std::to_string(last_residual)),
        iterations(iterations),
        last_residual(last_residual) {}
  int iterations;
  double last_residual;
};

// Doubling search for the shooting slope K exhausted its cap.
class search_failure_error : public std::runtime_error {
 public:
  search_failure_error(double k_cap, double best_min)
      : std::runtime_error("no K <= " + std::to_string(k_cap) +
                           " produced the requested trajectory; best min achieved " +
                           std::to_string(best_min)),
        k_cap(k_cap),
        best_min(best_min) {}
  double k_cap;
  double best_min;
};

}  // namespace conecrit
