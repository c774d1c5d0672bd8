#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>

#include "conecrit/errors.hpp"

namespace conecrit {

// Real number extended by -infinity, the value the sublinear critical exponent
// takes when alpha_plus = 0. Kept as an explicit state rather than a float
// sentinel so comparisons and serialization cannot go wrong silently.
class ExtendedReal {
 public:
  constexpr ExtendedReal(double v) : finite_(true), v_(v) {}  // NOLINT: implicit by design
  static constexpr ExtendedReal neg_infinity() { return ExtendedReal(); }

  bool is_neg_infinity() const { return !finite_; }
  bool is_finite() const { return finite_; }
  double value() const {
    if (!finite_) throw std::domain_error("extended real is -infinity");
    return v_;
  }
  double value_or(double fallback) const { return finite_ ? v_ : fallback; }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    if (!a.finite_ || !b.finite_) return a.finite_ == b.finite_;
    return a.v_ == b.v_;
  }
  friend std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
    if (!a.finite_ && !b.finite_) return std::partial_ordering::equivalent;
    if (!a.finite_) return std::partial_ordering::less;
    if (!b.finite_) return std::partial_ordering::greater;
    return a.v_ <=> b.v_;
  }

 private:
  constexpr ExtendedReal() : finite_(false), v_(0) {}
  bool finite_;
  double v_;
};

// lambda1 with the roots alpha_+ >= 0 >= alpha_- of a(a + N - 2) = lambda1.
// r^{alpha_+} phi_1 and r^{alpha_-} phi_1 are the homogeneous harmonics of the
// cone; every exponent formula below is built from this pair.
struct SpectralData {
  double lambda1 = 0;
  double alpha_plus = 0;
  double alpha_minus = 0;
  int N = 2;
};

inline SpectralData alpha_roots(double lambda1, int N) {
  if (!(lambda1 >= 0)) throw std::domain_error("lambda1 must be >= 0, got " + std::to_string(lambda1));
  if (N < 2) throw std::domain_error("N must be >= 2, got " + std::to_string(N));
  const double b = static_cast<double>(N - 2);
  const double disc = std::sqrt(b * b + 4.0 * lambda1);
  SpectralData s;
  s.lambda1 = lambda1;
  s.N = N;
  s.alpha_plus = 0.5 * (-b + disc);
  s.alpha_minus = -b - s.alpha_plus;  // the conjugate root 2 - N - alpha_plus
  return s;
}

// Sublinear critical exponent p_* = min{1 - (2-s)/alpha_+, 1}; -infinity when
// alpha_+ = 0 (then no p < 1 admits a positive supersolution).
inline ExtendedReal p_star_sub(const SpectralData& spec, double s) {
  if (spec.alpha_plus == 0.0) return ExtendedReal::neg_infinity();
  return std::min(1.0 - (2.0 - s) / spec.alpha_plus, 1.0);
}

// Superlinear critical exponent p^* = 1 - (2-s)/alpha_-, clamped at 1 so that
// s >= 2 reports the known threshold p^* = 1.
inline double p_star_super(const SpectralData& spec, double s) {
  if (spec.alpha_minus == 0.0)
    throw undefined_exponent_error("alpha_minus = 0 (N = 2, lambda1 = 0): p^* undefined");
  return std::max(1.0 - (2.0 - s) / spec.alpha_minus, 1.0);
}

// Weight exponent produced by the Kelvin inversion y = x/|x|^2:
// sigma = (N+2) - p(N-2) - s.
inline double kelvin_sigma(double p, double s, int N) {
  return static_cast<double>(N + 2) - p * static_cast<double>(N - 2) - s;
}

// Sublinear critical exponent of the Kelvin-transformed equation on the
// punctured finite cone: min{1 - (2-sigma)/alpha_-, 1}.
inline ExtendedReal p_star_sub_kelvin(const SpectralData& spec, double sigma) {
  if (spec.alpha_minus == 0.0)
    throw undefined_exponent_error("alpha_minus = 0 (N = 2, lambda1 = 0): Kelvin exponent undefined");
  return std::min(1.0 - (2.0 - sigma) / spec.alpha_minus, 1.0);
}

// Largest coupling c for which the s = 2, p = 1 linear equation with Hardy
// potential c|x|^{-2} keeps a positive supersolution: (N-2)^2/4 + lambda1.
inline double linear_threshold(const SpectralData& spec) {
  const double b = static_cast<double>(spec.N - 2);
  return 0.25 * b * b + spec.lambda1;
}

// Separation exponent of the explicit supersolution, alpha = (2-s)/(1-p).
// For s <= 2 and p below p_* it lands in the coercivity window
// 0 < alpha(alpha + N - 2) < lambda1.
inline double supersolution_alpha(double p, double s) {
  if (!(p < 1.0)) throw std::domain_error("supersolution exponent needs p < 1, got p = " + std::to_string(p));
  return (2.0 - s) / (1.0 - p);
}

enum class Zone {
  exists,
  not_exists,
  critical_nonexistence,
  linear_case,
  unspecified,
};

struct Classification {
  Zone zone = Zone::unspecified;
  std::optional<double> c_max;  // set in the linear case s = 2, p = 1
};

inline const char* zone_name(Zone z) {
  switch (z) {
    case Zone::exists: return "exists";
    case Zone::not_exists: return "not_exists";
    case Zone::critical_nonexistence: return "critical";
    case Zone::linear_case: return "linear_case";
    case Zone::unspecified: return "unspecified";
  }
  return "unspecified";
}

// Places a parameter triple (s, p, c) in the existence / nonexistence diagram.
// The zones depend on c only through the reported threshold at s = 2, p = 1.
// Lines the theory leaves open (p = 1 with s < 2, and p != 1 at s = 2) are
// reported as unspecified rather than guessed.
inline Classification classify(const SpectralData& spec, double s, double p, double c) {
  if (!(c > 0)) throw std::domain_error("coupling c must be positive, got " + std::to_string(c));
  if (s > 2.0) return {Zone::exists, std::nullopt};
  if (s == 2.0) {
    if (p == 1.0) return {Zone::linear_case, linear_threshold(spec)};
    return {Zone::unspecified, std::nullopt};
  }
  if (p == 1.0) return {Zone::unspecified, std::nullopt};
  if (p < 1.0) {
    const ExtendedReal ps = p_star_sub(spec, s);
    if (ExtendedReal(p) < ps) return {Zone::exists, std::nullopt};
    if (ExtendedReal(p) == ps) return {Zone::critical_nonexistence, std::nullopt};
    return {Zone::not_exists, std::nullopt};
  }
  const double psup = p_star_super(spec, s);
  if (p < psup) return {Zone::not_exists, std::nullopt};
  if (p == psup) return {Zone::critical_nonexistence, std::nullopt};
  return {Zone::exists, std::nullopt};
}

// Everything the reporting surface wants about one (domain, s[, p]) query.
struct CriticalReport {
  SpectralData spec;
  double s = 0;
  ExtendedReal p_star_sub_value = ExtendedReal(0);
  double p_star_super_value = 0;
  bool p_star_super_defined = false;
  double linear_threshold_c = 0;
  std::optional<double> sigma_kelvin_value;         // present when p was given
  std::optional<ExtendedReal> p_star_sub_kelvin_value;
  std::optional<Classification> classification;     // present when p was given
};

inline CriticalReport critical_report(const SpectralData& spec, double s,
                                      std::optional<double> p = std::nullopt, double c = 1.0) {
  CriticalReport r{spec, s, p_star_sub(spec, s), 0, false, linear_threshold(spec)};
  if (spec.alpha_minus != 0.0) {
    r.p_star_super_value = p_star_super(spec, s);
    r.p_star_super_defined = true;
  }
  if (p) {
    const double sigma = kelvin_sigma(*p, s, spec.N);
    r.sigma_kelvin_value = sigma;
    if (spec.alpha_minus != 0.0) r.p_star_sub_kelvin_value = p_star_sub_kelvin(spec, sigma);
    r.classification = classify(spec, s, *p, c);
  }
  return r;
}

}  // namespace conecrit
