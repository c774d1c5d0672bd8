#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "conecrit/angular.hpp"
#include "conecrit/domain.hpp"
#include "conecrit/exponents.hpp"
#include "conecrit/shooting.hpp"

namespace conecrit {

// Fixed-format float printing: 17 significant digits, round-trip exact and
// byte-deterministic. Non-finite values become quoted strings in JSON.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Minimal ordered JSON object writer. Keys appear exactly in insertion order;
// no timestamps or environment data ever enter the document.
class JsonWriter {
 public:
  JsonWriter& begin() {
    out_ += "{";
    fresh_ = true;
    return *this;
  }
  JsonWriter& end() {
    out_ += "\n}";
    return *this;
  }
  JsonWriter& number(const std::string& key, double v) {
    if (std::isnan(v)) return string(key, "nan");
    if (std::isinf(v)) return string(key, v < 0 ? "-inf" : "inf");
    sep();
    out_ += quote(key) + ": " + format_double(v);
    return *this;
  }
  JsonWriter& extended(const std::string& key, const ExtendedReal& v) {
    if (v.is_neg_infinity()) return string(key, "-inf");
    return number(key, v.value());
  }
  JsonWriter& integer(const std::string& key, long long v) {
    sep();
    out_ += quote(key) + ": " + std::to_string(v);
    return *this;
  }
  JsonWriter& string(const std::string& key, const std::string& v) {
    sep();
    out_ += quote(key) + ": " + quote(v);
    return *this;
  }
  JsonWriter& boolean(const std::string& key, bool v) {
    sep();
    out_ += quote(key) + ": " + (v ? "true" : "false");
    return *this;
  }
  std::string take() { return out_ + "\n"; }

 private:
  void sep() {
    out_ += fresh_ ? "\n  " : ",\n  ";
    fresh_ = false;
  }
  static std::string quote(const std::string& s) {
    std::string q = "\"";
    for (char ch : s) {
      switch (ch) {
        case '"': q += "\\\""; break;
        case '\\': q += "\\\\"; break;
        case '\n': q += "\\n"; break;
        case '\t': q += "\\t"; break;
        default: q += ch;
      }
    }
    return q + "\"";
  }
  std::string out_;
  bool fresh_ = true;
};

inline std::string exponents_json(const CriticalReport& r) {
  JsonWriter w;
  w.begin();
  w.integer("schema", 1);
  w.number("lambda1", r.spec.lambda1);
  w.number("alpha_plus", r.spec.alpha_plus);
  w.number("alpha_minus", r.spec.alpha_minus);
  w.extended("p_star_sub", r.p_star_sub_value);
  if (r.p_star_super_defined)
    w.number("p_star_super", r.p_star_super_value);
  else
    w.string("p_star_super", "undefined");
  if (r.sigma_kelvin_value) w.number("sigma_kelvin", *r.sigma_kelvin_value);
  if (r.p_star_sub_kelvin_value) w.extended("p_star_sub_kelvin", *r.p_star_sub_kelvin_value);
  w.number("linear_threshold_c", r.linear_threshold_c);
  if (r.classification) {
    w.string("class", zone_name(r.classification->zone));
    if (r.classification->c_max) w.number("c_max", *r.classification->c_max);
  }
  return w.end().take();
}

inline std::string eigen_json(const DomainSpec& domain, int resolution, double l1) {
  const SpectralData spec = alpha_roots(l1, domain.N);
  JsonWriter w;
  w.begin();
  w.integer("schema", 1);
  w.integer("N", domain.N);
  w.string("domain", domain.describe());
  w.integer("resolution", resolution);
  w.number("lambda1", l1);
  w.number("alpha_plus", spec.alpha_plus);
  w.number("alpha_minus", spec.alpha_minus);
  return w.end().take();
}

inline std::string psi_json(const AngularSolution& sol, const DomainSpec& domain, double s,
                            double lambda1_value) {
  double psi_min = sol.grid.values.front(), psi_max = psi_min;
  for (std::size_t i = 0; i + 1 < sol.grid.values.size(); ++i) {
    psi_min = std::min(psi_min, sol.grid.values[i]);
    psi_max = std::max(psi_max, sol.grid.values[i]);
  }
  JsonWriter w;
  w.begin();
  w.integer("schema", 1);
  w.string("domain", domain.describe());
  w.number("lambda1", lambda1_value);
  w.number("s", s);
  w.number("p", sol.p);
  w.number("alpha", sol.alpha);
  w.number("mu", sol.mu);
  w.integer("iterations", sol.iterations);
  w.number("residual_max", sol.residual_max);
  w.number("monotone_defect", sol.monotone_defect);
  w.number("psi_min", psi_min);
  w.number("psi_max", psi_max);
  return w.end().take();
}

inline std::string shoot_json(const ShootingParams& params, const Trajectory& traj) {
  JsonWriter w;
  w.begin();
  w.integer("schema", 1);
  w.integer("N", params.N);
  w.number("lambda1", params.lambda1);
  w.number("s", params.s);
  w.number("p", params.p);
  w.number("c", params.c);
  w.number("K", params.K);
  w.number("delta", params.delta());
  w.string("exit_kind", exit_kind_name(traj.exit));
  if (traj.blew_down())
    w.number("R", traj.R);
  else
    w.string("R", "inf");
  w.number("r_max", traj.r_max);
  w.integer("samples", static_cast<long long>(traj.samples.size()));
  w.number("v_end", traj.samples.back().v);
  return w.end().take();
}

inline std::string certificate_json(const Certificate& cert, const DomainSpec& domain) {
  JsonWriter w;
  w.begin();
  w.integer("schema", 1);
  w.integer("N", cert.params.N);
  w.string("domain", domain.describe());
  w.number("lambda1", cert.lambda1_used);
  w.number("s", cert.params.s);
  w.number("p", cert.params.p);
  w.number("c", cert.params.c);
  w.number("delta", cert.delta);
  w.number("M", cert.M);
  w.number("r_star", cert.r_star);
  w.number("r_dstar", cert.r_dstar);
  w.number("K", cert.K);
  w.number("R", cert.R);
  w.number("min_on_compact", cert.min_on_compact);
  w.number("sub_margin_min", cert.sub_margin_min);
  w.number("margin_tol", cert.margin_tol);
  w.integer("resolution", cert.angular_resolution);
  w.boolean("verified", cert.verified);
  return w.end().take();
}

// RFC 4180 with LF line endings; all of our cell values are plain numerics or
// class labels, so no quoting is ever required.
inline void trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "r,v,v_r\n";
  for (const auto& s : traj.samples)
    os << format_double(s.r) << ',' << format_double(s.v) << ',' << format_double(s.vr) << '\n';
}

inline void grid_csv(std::ostream& os, const AngularGrid& grid, const std::string& value_name) {
  os << "theta," << value_name << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i)
    os << format_double(grid.nodes[i]) << ',' << format_double(grid.values[i]) << '\n';
}

// Inclusive uniform range start:end:step used by the phase sweep.
struct Range {
  double start = 0;
  double end = 0;
  double step = 1;

  int count() const {
    if (!(step > 0)) throw std::invalid_argument("range step must be positive");
    if (end < start - 1e-12) throw std::invalid_argument("empty range");
    return static_cast<int>(std::floor((end - start) / step + 1e-9)) + 1;
  }
  double value(int i) const { return start + step * static_cast<double>(i); }

  static Range parse(const std::string& text) {
    Range r;
    const auto a = text.find(':');
    const auto b = text.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos)
      throw std::invalid_argument("range must be start:end:step, got '" + text + "'");
    r.start = std::stod(text.substr(0, a));
    r.end = std::stod(text.substr(a + 1, b - a - 1));
    r.step = std::stod(text.substr(b + 1));
    r.count();  // validates
    return r;
  }
};

// Phase-diagram sweep: one classification row per (s, p) grid point in
// row-major order (s outer). Byte output is deterministic for fixed inputs.
inline void phase_csv(std::ostream& os, const SpectralData& spec, const Range& s_range,
                      const Range& p_range, double c) {
  os << "s,p,class\n";
  const int ns = s_range.count(), np = p_range.count();
  for (int i = 0; i < ns; ++i) {
    const double s = s_range.value(i);
    for (int j = 0; j < np; ++j) {
      const double p = p_range.value(j);
      const Classification cls = classify(spec, s, p, c);
      os << format_double(s) << ',' << format_double(p) << ',' << zone_name(cls.zone) << '\n';
    }
  }
}

}  // namespace conecrit
