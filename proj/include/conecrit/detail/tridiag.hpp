#pragma once

#include <cmath>
#include <limits>
#include <cstddef>
#include <vector>

namespace conecrit::detail {

// Symmetric tridiagonal matrix: diag[0..n-1], off[0..n-2].
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t n() const { return diag.size(); }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    const std::size_t m = n();
    y.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      double s = diag[i] * x[i];
      if (i > 0) s += off[i - 1] * x[i - 1];
      if (i + 1 < m) s += off[i] * x[i + 1];
      y[i] = s;
    }
  }

  double quadratic_form(const std::vector<double>& x) const {
    double s = 0;
    const std::size_t m = n();
    for (std::size_t i = 0; i < m; ++i) {
      s += diag[i] * x[i] * x[i];
      if (i + 1 < m) s += 2.0 * off[i] * x[i] * x[i + 1];
    }
    return s;
  }
};

// LDL^T factorization without pivoting. All pivots positive certifies positive
// definiteness, which is how the coercivity gate is enforced exactly at the
// discrete level.
struct TridiagFactor {
  std::vector<double> pivot;  // D entries
  std::vector<double> lower;  // L subdiagonal
  bool positive_definite = false;

  static TridiagFactor make(const SymTridiag& a) {
    TridiagFactor f;
    const std::size_t m = a.n();
    f.pivot.resize(m);
    f.lower.resize(m > 0 ? m - 1 : 0);
    f.positive_definite = true;
    double prev = 0;
    for (std::size_t i = 0; i < m; ++i) {
      double d = a.diag[i];
      if (i > 0) d -= a.off[i - 1] * prev;
      f.pivot[i] = d;
      if (!(d > 0)) {
        f.positive_definite = false;
        return f;
      }
      if (i + 1 < m) {
        f.lower[i] = a.off[i] / d;
        prev = f.lower[i];
      }
    }
    return f;
  }

  // Solves (L D L^T) x = b in place.
  void solve(std::vector<double>& b) const {
    const std::size_t m = pivot.size();
    for (std::size_t i = 1; i < m; ++i) b[i] -= lower[i - 1] * b[i - 1];
    for (std::size_t i = 0; i < m; ++i) b[i] /= pivot[i];
    for (std::size_t i = m - 1; i-- > 0;) b[i] -= lower[i] * b[i + 1];
  }
};

struct EigenPair {
  double value = 0;
  std::vector<double> vector;
  int iterations = 0;
};

inline double norm2(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Principal (smallest) eigenpair of an SPD symmetric tridiagonal matrix by
// inverse power iteration with fixed zero shift. Stops when successive
// Rayleigh quotients agree to rq_tol and the eigen-residual has hit its
// roundoff floor or dropped below rq_tol * lambda.
inline EigenPair principal_eigenpair(const SymTridiag& b, double rq_tol = 1e-12,
                                     int max_iter = 500) {
  const std::size_t m = b.n();
  TridiagFactor f = TridiagFactor::make(b);
  EigenPair out;
  out.vector.assign(m, 1.0);
  std::vector<double> bx;
  double rq_prev = 0;
  double res_prev = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    f.solve(out.vector);
    const double nrm = norm2(out.vector);
    for (double& v : out.vector) v /= nrm;
    b.apply(out.vector, bx);
    double rq = 0, res = 0;
    for (std::size_t i = 0; i < m; ++i) rq += out.vector[i] * bx[i];
    for (std::size_t i = 0; i < m; ++i) {
      const double d = bx[i] - rq * out.vector[i];
      res += d * d;
    }
    res = std::sqrt(res);
    out.value = rq;
    out.iterations = it;
    const bool rq_settled = it > 1 && std::abs(rq - rq_prev) < rq_tol * std::max(1.0, std::abs(rq));
    const bool res_done = res <= rq_tol * std::max(1.0, std::abs(rq)) || res >= 0.5 * res_prev;
    if (rq_settled && res_done) break;
    rq_prev = rq;
    res_prev = res;
  }
  // Principal eigenvectors are signed so the first component is positive.
  if (out.vector[0] < 0)
    for (double& v : out.vector) v = -v;
  return out;
}

}  // namespace conecrit::detail
