#include "jres/operator_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jres/error.hpp"

namespace jres {

void JacobiCoefficients::validate() const {
  if (a.size() != b.size())
    throw ValidationError("Jacobi coefficients: a has " + std::to_string(a.size()) + " entries, b has " +
                          std::to_string(b.size()));
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!(a[j] > 0.0) || !std::isfinite(a[j]))
      throw ValidationError("Jacobi coefficients: a[" + std::to_string(j) + "] must be positive and finite");
    if (!std::isfinite(b[j]))
      throw ValidationError("Jacobi coefficients: b[" + std::to_string(j) + "] must be finite");
  }
}

int JacobiCoefficients::perturbation_order() const {
  for (std::size_t j = a.size(); j-- > 0;) {
    const int s = static_cast<int>(j) + 1;
    if (a[j] != 1.0) return 2 * s;
    if (b[j] != 0.0) return 2 * s - 1;
  }
  return 0;
}

JacobiCoefficients assemble_coupled(const TridiagonalSample& tridiag, double gamma, double kappa) {
  if (!(kappa > 0.0)) throw ParameterError("coupling kappa must be positive");
  if (gamma == 0.0) throw ParameterError("gamma must be nonzero");
  const std::size_t n = tridiag.s.size();
  if (n == 0 || tridiag.t.size() + 1 != n) throw ShapeError("tridiagonal sample needs n >= 1 and n-1 off-diagonals");
  JacobiCoefficients out;
  out.a.reserve(n);
  out.b.reserve(n);
  // Off-diagonal signs are a diagonal +-1 gauge; only |gamma| enters a.
  for (std::size_t j = n - 1; j-- > 0;) out.a.push_back(std::abs(gamma) * tridiag.t[j]);
  out.a.push_back(kappa);
  for (std::size_t j = n; j-- > 0;) out.b.push_back(gamma * tridiag.s[j]);
  return out;
}

TruncatedOperator truncate(const JacobiCoefficients& coeffs, std::size_t N) {
  const std::size_t n = coeffs.size();
  if (N <= n) throw ShapeError("truncation size must exceed the number of coefficients");
  TruncatedOperator op;
  op.diag.assign(N, 0.0);
  op.offdiag.assign(N - 1, 1.0);
  std::copy(coeffs.b.begin(), coeffs.b.end(), op.diag.begin());
  std::copy(coeffs.a.begin(), coeffs.a.end(), op.offdiag.begin());
  return op;
}

std::vector<double> tridiag_eigenvalues(const TruncatedOperator& op) {
  // Implicit-shift QL with Wilkinson shifts (tql1).
  const std::size_t n = op.dimension();
  std::vector<double> d = op.diag;
  std::vector<double> e(n, 0.0);
  std::copy(op.offdiag.begin(), op.offdiag.end(), e.begin());
  for (std::size_t l = 0; l < n; ++l) {
    int iterations = 0;
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m == l) break;
      if (++iterations > 60) throw NumericalError("tridiag_eigenvalues: QL iteration did not converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      std::size_t i = m;
      bool underflow = false;
      while (i-- > l) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::size_t sturm_count(const TruncatedOperator& op, double x) {
  const std::size_t n = op.dimension();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e2 = i == 0 ? 0.0 : op.offdiag[i - 1] * op.offdiag[i - 1];
    q = op.diag[i] - x - (i == 0 ? 0.0 : e2 / q);
    if (q == 0.0) q = -std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0);
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> eigenvalues_outside_band(const JacobiCoefficients& coeffs, std::size_t N, double margin) {
  if (!(margin >= 0.0)) throw ParameterError("band margin must be non-negative");
  const TruncatedOperator op = truncate(coeffs, N);
  double radius = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double left = i == 0 ? 0.0 : std::abs(op.offdiag[i - 1]);
    const double right = i + 1 == N ? 0.0 : std::abs(op.offdiag[i]);
    radius = std::max(radius, std::abs(op.diag[i]) + left + right);
  }
  const double lower_edge = -2.0 - margin;
  const double upper_edge = 2.0 + margin;

  // k-th smallest eigenvalue (0-based) known to lie in [lo, hi].
  auto kth = [&](std::size_t k, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (sturm_count(op, mid) > k) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<double> out;
  const std::size_t below = sturm_count(op, lower_edge);
  for (std::size_t k = 0; k < below; ++k) out.push_back(kth(k, -radius - 1.0, lower_edge));
  for (std::size_t k = sturm_count(op, upper_edge); k < N; ++k) {
    const double value = kth(k, upper_edge, radius + 1.0);
    if (value > upper_edge) out.push_back(value);  // an eigenvalue exactly at the edge is inside
  }
  return out;
}

}  // namespace jres
