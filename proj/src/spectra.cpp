#include "jres/spectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "jres/error.hpp"

namespace jres {

namespace {

constexpr int kAberthIterations = 500;
constexpr double kAberthTolerance = 1e-13;
constexpr double kResidualTolerance = 1e-9;

// Horner for p and p' together.
void eval_with_derivative(const std::vector<double>& c, Complex z, Complex& p, Complex& dp) {
  p = 0.0;
  dp = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
}

// Running-error bound for Horner: roughly eps * sum |c_j| |z|^j.
double horner_noise(const std::vector<double>& c, double absz) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * absz + std::abs(*it);
  return 8.0 * std::numeric_limits<double>::epsilon() * acc;
}

bool aberth(const std::vector<double>& c, std::vector<Complex>& z, double radius, double phase) {
  const std::size_t m = z.size();
  for (std::size_t k = 0; k < m; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m) + phase;
    z[k] = std::polar(radius, angle);
  }
  std::vector<bool> done(m, false);
  for (int it = 0; it < kAberthIterations; ++it) {
    bool all_done = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (done[i]) continue;
      Complex p, dp;
      eval_with_derivative(c, z[i], p, dp);
      if (std::abs(p) <= horner_noise(c, std::abs(z[i]))) {
        done[i] = true;
        continue;
      }
      Complex sum = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      const Complex ratio = p / dp;
      const Complex w = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return false;
      z[i] -= w;
      if (std::abs(w) <= kAberthTolerance * std::abs(z[i])) done[i] = true;
      else all_done = false;
    }
    if (all_done) return true;
  }
  return false;
}

bool residual_ok(const RealPolynomial& p, Complex r) {
  const double bound = kResidualTolerance * p.max_abs_coeff() * std::pow(std::max(1.0, std::abs(r)), p.degree());
  return std::abs(p(r)) < bound;
}

bool canonical_less(const Complex& x, const Complex& y) {
  const bool xr = x.imag() == 0.0;
  const bool yr = y.imag() == 0.0;
  if (xr != yr) return xr;
  if (x.real() != y.real()) return x.real() < y.real();
  if (std::abs(x.imag()) != std::abs(y.imag())) return std::abs(x.imag()) < std::abs(y.imag());
  return x.imag() > y.imag();
}

}  // namespace

const char* to_string(PointLabel label) noexcept {
  return label == PointLabel::eigenvalue ? "eigenvalue" : "resonance";
}

int SpectrumConfiguration::pair_count() const noexcept {
  int nonreal = 0;
  for (const auto& z : points)
    if (z.imag() != 0.0) ++nonreal;
  return nonreal / 2;
}

int SpectrumConfiguration::real_count() const noexcept {
  int real = 0;
  for (const auto& z : points)
    if (z.imag() == 0.0) ++real;
  return real;
}

std::vector<Complex> polynomial_roots(const RealPolynomial& p) {
  if (p.degree() < 1) throw ParameterError("polynomial_roots: degree must be at least 1");
  std::vector<Complex> roots;
  // Split off exact zeros at the origin.
  int zeros = 0;
  while (p[zeros] == 0.0) ++zeros;
  roots.assign(static_cast<std::size_t>(zeros), Complex{0.0, 0.0});
  const RealPolynomial q = p.shifted(-zeros);
  const int m = q.degree();
  if (m == 0) return roots;
  std::vector<double> monic = q.coeffs();
  const double lead = monic.back();
  for (double& x : monic) x /= lead;
  if (m == 1) {
    roots.emplace_back(-monic[0], 0.0);
    return roots;
  }

  std::vector<Complex> z(static_cast<std::size_t>(m));
  const double radius = 1.0 + std::abs(monic[static_cast<std::size_t>(m - 1)]);
  double max_coeff = 0.0;
  for (int i = 0; i < m; ++i) max_coeff = std::max(max_coeff, std::abs(monic[static_cast<std::size_t>(i)]));
  // Start on the circle of radius 1 + |u_{m-1}|; on stagnation restart from the
  // Cauchy radius and from its square root with different phases.
  const std::array<std::pair<double, double>, 3> starts{
      {{radius, 0.4}, {1.0 + max_coeff, 0.9}, {std::sqrt(1.0 + max_coeff), 1.7}}};
  bool converged = false;
  for (const auto& [r, phase] : starts) {
    if (aberth(monic, z, r, phase)) {
      converged = true;
      break;
    }
  }
  (void)converged;  // stagnation is judged by the residual bound below

  // Newton polish on the monic polynomial.
  for (auto& r : z) {
    for (int it = 0; it < 3; ++it) {
      Complex pv, dpv;
      eval_with_derivative(monic, r, pv, dpv);
      if (dpv == Complex{0.0, 0.0}) break;
      const Complex next = r - pv / dpv;
      Complex pn, dpn;
      eval_with_derivative(monic, next, pn, dpn);
      if (std::abs(pn) < std::abs(pv)) r = next; else break;
    }
    if (!residual_ok(q, r)) {
      std::ostringstream os;
      os << "polynomial_roots: root " << r << " misses the residual bound";
      throw NumericalError(os.str());
    }
  }
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

SpectrumConfiguration canonicalize_conjugates(const std::vector<Complex>& roots, double tol) {
  SpectrumConfiguration out;
  std::vector<Complex> upper, lower;
  for (const auto& z : roots) {
    if (std::abs(z) < kOriginTolerance) {
      ++out.origin_drops;
    } else if (std::abs(z.imag()) < tol * std::max(1.0, std::abs(z))) {
      out.points.emplace_back(z.real(), 0.0);
    } else if (z.imag() > 0.0) {
      upper.push_back(z);
    } else {
      lower.push_back(z);
    }
  }
  if (upper.size() != lower.size())
    throw AsymmetryError("canonicalize_conjugates: non-real roots do not pair into conjugates");
  std::vector<bool> used(lower.size(), false);
  for (const auto& z : upper) {
    std::size_t best = lower.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < lower.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(z - std::conj(lower[j]));
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best == lower.size() || best_dist > 1e-6 * std::max(1.0, std::abs(z))) {
      std::ostringstream os;
      os << "canonicalize_conjugates: root " << z << " has no conjugate partner";
      throw AsymmetryError(os.str());
    }
    used[best] = true;
    const Complex avg = 0.5 * (z + std::conj(lower[best]));
    out.points.push_back(avg);
    out.points.push_back(std::conj(avg));
  }
  std::sort(out.points.begin(), out.points.end(), canonical_less);
  return classify(std::move(out));
}

SpectrumConfiguration classify(SpectrumConfiguration config) {
  config.labels.resize(config.points.size());
  for (std::size_t i = 0; i < config.points.size(); ++i)
    config.labels[i] = std::abs(config.points[i]) > 1.0 ? PointLabel::eigenvalue : PointLabel::resonance;
  return config;
}

SpectrumConfiguration make_configuration(const std::vector<Complex>& points, double tol) {
  return canonicalize_conjugates(points, tol);
}

Complex joukowsky(Complex z) {
  if (z == Complex{0.0, 0.0}) throw DomainError("joukowsky: z = 0 is outside the domain");
  return z + 1.0 / z;
}

Complex inverse_joukowsky(Complex energy, JoukowskyBranch branch) {
  const Complex disc = std::sqrt(energy * energy - 4.0);
  const Complex r1 = 0.5 * (energy + disc);
  const Complex r2 = 0.5 * (energy - disc);
  const bool r1_outside = std::abs(r1) >= std::abs(r2);
  if (branch == JoukowskyBranch::outside) return r1_outside ? r1 : r2;
  return r1_outside ? r2 : r1;
}

MembershipResult is_in_S(int k, const SpectrumConfiguration& config, double tol) {
  auto fail = [](std::string clause, std::string detail) {
    return MembershipResult{false, std::move(clause), std::move(detail)};
  };
  const auto& pts = config.points;
  if (static_cast<int>(pts.size()) != k)
    return fail("count", "configuration has " + std::to_string(pts.size()) + " points, expected " + std::to_string(k));

  auto is_real = [&](const Complex& z) { return std::abs(z.imag()) <= tol * std::max(1.0, std::abs(z)); };

  // (i) conjugate closure, with multiplicity.
  {
    std::vector<bool> used(pts.size(), false);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (used[i] || is_real(pts[i])) continue;
      used[i] = true;
      bool found = false;
      for (std::size_t j = 0; j < pts.size() && !found; ++j) {
        if (used[j]) continue;
        if (std::abs(pts[j] - std::conj(pts[i])) <= tol * std::max(1.0, std::abs(pts[i]))) {
          used[j] = true;
          found = true;
        }
      }
      if (!found) return fail("i", "non-real point without a conjugate partner");
    }
  }

  // (ii) points outside the closed unit disk are real and simple.
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (std::abs(pts[i]) <= 1.0) continue;
    if (!is_real(pts[i])) return fail("ii", "non-real point outside the closed unit disk");
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i && std::abs(pts[j] - pts[i]) <= kMultiplicityRadius * std::max(1.0, std::abs(pts[i])))
        return fail("ii", "repeated point outside the closed unit disk");
    }
  }

  std::vector<double> reals;
  std::vector<double> pos_out, neg_out;
  for (const auto& z : pts) {
    if (!is_real(z)) continue;
    reals.push_back(z.real());
    if (std::abs(z) > 1.0) (z.real() > 0.0 ? pos_out : neg_out).push_back(z.real());
  }
  std::sort(pos_out.begin(), pos_out.end());                     // 1 < x_1 < x_2 < ...
  std::sort(neg_out.begin(), neg_out.end(), std::greater<>());   // -1 > y_1 > y_2 > ...

  auto count_in = [&](auto&& pred) {
    return static_cast<int>(std::count_if(reals.begin(), reals.end(), pred));
  };
  auto equals = [&](double x, double target) { return std::abs(x - target) <= tol * std::max(1.0, std::abs(target)); };

  // (iii) positive side.
  if (!pos_out.empty()) {
    for (std::size_t m = 0; m < pos_out.size(); ++m) {
      const double inv = 1.0 / pos_out[m];
      if (count_in([&](double x) { return equals(x, inv); }) > 0)
        return fail("iii.c", "a point equals the reciprocal of x_" + std::to_string(m + 1));
    }
    const double inv1 = 1.0 / pos_out.front();
    if (count_in([&](double x) { return x > inv1 && x <= 1.0; }) % 2 != 0)
      return fail("iii.a", "odd number of points on (1/x_1, 1]");
    for (std::size_t m = 0; m + 1 < pos_out.size(); ++m) {
      const double lo = 1.0 / pos_out[m + 1];
      const double hi = 1.0 / pos_out[m];
      if (count_in([&](double x) { return x > lo && x < hi; }) % 2 != 1)
        return fail("iii.b", "even number of points on (1/x_" + std::to_string(m + 2) + ", 1/x_" +
                                 std::to_string(m + 1) + ")");
    }
  }

  // (iv) negative side, mirrored.
  if (!neg_out.empty()) {
    for (std::size_t m = 0; m < neg_out.size(); ++m) {
      const double inv = 1.0 / neg_out[m];
      if (count_in([&](double x) { return equals(x, inv); }) > 0)
        return fail("iv.c", "a point equals the reciprocal of y_" + std::to_string(m + 1));
    }
    const double inv1 = 1.0 / neg_out.front();
    if (count_in([&](double x) { return x >= -1.0 && x < inv1; }) % 2 != 0)
      return fail("iv.a", "odd number of points on [-1, 1/y_1)");
    for (std::size_t m = 0; m + 1 < neg_out.size(); ++m) {
      const double lo = 1.0 / neg_out[m];
      const double hi = 1.0 / neg_out[m + 1];
      if (count_in([&](double x) { return x > lo && x < hi; }) % 2 != 1)
        return fail("iv.b", "even number of points on (1/y_" + std::to_string(m + 1) + ", 1/y_" +
                                std::to_string(m + 2) + ")");
    }
  }
  return {};
}

}  // namespace jres
