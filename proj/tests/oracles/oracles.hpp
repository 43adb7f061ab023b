#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library's numerical code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace oracle {

using Real = long double;
using Matrix = std::vector<std::vector<Real>>;  // row-major, rows x cols

struct Ols {
  std::vector<Real> beta;
  std::vector<Real> se;
  std::vector<Real> residuals;
  Real rss = 0;
  std::size_t df = 0;
  Matrix xtx_inv;
};

// Inverse of a symmetric positive definite matrix by Gauss-Jordan with
// partial pivoting in long double.
inline Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<Real>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    }
    if (a[piv][c] == 0) throw std::runtime_error("oracle: singular normal equations");
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    const Real d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Real f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

// OLS through the normal equations X'X b = X'y.
inline Ols ols(const Matrix& x, const std::vector<Real>& y) {
  const std::size_t n = x.size();
  const std::size_t k = n ? x[0].size() : 0;
  if (n <= k) throw std::runtime_error("oracle: n <= k");
  Matrix xtx(k, std::vector<Real>(k, 0));
  std::vector<Real> xty(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < k; ++a) {
      xty[a] += x[i][a] * y[i];
      for (std::size_t b = 0; b < k; ++b) xtx[a][b] += x[i][a] * x[i][b];
    }
  }
  Ols out;
  out.xtx_inv = invert(xtx);
  out.beta.assign(k, 0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) out.beta[a] += out.xtx_inv[a][b] * xty[b];
  }
  out.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Real fit = 0;
    for (std::size_t a = 0; a < k; ++a) fit += x[i][a] * out.beta[a];
    out.residuals[i] = y[i] - fit;
    out.rss += out.residuals[i] * out.residuals[i];
  }
  out.df = n - k;
  const Real s2 = out.rss / static_cast<Real>(out.df);
  out.se.resize(k);
  for (std::size_t a = 0; a < k; ++a) out.se[a] = std::sqrt(s2 * out.xtx_inv[a][a]);
  return out;
}

// ADF t-ratio on y[s1..s2] with k lagged differences, rows t = s1+k+1..s2.
inline Real adf(const std::vector<double>& y, std::size_t s1, std::size_t s2, std::size_t k) {
  Matrix x;
  std::vector<Real> dy;
  for (std::size_t t = s1 + k + 1; t <= s2; ++t) {
    std::vector<Real> row{1, static_cast<Real>(y[t - 1])};
    for (std::size_t i = 1; i <= k; ++i) {
      row.push_back(static_cast<Real>(y[t - i]) - static_cast<Real>(y[t - i - 1]));
    }
    x.push_back(row);
    dy.push_back(static_cast<Real>(y[t]) - static_cast<Real>(y[t - 1]));
  }
  const auto fit = ols(x, dy);
  return fit.beta[1] / fit.se[1];
}

// Max of adf over every window [s1, r2], s1 in 0..r2-r0.
struct SupAdf {
  Real stat;
  std::size_t argmax;
};
inline SupAdf bsadf(const std::vector<double>& y, std::size_t r2, std::size_t r0, std::size_t k) {
  std::optional<SupAdf> best;
  for (std::size_t s1 = 0; s1 + r0 <= r2; ++s1) {
    const Real s = adf(y, s1, r2, k);
    if (!best || s > best->stat) best = SupAdf{s, s1};
  }
  return *best;
}

// P[F(d1, d2) > f] = I_x(d2/2, d1/2), x = d2 / (d2 + d1 f), by tanh-sinh
// quadrature of the beta density on [0, x]. Both endpoint distances t and
// 1 - t are formed without cancellation.
inline Real f_tail(Real f, Real d1, Real d2) {
  if (f <= 0) return 1;
  const Real a = d2 / 2, b = d1 / 2;
  const Real x = d2 / (d2 + d1 * f);
  const Real one_minus_x = d1 * f / (d2 + d1 * f);
  const Real log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const Real half_pi = std::acos(Real(-1)) / 2;
  auto integrand = [&](Real t, Real x_minus_t) {
    const Real one_minus_t = one_minus_x + x_minus_t;
    if (t <= 0 || one_minus_t <= 0) return Real(0);
    return std::exp((a - 1) * std::log(t) + (b - 1) * std::log(one_minus_t) - log_beta);
  };
  auto node = [&](Real s) {
    const Real v = half_pi * std::sinh(s);
    const Real e = std::exp(2 * v);
    const Real t = x / (1 + 1 / e);        // x (1 + tanh v) / 2
    const Real x_minus_t = x / (1 + e);    // x (1 - tanh v) / 2
    const Real c = std::cosh(v);
    const Real w = half_pi * std::cosh(s) / (c * c);
    return w * integrand(t, x_minus_t) * x / 2;
  };
  Real h = 0.5L;
  Real sum = node(0);
  for (int j = 1; j * h <= 6; ++j) sum += node(j * h) + node(-j * h);
  Real estimate = sum * h;
  for (int level = 0; level < 10; ++level) {
    h /= 2;
    Real added = 0;
    for (int j = 1; j * h <= 6; j += 2) added += node(j * h) + node(-j * h);
    sum += added;
    const Real next = sum * h;
    const bool done = std::fabs(next - estimate) <= 1e-16L * std::fabs(next) + 1e-20L;
    estimate = next;
    if (done && level >= 3) break;
  }
  return estimate;
}

// Pearson correlation by the textbook two-pass formula.
inline std::optional<Real> pearson(const std::vector<Real>& x, const std::vector<Real>& y) {
  const std::size_t n = x.size();
  if (n < 3) return std::nullopt;
  Real mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  Real sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

// corr(x[i - k], y[i]) over equally spaced gap-free samples sharing index i.
inline std::optional<Real> shifted_corr(const std::vector<double>& x, const std::vector<double>& y,
                                        int k) {
  std::vector<Real> a, b;
  for (long i = 0; i < static_cast<long>(y.size()); ++i) {
    const long j = i - k;
    if (j < 0 || j >= static_cast<long>(x.size())) continue;
    a.push_back(x[j]);
    b.push_back(y[i]);
  }
  return pearson(a, b);
}

// Monday of the ISO week, from days since 1970-01-01 (a Thursday).
inline long iso_monday(long days) {
  const long dow = ((days + 3) % 7 + 7) % 7;  // 0 = Monday
  return days - dow;
}

// Plain comma split (no quoting).
inline std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace oracle
