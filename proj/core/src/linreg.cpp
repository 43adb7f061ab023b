#include "landbubble/linreg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "landbubble/error.hpp"

namespace landbubble::linreg {

DesignMatrix::DesignMatrix(Eigen::MatrixXd data, std::vector<std::string> labels)
    : data_(std::move(data)), labels_(std::move(labels)) {
  if (static_cast<Eigen::Index>(labels_.size()) != data_.cols()) {
    throw ValidationError("design matrix: " + std::to_string(labels_.size()) + " labels for " +
                          std::to_string(data_.cols()) + " columns");
  }
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw ValidationError("design matrix: duplicate label '" + l + "'");
  }
  if (!data_.allFinite()) throw ValidationError("design matrix: non-finite entry");
}

DesignMatrix DesignMatrix::without(const std::vector<std::string>& drop) const {
  std::vector<Eigen::Index> keep;
  std::vector<std::string> labels;
  for (Eigen::Index j = 0; j < cols(); ++j) {
    const auto& l = labels_[static_cast<std::size_t>(j)];
    if (std::find(drop.begin(), drop.end(), l) == drop.end()) {
      keep.push_back(j);
      labels.push_back(l);
    }
  }
  Eigen::MatrixXd out(rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.col(static_cast<Eigen::Index>(c)) = data_.col(keep[c]);
  }
  return DesignMatrix(std::move(out), std::move(labels));
}

std::size_t OlsFit::index_of(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw ValidationError("no coefficient labelled '" + label + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

OlsFit ols_fit(const DesignMatrix& x, const Eigen::VectorXd& y) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = x.cols();
  if (y.size() != n) {
    throw ValidationError("ols_fit: response has " + std::to_string(y.size()) + " rows, design " +
                          std::to_string(n));
  }
  if (k == 0) throw ValidationError("ols_fit: design has no columns");
  if (n <= k) {
    throw InsufficientDataError("ols_fit: " + std::to_string(n) + " observations for " +
                                std::to_string(k) + " parameters");
  }
  if (!y.allFinite()) throw ValidationError("ols_fit: non-finite response");

  const Eigen::MatrixXd& X = x.data();
  const Eigen::VectorXd norms = X.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (norms[j] == 0.0) {
      const auto& label = x.labels()[static_cast<std::size_t>(j)];
      throw SingularDesignError("ols_fit: column '" + label + "' is identically zero", {label});
    }
  }

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

  // Rank is judged on the column-equilibrated factor so that pure scale
  // differences between regressors do not look like collinearity.
  const Eigen::MatrixXd r_scaled = r * norms.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r_scaled, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = kRankTolerance * sv[0];
  if (sv[k - 1] <= cutoff) {
    std::set<Eigen::Index> involved;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (sv[i] > cutoff) continue;
      const Eigen::VectorXd v = svd.matrixV().col(i);
      const double vmax = v.cwiseAbs().maxCoeff();
      for (Eigen::Index j = 0; j < k; ++j) {
        if (std::abs(v[j]) > 1e-3 * vmax) involved.insert(j);
      }
    }
    std::vector<std::string> names;
    std::string joined;
    for (auto j : involved) {
      names.push_back(x.labels()[static_cast<std::size_t>(j)]);
      joined += (joined.empty() ? "" : ", ") + names.back();
    }
    throw SingularDesignError("ols_fit: rank-deficient design; collinear columns: " + joined,
                              std::move(names));
  }

  const Eigen::VectorXd qty = qr.householderQ().transpose() * y;
  OlsFit fit;
  fit.labels = x.labels();
  fit.coefficients = r.triangularView<Eigen::Upper>().solve(qty.head(k));
  fit.residuals = y - X * fit.coefficients;
  fit.rss = fit.residuals.squaredNorm();
  fit.n_obs = static_cast<std::size_t>(n);
  fit.df_resid = static_cast<std::size_t>(n - k);
  fit.sigma2 = fit.rss / static_cast<double>(fit.df_resid);

  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  fit.xtx_inverse = r_inv * r_inv.transpose();
  fit.std_errors = (fit.sigma2 * fit.xtx_inverse.diagonal()).cwiseSqrt();
  return fit;
}

FTestResult nested_f_test(const OlsFit& restricted, const OlsFit& unrestricted, std::size_t q) {
  if (restricted.n_obs != unrestricted.n_obs) {
    throw ValidationError("nested_f_test: models were fit on different samples (" +
                          std::to_string(restricted.n_obs) + " vs " +
                          std::to_string(unrestricted.n_obs) + " observations)");
  }
  if (q < 1) throw ValidationError("nested_f_test: q must be at least 1");
  if (restricted.df_resid != unrestricted.df_resid + q) {
    throw ValidationError("nested_f_test: parameter counts differ by " +
                          std::to_string(static_cast<long long>(restricted.df_resid) -
                                         static_cast<long long>(unrestricted.df_resid)) +
                          ", expected q = " + std::to_string(q));
  }
  const double tol = 1e-9 * std::max(unrestricted.rss, restricted.rss) +
                     std::numeric_limits<double>::min();
  if (restricted.rss < unrestricted.rss - tol) {
    throw NestingViolationError("nested_f_test: restricted RSS " + std::to_string(restricted.rss) +
                                " is below unrestricted RSS " + std::to_string(unrestricted.rss));
  }

  FTestResult out;
  out.df_num = q;
  out.df_den = unrestricted.df_resid;
  const double gain = std::max(0.0, restricted.rss - unrestricted.rss);
  if (unrestricted.rss == 0.0) {
    out.f_stat = gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    out.f_stat = (gain / static_cast<double>(q)) /
                 (unrestricted.rss / static_cast<double>(unrestricted.df_resid));
  }
  out.p_value = f_tail_prob(out.f_stat, static_cast<double>(out.df_num),
                            static_cast<double>(out.df_den));
  return out;
}

namespace {

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double dm = static_cast<double>(m);
    const double m2 = 2.0 * dm;
    double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete beta: continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("incomplete beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("incomplete beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_tail_prob(double f, double d1, double d2) {
  if (!(d1 >= 1.0) || !(d2 >= 1.0)) {
    throw ValidationError("f_tail_prob: degrees of freedom must be >= 1");
  }
  if (std::isnan(f) || f < 0.0) throw ValidationError("f_tail_prob: f must be non-negative");
  if (f == 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  // P[F > f] = I_{d2 / (d2 + d1 f)}(d2 / 2, d1 / 2). Near x = 1 the
  // complement is evaluated at d1 f / (d2 + d1 f) instead of forming 1 - x.
  const double denom = d2 + d1 * f;
  const double x = d2 / denom;
  if (x > 0.5) {
    return 1.0 - regularized_incomplete_beta(d1 / 2.0, d2 / 2.0, d1 * f / denom);
  }
  return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, x);
}

}  // namespace landbubble::linreg
