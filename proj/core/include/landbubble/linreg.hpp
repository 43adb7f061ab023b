#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace landbubble::linreg {

/// Dense regressor matrix with one label per column.
class DesignMatrix {
 public:
  DesignMatrix() = default;
  /// Throws ValidationError on label/column mismatch, duplicate labels or
  /// non-finite entries.
  DesignMatrix(Eigen::MatrixXd data, std::vector<std::string> labels);

  [[nodiscard]] Eigen::Index rows() const noexcept { return data_.rows(); }
  [[nodiscard]] Eigen::Index cols() const noexcept { return data_.cols(); }
  [[nodiscard]] const Eigen::MatrixXd& data() const noexcept { return data_; }
  [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Same rows, columns whose label is not in `drop`.
  [[nodiscard]] DesignMatrix without(const std::vector<std::string>& drop) const;

 private:
  Eigen::MatrixXd data_;
  std::vector<std::string> labels_;
};

struct OlsFit {
  std::vector<std::string> labels;
  Eigen::VectorXd coefficients;
  /// Classical (homoskedastic) standard errors.
  Eigen::VectorXd std_errors;
  Eigen::VectorXd residuals;
  double rss = 0.0;
  std::size_t n_obs = 0;
  std::size_t df_resid = 0;
  /// rss / df_resid.
  double sigma2 = 0.0;
  /// Residual-scale-free (X'X)^-1, needed for contrasts between coefficients.
  Eigen::MatrixXd xtx_inverse;

  [[nodiscard]] std::size_t index_of(const std::string& label) const;
  [[nodiscard]] double coefficient(const std::string& label) const {
    return coefficients[static_cast<Eigen::Index>(index_of(label))];
  }
  [[nodiscard]] double std_error(const std::string& label) const {
    return std_errors[static_cast<Eigen::Index>(index_of(label))];
  }
};

/// Relative singular-value cutoff (on the unit-norm-column design) below which
/// the design is declared rank deficient.
inline constexpr double kRankTolerance = 1e-10;

/// Least squares via Householder QR.
///
/// Throws InsufficientDataError when n <= k and SingularDesignError, naming
/// the columns involved in the dependency, when the design is rank deficient.
[[nodiscard]] OlsFit ols_fit(const DesignMatrix& x, const Eigen::VectorXd& y);

struct FTestResult {
  double f_stat = 0.0;
  std::size_t df_num = 0;
  std::size_t df_den = 0;
  double p_value = 1.0;
};

/// F test of a restricted model against the unrestricted model it nests.
/// q must equal the difference in parameter counts.
[[nodiscard]] FTestResult nested_f_test(const OlsFit& restricted, const OlsFit& unrestricted,
                                        std::size_t q);

/// Regularized incomplete beta function I_x(a, b).
[[nodiscard]] double regularized_incomplete_beta(double a, double b, double x);

/// Upper tail P[F(d1, d2) > f].
[[nodiscard]] double f_tail_prob(double f, double d1, double d2);

}  // namespace landbubble::linreg
