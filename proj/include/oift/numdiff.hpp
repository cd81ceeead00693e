#pragma once

#include <Eigen/Core>
#include <functional>

namespace oift::numdiff {

/// Central finite differences of scalar functions; used by the validation
/// command and by tests to cross-check analytic derivatives.

inline double derivative(const std::function<double(double)>& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double second_derivative(const std::function<double(double)>& f, double x,
                                double h = 1e-4) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

inline Eigen::VectorXd gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Four-point central second differences, O(h^2) accurate.
inline Eigen::MatrixXd hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                               const Eigen::VectorXd& x, double h = 1e-4) {
  const auto n = x.size();
  Eigen::MatrixXd H(n, n);
  Eigen::VectorXd probe = x;
  const double f0 = f(x);
  for (Eigen::Index i = 0; i < n; ++i) {
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      probe[i] = x[i] + h;
      probe[j] = x[j] + h;
      const double fpp = f(probe);
      probe[j] = x[j] - h;
      const double fpm = f(probe);
      probe[i] = x[i] - h;
      const double fmm = f(probe);
      probe[j] = x[j] + h;
      const double fmp = f(probe);
      probe[i] = x[i];
      probe[j] = x[j];
      H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
    }
  }
  return H;
}

}  // namespace oift::numdiff
