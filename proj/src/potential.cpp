#include "oift/potential.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace oift {

void PotentialParams::validate() const {
  if (!(k_r > 0.0) || !(k_a > 0.0)) {
    throw std::invalid_argument("PotentialParams: k_r and k_a must be > 0");
  }
}

namespace {

void check_sigma_args(double s, double d) {
  if (s < 0.0) {
    throw std::invalid_argument("sigma: squared distance s must be >= 0, got " +
                                std::to_string(s));
  }
  if (!(d > 0.0)) {
    throw std::invalid_argument("sigma: desired distance d must be > 0");
  }
}

}  // namespace

double sigma(double s, double d, const PotentialParams& params) {
  check_sigma_args(s, d);
  const double d2 = d * d;
  if (s <= d2) {
    const double w = 1.0 - s / d2;
    return params.k_r * w * w * w;
  }
  const double w = std::sqrt(s) / d - 1.0;
  return params.k_a * w * w * w;
}

double sigma_prime(double s, double d, const PotentialParams& params) {
  check_sigma_args(s, d);
  const double d2 = d * d;
  if (s <= d2) {
    const double w = 1.0 - s / d2;
    return -3.0 * params.k_r * w * w / d2;
  }
  const double r = std::sqrt(s);
  const double w = r / d - 1.0;
  return 3.0 * params.k_a * w * w / (2.0 * d * r);
}

double sigma_second(double s, double d, const PotentialParams& params) {
  check_sigma_args(s, d);
  const double d2 = d * d;
  if (s <= d2) {
    return 6.0 * params.k_r * (1.0 - s / d2) / (d2 * d2);
  }
  // 3 k_a (s - d^2) / (4 d^3 s^(3/2))
  return 3.0 * params.k_a * (s - d2) / (4.0 * d * d2 * s * std::sqrt(s));
}

FormationSpec FormationSpec::complete(int n, double d) {
  FormationSpec spec;
  spec.n = n;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      spec.edges.push_back({i, j, d});
    }
  }
  spec.validate();
  return spec;
}

void FormationSpec::validate() const {
  if (n < 2) {
    throw std::invalid_argument("FormationSpec: need at least 2 agents");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.i == e.j) {
      throw std::invalid_argument("FormationSpec: self edge on agent " + std::to_string(e.i));
    }
    if (e.i < 1 || e.j < 1 || e.i > n || e.j > n || e.i >= e.j) {
      throw std::invalid_argument("FormationSpec: edge (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ") must satisfy 1 <= i < j <= n");
    }
    if (!(e.d > 0.0)) {
      throw std::invalid_argument("FormationSpec: desired distance must be > 0");
    }
    if (!seen.insert({e.i, e.j}).second) {
      throw std::invalid_argument("FormationSpec: duplicate edge (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) + ")");
    }
  }
}

std::optional<double> FormationSpec::distance(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const auto& e : edges) {
    if (e.i == i && e.j == j) return e.d;
  }
  return std::nullopt;
}

double FormationSpec::required_distance(int i, int j) const {
  auto d = distance(i, j);
  if (!d) {
    throw std::invalid_argument("FormationSpec: no desired distance for pair (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
  }
  return *d;
}

namespace {

int infer_spatial_dim(const Eigen::VectorXd& p, const FormationSpec& spec) {
  if (spec.n < 2 || p.size() % spec.n != 0) {
    throw std::invalid_argument("formation: position vector length " + std::to_string(p.size()) +
                                " is not a multiple of the agent count " + std::to_string(spec.n));
  }
  return static_cast<int>(p.size()) / spec.n;
}

}  // namespace

FormationDerivatives formation_derivatives(const Eigen::VectorXd& p, const FormationSpec& spec,
                                           double k_F, const PotentialParams& params, bool safe) {
  const int M = infer_spatial_dim(p, spec);
  const auto N = p.size();

  FormationDerivatives out;
  out.safe = safe;
  out.grad_p = Eigen::VectorXd::Zero(N);
  out.hess_pp = Eigen::MatrixXd::Zero(N, N);

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(M, M);
  for (const auto& e : spec.edges) {
    const int bi = (e.i - 1) * M;
    const int bj = (e.j - 1) * M;
    const Eigen::VectorXd diff = p.segment(bi, M) - p.segment(bj, M);
    const double s = diff.squaredNorm();
    const double sp = sigma_prime(s, e.d, params);
    const double spp = sigma_second(s, e.d, params);

    out.value += k_F * sigma(s, e.d, params);

    const Eigen::VectorXd g = 2.0 * k_F * sp * diff;
    out.grad_p.segment(bi, M) += g;
    out.grad_p.segment(bj, M) -= g;

    Eigen::MatrixXd off = -4.0 * k_F * spp * (diff * diff.transpose());
    if (!safe || sp > 0.0) {
      off -= 2.0 * k_F * sp * id;
    }
    out.hess_pp.block(bi, bj, M, M) = off;
    out.hess_pp.block(bj, bi, M, M) = off;
    out.hess_pp.block(bi, bi, M, M) -= off;
    out.hess_pp.block(bj, bj, M, M) -= off;
  }
  return out;
}

double formation_cost(const Eigen::VectorXd& p, const FormationSpec& spec, double k_F,
                      const PotentialParams& params) {
  const int M = infer_spatial_dim(p, spec);
  double value = 0.0;
  for (const auto& e : spec.edges) {
    const double s = (p.segment((e.i - 1) * M, M) - p.segment((e.j - 1) * M, M)).squaredNorm();
    value += k_F * sigma(s, e.d, params);
  }
  return value;
}

Eigen::VectorXd formation_gradient(const Eigen::VectorXd& p, const FormationSpec& spec, double k_F,
                                   const PotentialParams& params) {
  const int M = infer_spatial_dim(p, spec);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.size());
  for (const auto& e : spec.edges) {
    const int bi = (e.i - 1) * M;
    const int bj = (e.j - 1) * M;
    const Eigen::VectorXd diff = p.segment(bi, M) - p.segment(bj, M);
    const Eigen::VectorXd g = 2.0 * k_F * sigma_prime(diff.squaredNorm(), e.d, params) * diff;
    grad.segment(bi, M) += g;
    grad.segment(bj, M) -= g;
  }
  return grad;
}

Eigen::MatrixXd formation_hessian(const Eigen::VectorXd& p, const FormationSpec& spec, double k_F,
                                  const PotentialParams& params, bool safe) {
  return formation_derivatives(p, spec, k_F, params, safe).hess_pp;
}

}  // namespace oift
