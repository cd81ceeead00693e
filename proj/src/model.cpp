#include "oift/model.hpp"

#include <stdexcept>
#include <string>

namespace oift {

void SystemSpec::validate() const {
  if (n <= 1) {
    throw std::invalid_argument("SystemSpec: agent count n must be > 1, got " + std::to_string(n));
  }
  if (M < 1 || M > 3) {
    throw std::invalid_argument("SystemSpec: spatial dimension M must be 1, 2 or 3, got " +
                                std::to_string(M));
  }
}

SystemMatrices SystemMatrices::double_integrator(int n, int M) {
  if (n < 1 || M < 1 || M > 3) {
    throw std::invalid_argument("SystemMatrices: need n >= 1 and M in {1,2,3}");
  }
  const int N = n * M;
  SystemMatrices sys;
  sys.n = n;
  sys.M = M;
  sys.A = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  sys.A.topRightCorner(N, N).setIdentity();
  sys.B = Eigen::MatrixXd::Zero(2 * N, N);
  sys.B.bottomRows(N).setIdentity();
  sys.C = Eigen::MatrixXd::Zero(2 * M, 2 * N);
  for (int i = 0; i < n; ++i) {
    sys.C.block(0, i * M, M, M) = Eigen::MatrixXd::Identity(M, M) / n;
    sys.C.block(M, N + i * M, M, M) = Eigen::MatrixXd::Identity(M, M) / n;
  }
  return sys;
}

SystemMatrices build_system(const SystemSpec& spec) {
  spec.validate();
  return SystemMatrices::double_integrator(spec.n, spec.M);
}

StackedState StackedState::from_vector(const Eigen::VectorXd& x) {
  if (x.size() % 2 != 0) {
    throw std::invalid_argument("StackedState: state length must be even");
  }
  const auto N = x.size() / 2;
  return StackedState{x.head(N), x.tail(N)};
}

Eigen::VectorXd StackedState::to_vector() const {
  if (p.size() != pdot.size()) {
    throw std::invalid_argument("StackedState: p and pdot lengths differ");
  }
  Eigen::VectorXd x(2 * p.size());
  x << p, pdot;
  return x;
}

Eigen::VectorXd mean_position(const Eigen::VectorXd& p, int n, int M) {
  if (p.size() != static_cast<Eigen::Index>(n) * M) {
    throw std::invalid_argument("mean_position: vector length does not match n*M");
  }
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(M);
  for (int i = 0; i < n; ++i) {
    mean += p.segment(i * M, M);
  }
  return mean / n;
}

Eigen::VectorXd barycenter(const Eigen::VectorXd& x, const SystemSpec& spec) {
  const int N = spec.N();
  if (x.size() != 2 * N) {
    throw std::invalid_argument("barycenter: state length " + std::to_string(x.size()) +
                                " does not match 2N = " + std::to_string(2 * N));
  }
  Eigen::VectorXd xb(2 * spec.M);
  xb.head(spec.M) = mean_position(x.head(N), spec.n, spec.M);
  xb.tail(spec.M) = mean_position(x.tail(N), spec.n, spec.M);
  return xb;
}

Eigen::VectorXd barycenter(const StackedState& x, const SystemSpec& spec) {
  return barycenter(x.to_vector(), spec);
}

Eigen::VectorXd agent_position(const Eigen::VectorXd& x, int i, const SystemSpec& spec) {
  if (i < 1 || i > spec.n) {
    throw std::out_of_range("agent_position: agent index " + std::to_string(i) +
                            " out of range 1.." + std::to_string(spec.n));
  }
  if (x.size() != 2 * spec.N()) {
    throw std::invalid_argument("agent_position: state length mismatch");
  }
  return x.segment((i - 1) * spec.M, spec.M);
}

Eigen::VectorXd agent_velocity(const Eigen::VectorXd& x, int i, const SystemSpec& spec) {
  if (i < 1 || i > spec.n) {
    throw std::out_of_range("agent_velocity: agent index " + std::to_string(i) +
                            " out of range 1.." + std::to_string(spec.n));
  }
  if (x.size() != 2 * spec.N()) {
    throw std::invalid_argument("agent_velocity: state length mismatch");
  }
  return x.segment(spec.N() + (i - 1) * spec.M, spec.M);
}

}  // namespace oift
