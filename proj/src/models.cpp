#include "openwalk/models.hpp"

#include <cmath>

namespace owalk::models {

namespace {
constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double phi) {
  const double two_pi = 2.0 * kPi;
  double r = std::fmod(phi, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}
}  // namespace

RingModel::RingModel(double j1_, double j2_, double j3_, double phi_)
    : j1(j1_), j2(j2_), j3(j3_), phi(wrap_angle(phi_)) {
  if (j1 < 0.0 || j2 < 0.0 || j3 < 0.0)
    throw InvariantError("RingModel: hopping amplitudes must be nonnegative");
}

CoinedWalkModel::CoinedWalkModel(int length_, double coin_angle_)
    : length(length_), coin_angle(coin_angle_) {
  if (length < 2) throw InvariantError("CoinedWalkModel: length must be >= 2");
}

double CoinedWalkModel::coin_at(int n) const {
  return (n == 0 || n == length) ? kPi / 2.0 : coin_angle;
}

HermitianMatrix ring_hamiltonian(const RingModel& model) {
  ComplexMatrix h = ComplexMatrix::Zero(3, 3);
  h(0, 1) = model.j1;
  h(1, 2) = model.j2;
  h(0, 2) = model.j3 * std::exp(Complex(0.0, model.phi));
  ComplexMatrix full = h + h.adjoint();
  return HermitianMatrix(std::move(full));
}

UnitaryMatrix coined_step_unitary(const CoinedWalkModel& model) {
  const int L = model.length;
  const Eigen::Index N = model.state_dim();
  ComplexMatrix u = ComplexMatrix::Zero(N, N);
  auto h_idx = [L](int n) { return Eigen::Index(n - 1); };
  auto v_idx = [L](int n) { return Eigen::Index(L + n - 1); };

  // Shift-coin-shift composition with pi/2 reflection coins at the edges:
  //   (n,H) <- cos(b_n) (n+1,H) - sin(b_n) (n,V)
  //   (n,V) <- sin(b_{n-1}) (n,H) + cos(b_{n-1}) (n-1,V)
  for (int n = 1; n < L; ++n) u(h_idx(n), h_idx(n + 1)) = std::cos(model.coin_at(n));
  for (int n = 1; n <= L; ++n) u(h_idx(n), v_idx(n)) = -std::sin(model.coin_at(n));
  for (int n = 2; n <= L; ++n) {
    u(v_idx(n), h_idx(n)) = std::sin(model.coin_at(n - 1));
    u(v_idx(n), v_idx(n - 1)) = std::cos(model.coin_at(n - 1));
  }
  u(v_idx(1), h_idx(1)) = std::sin(model.coin_at(0));
  return UnitaryMatrix(std::move(u));
}

StochasticMatrix coined_markov_direct(const CoinedWalkModel& model) {
  const int L = model.length;
  const Eigen::Index N = model.state_dim();
  RealMatrix q = RealMatrix::Zero(N, N);
  auto x_idx = [L](int n) { return Eigen::Index(n - 1); };
  auto y_idx = [L](int n) { return Eigen::Index(L + n - 1); };
  auto c2 = [&](int n) { double c = std::cos(model.coin_at(n)); return c * c; };
  auto s2 = [&](int n) { double s = std::sin(model.coin_at(n)); return s * s; };

  // X_n <- cos^2(b_n) X_{n+1} + sin^2(b_n) Y_n
  // Y_n <- sin^2(b_{n-1}) X_n + cos^2(b_{n-1}) Y_{n-1}
  for (int n = 1; n <= L; ++n) {
    if (n < L) q(x_idx(n), x_idx(n + 1)) = c2(n);
    q(x_idx(n), y_idx(n)) = s2(n);
    q(y_idx(n), x_idx(n)) = s2(n - 1);
    if (n > 1) q(y_idx(n), y_idx(n - 1)) = c2(n - 1);
  }
  return StochasticMatrix(std::move(q));
}

}  // namespace owalk::models
