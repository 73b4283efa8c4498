#include "openwalk/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "openwalk/channels.hpp"

namespace owalk::dynamics {

namespace {

void check_steps(int steps) {
  if (steps < 0) throw InvariantError("trajectory: steps must be >= 0");
  if (steps > kMaxSteps)
    throw InvariantError("trajectory: step count exceeds the storage cap");
}

}  // namespace

ClassicalTrajectory relax_classical(const StochasticMatrix& q,
                                    const ProbabilityVector& p0, int steps) {
  check_steps(steps);
  if (q.dim() != p0.dim()) throw InvariantError("relax_classical: dimension mismatch");
  ClassicalTrajectory traj;
  traj.steps.reserve(static_cast<size_t>(steps) + 1);
  traj.steps.push_back(p0);
  RealVector p = p0.vector();
  for (int k = 0; k < steps; ++k) {
    p = q.matrix() * p;
    traj.steps.emplace_back(p);
  }
  return traj;
}

QuantumTrajectory relax_quantum(const SuperoperatorMatrix& m,
                                const DensityMatrix& rho0, int steps) {
  check_steps(steps);
  if (m.state_dim() != rho0.dim())
    throw InvariantError("relax_quantum: dimension mismatch");
  QuantumTrajectory traj;
  traj.steps.reserve(static_cast<size_t>(steps) + 1);
  traj.steps.push_back(rho0);
  ComplexVector v = channels::vectorize(rho0.matrix());
  for (int k = 0; k < steps; ++k) {
    v = m.matrix() * v;
    traj.steps.emplace_back(channels::unvectorize(v));
  }
  return traj;
}

SpectralAmplitudes spectral_expansion(const spectral::SpectralDecomposition& d,
                                      const ProbabilityVector& p0) {
  if (!d.biorthonormal)
    throw NumericalError("spectral_expansion: defective spectrum (near an exceptional point)");
  if (d.dim() != p0.dim()) throw InvariantError("spectral_expansion: dimension mismatch");
  SpectralAmplitudes amps;
  amps.c.resize(d.dim());
  const ComplexVector p = p0.vector().cast<Complex>();
  for (Eigen::Index s = 0; s < d.dim(); ++s) amps.c(s) = d.left.col(s).dot(p);
  return amps;
}

RealVector reconstruct(const spectral::SpectralDecomposition& d,
                       const SpectralAmplitudes& amps, int k) {
  if (k < 0) throw InvariantError("reconstruct: negative step");
  ComplexVector out = ComplexVector::Zero(d.dim());
  for (Eigen::Index s = 0; s < d.dim(); ++s)
    out += amps.c(s) * std::pow(d.eigenvalues(s), k) * d.right.col(s);
  return out.real();
}

ProbabilityVector marginals(const ProbabilityVector& p, int L) {
  if (p.dim() != 2 * Eigen::Index(L))
    throw InvariantError("marginals: dimension is not 2L");
  RealVector m(L);
  for (int l = 0; l < L; ++l) m(l) = p[l] + p[L + l];
  return ProbabilityVector(std::move(m));
}

ProbabilityVector populations(const DensityMatrix& rho) {
  return ProbabilityVector(rho.matrix().diagonal().real());
}

std::vector<double> residual_norms(const ClassicalTrajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.steps.size());
  for (const auto& p : traj.steps) {
    const double pi = 1.0 / double(p.dim());
    out.push_back((p.vector().array() - pi).matrix().norm());
  }
  return out;
}

int oscillation_flips(const std::vector<double>& residuals) {
  const size_t n = residuals.size();
  if (n < 4) return 0;
  std::vector<double> logr(n);
  for (size_t i = 0; i < n; ++i) logr[i] = std::log(std::max(residuals[i], 1e-12));
  const size_t start = n / 3;  // late-time window only
  int flips = 0;
  int prev_sign = 0;
  for (size_t i = std::max<size_t>(start, 1); i + 1 < n; ++i) {
    const double curv = logr[i + 1] - 2.0 * logr[i] + logr[i - 1];
    if (std::abs(curv) < 1e-4) continue;
    const int sign = curv > 0.0 ? 1 : -1;
    if (prev_sign != 0 && sign != prev_sign) ++flips;
    prev_sign = sign;
  }
  return flips;
}

double fit_log_slope(const std::vector<double>& residuals) {
  const size_t n = residuals.size();
  if (n < 3) throw InvariantError("fit_log_slope: trajectory too short");
  const size_t start = 2 * n / 3;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  size_t count = 0;
  for (size_t i = start; i < n; ++i) {
    const double x = double(i);
    const double y = std::log(std::max(residuals[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double denom = double(count) * sxx - sx * sx;
  if (denom == 0.0) throw NumericalError("fit_log_slope: degenerate fit");
  return (double(count) * sxy - sx * sy) / denom;
}

}  // namespace owalk::dynamics
