#pragma once

#include <vector>

#include "openwalk/spectral.hpp"
#include "openwalk/types.hpp"

namespace owalk::dynamics {

/// Hard cap on stored trajectory length; every step is kept (no thinning).
inline constexpr int kMaxSteps = 500;

struct ClassicalTrajectory {
  std::vector<ProbabilityVector> steps;  // index k = number of applications of Q
};

struct QuantumTrajectory {
  std::vector<DensityMatrix> steps;
};

/// P(k) = Q^k P(0) for k = 0..steps.
ClassicalTrajectory relax_classical(const StochasticMatrix& q,
                                    const ProbabilityVector& p0, int steps);

/// rho(k) under repeated application of the one-step superoperator.
QuantumTrajectory relax_quantum(const SuperoperatorMatrix& m,
                                const DensityMatrix& rho0, int steps);

/// Spectral amplitudes C_s = <l_s|P(0)> (all modes, stationary included).
struct SpectralAmplitudes {
  ComplexVector c;
};

/// Requires a biorthonormal decomposition; throws NumericalError
/// ("defective spectrum") near an exceptional point.
SpectralAmplitudes spectral_expansion(const spectral::SpectralDecomposition& d,
                                      const ProbabilityVector& p0);

/// Sum_s C_s mu_s^k r^(s); equals Q^k P(0) for a faithful decomposition.
RealVector reconstruct(const spectral::SpectralDecomposition& d,
                       const SpectralAmplitudes& amps, int k);

/// Position marginal p_l = X_l + Y_l of a length-2L internal-state distribution.
ProbabilityVector marginals(const ProbabilityVector& p, int L);

/// Diagonal of rho as a probability vector.
ProbabilityVector populations(const DensityMatrix& rho);

/// ||P(k) - pi||_2 per step against the uniform distribution.
std::vector<double> residual_norms(const ClassicalTrajectory& traj);

/// Counts sign flips of the discrete second difference of log residual over
/// the last two thirds of the trajectory (floor 1e-12, curvature threshold
/// 1e-4). Monotone decay gives 0; oscillatory decay gives >= 3.
int oscillation_flips(const std::vector<double>& residuals);

/// Slope of a least-squares line through log(residual) over the last third.
double fit_log_slope(const std::vector<double>& residuals);

}  // namespace owalk::dynamics
