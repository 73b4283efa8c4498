#pragma once

#include "openwalk/types.hpp"

namespace owalk::models {

/// Three-node ring with hopping amplitudes j1, j2, j3 (in units of j1) and a
/// gauge phase phi applied to the 1-3 link. Angles are radians.
struct RingModel {
  double j1 = 1.0;
  double j2 = 1.0;
  double j3 = 0.5;
  double phi = 0.0;

  RingModel(double j1_, double j2_, double j3_, double phi_);
};

/// Coined walk on a line of L sites with internal states H, V and reflecting
/// edges. The interior coin angle is uniform; the boundary coins are pinned
/// to pi/2 and cannot be overridden.
struct CoinedWalkModel {
  int length;
  double coin_angle;

  CoinedWalkModel(int length_, double coin_angle_);

  /// Coin angle beta_n for n = 0..L (beta_0 = beta_L = pi/2).
  double coin_at(int n) const;
  Eigen::Index state_dim() const { return 2 * Eigen::Index(length); }
};

/// 3x3 ring Hamiltonian: H_{12} = j1, H_{23} = j2, H_{13} = j3 e^{i phi},
/// zero diagonal, conjugate-symmetric completion.
HermitianMatrix ring_hamiltonian(const RingModel& model);

/// One-step walk unitary U = S_V C S_H on the 2L-dimensional composite basis
/// (positions 1..L) x (H, V), index k = n-1 for (n, H) and k = L+n-1 for (n, V).
UnitaryMatrix coined_step_unitary(const CoinedWalkModel& model);

/// The classical transition matrix of the dephased coined walk, built directly
/// from the population update rules (not via |U|^2).
StochasticMatrix coined_markov_direct(const CoinedWalkModel& model);

}  // namespace owalk::models
