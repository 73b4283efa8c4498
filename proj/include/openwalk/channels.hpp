#pragma once

#include "openwalk/types.hpp"

namespace owalk::channels {

/// U = exp(-i H tau), computed through the Hermitian eigendecomposition so the
/// result is unitary to round-off.
UnitaryMatrix propagator(const HermitianMatrix& h, double tau);

/// One dephased step: rho' = (1-q) U rho U^dagger + q diag(U rho U^dagger).
DensityMatrix dephase_step(const DensityMatrix& rho, const UnitaryMatrix& u, double q);

/// Classical transition matrix Q_{n,m} = |U_{n,m}|^2 of the fully dephased walk.
StochasticMatrix classical_markov(const UnitaryMatrix& u);

/// N^2 x N^2 one-step map on row-major vectorized density matrices:
/// M[(n,m),(l,r)] = (1-q) U_{n,l} conj(U_{m,r}) + q delta_{n,m} U_{n,l} conj(U_{n,r}).
SuperoperatorMatrix liouvillian(const UnitaryMatrix& u, double q);

/// Row-major vectorization helpers shared with the dynamics module.
ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v);

}  // namespace owalk::channels
