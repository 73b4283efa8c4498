#pragma once

#include <vector>

#include "openwalk/types.hpp"

namespace owalk::spectral {

/// Full biorthogonal eigendecomposition of a one-step map.
///
/// Modes are sorted so the stationary mode (lambda = 0) comes first, then by
/// ascending Re(lambda), ties by ascending Im(lambda). Floquet exponents use
/// the principal branch with Im in (-pi, pi]. Left eigenvectors are the rows
/// of the inverse eigenvector matrix, so <l_s|r_t> = delta_{s,t} whenever the
/// matrix is safely diagonalizable; near an exceptional point the biorthonormal
/// flag is cleared instead of failing.
struct SpectralDecomposition {
  ComplexVector eigenvalues;   // mu_n
  ComplexVector floquet;       // lambda_n = -Log mu_n
  ComplexMatrix right;         // columns r^(n), unit norm, largest entry real positive
  ComplexMatrix left;          // columns l^(n) with <l_s|r_t> = delta when biorthonormal
  bool biorthonormal = false;
  bool near_ep = false;

  Eigen::Index dim() const { return eigenvalues.size(); }
};

SpectralDecomposition full_spectrum(const ComplexMatrix& m);
SpectralDecomposition full_spectrum(const StochasticMatrix& m);
SpectralDecomposition full_spectrum(const SuperoperatorMatrix& m);

/// max_{n,l} |Q_{n,l} - Q_{l,n}|; zero iff detailed balance (uniform pi).
double detailed_balance_residual(const StochasticMatrix& q);

/// Normalized right-eigenvector overlap between two modes.
double overlap_between(const SpectralDecomposition& d, Eigen::Index a, Eigen::Index b);

/// The overlap diagnostic g between modes 2 and 3 (indices 1 and 2).
double overlap_g(const SpectralDecomposition& d);

/// Checks the mu -> -mu eigenvalue pairing of a coined-walk transition matrix
/// together with the partner eigenvector relation x'_l = (-1)^l x_l,
/// y'_l = (-1)^{l+1} y_l: each transformed vector must be an eigenvector of Q
/// with eigenvalue -mu. Verifying against Q itself keeps the check valid on
/// degenerate eigenspaces. Returns the combined residual.
double pairing_check(const StochasticMatrix& q, const SpectralDecomposition& d, int L);

struct TrackedBranches {
  // labels[k][b] = mode index in decomposition k belonging to branch b
  std::vector<std::vector<int>> labels;
  bool had_ambiguity = false;
};

/// Assigns branch labels across a parameter grid by maximal successive
/// eigenvector overlap; ambiguities (two overlaps within 1e-6) are resolved
/// by eigenvalue proximity and flagged.
TrackedBranches track_modes(const std::vector<SpectralDecomposition>& grid);

}  // namespace owalk::spectral
