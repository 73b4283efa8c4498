#include "openwalk/channels.hpp"

#include <cmath>

namespace owalk::channels {

UnitaryMatrix propagator(const HermitianMatrix& h, double tau) {
  if (tau < 0.0) throw InvariantError("propagator: tau must be >= 0");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.matrix());
  if (es.info() != Eigen::Success)
    throw NumericalError("propagator: Hermitian eigendecomposition failed");
  const auto& energies = es.eigenvalues();
  ComplexVector phases(energies.size());
  for (Eigen::Index k = 0; k < energies.size(); ++k)
    phases(k) = std::exp(Complex(0.0, -energies(k) * tau));
  ComplexMatrix u =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return UnitaryMatrix(std::move(u));
}

DensityMatrix dephase_step(const DensityMatrix& rho, const UnitaryMatrix& u, double q) {
  if (q < 0.0 || q > 1.0) throw InvariantError("dephase_step: q outside [0,1]");
  if (rho.dim() != u.dim()) throw InvariantError("dephase_step: dimension mismatch");
  const ComplexMatrix evolved = u.matrix() * rho.matrix() * u.matrix().adjoint();
  ComplexMatrix out = (1.0 - q) * evolved;
  out.diagonal() += q * evolved.diagonal();
  return DensityMatrix(std::move(out));
}

StochasticMatrix classical_markov(const UnitaryMatrix& u) {
  RealMatrix q = u.matrix().cwiseAbs2();
  return StochasticMatrix(std::move(q));
}

SuperoperatorMatrix liouvillian(const UnitaryMatrix& u, double q) {
  if (q < 0.0 || q > 1.0) throw InvariantError("liouvillian: q outside [0,1]");
  const Eigen::Index n = u.dim();
  const ComplexMatrix& um = u.matrix();
  ComplexMatrix m = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index row_n = 0; row_n < n; ++row_n)
    for (Eigen::Index row_m = 0; row_m < n; ++row_m)
      for (Eigen::Index l = 0; l < n; ++l)
        for (Eigen::Index r = 0; r < n; ++r) {
          Complex v = (1.0 - q) * um(row_n, l) * std::conj(um(row_m, r));
          if (row_n == row_m) v += q * um(row_n, l) * std::conj(um(row_n, r));
          m(row_n * n + row_m, l * n + r) = v;
        }
  return SuperoperatorMatrix(std::move(m), q);
}

ComplexVector vectorize(const ComplexMatrix& rho) {
  const Eigen::Index n = rho.rows();
  ComplexVector v(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) v(i * n + j) = rho(i, j);
  return v;
}

ComplexMatrix unvectorize(const ComplexVector& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
  if (n * n != v.size()) throw InvariantError("unvectorize: length is not a square");
  ComplexMatrix rho(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) rho(i, j) = v(i * n + j);
  return rho;
}

}  // namespace owalk::channels
