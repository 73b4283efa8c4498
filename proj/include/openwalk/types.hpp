#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace owalk {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Thrown when a value object fails its construction invariants.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown on eigensolver failures and other numerical breakdowns.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double hermiticity_residual(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Dense complex square matrix with H = H^dagger enforced at construction.
class HermitianMatrix {
 public:
  static constexpr double kResidualTol = 1e-12;

  explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvariantError("HermitianMatrix: not square");
    if (detail::hermiticity_residual(m_) > kResidualTol)
      throw InvariantError("HermitianMatrix: hermiticity residual exceeds 1e-12");
  }

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

/// Dense complex square matrix with ||U^dagger U - I||_max <= 1e-10.
class UnitaryMatrix {
 public:
  static constexpr double kResidualTol = 1e-10;

  explicit UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvariantError("UnitaryMatrix: not square");
    const ComplexMatrix gram = m_.adjoint() * m_;
    const double res =
        (gram - ComplexMatrix::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff();
    if (res > kResidualTol)
      throw InvariantError("UnitaryMatrix: unitarity residual " + std::to_string(res));
  }

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

/// Doubly stochastic transition matrix. Entries are clamped to [0, 1] on
/// construction; anything below -1e-14 or with a bad row/column sum is rejected.
class StochasticMatrix {
 public:
  static constexpr double kEntrySlack = 1e-14;
  static constexpr double kSumTol = 1e-12;

  explicit StochasticMatrix(RealMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvariantError("StochasticMatrix: not square");
    if (m_.minCoeff() < -kEntrySlack || m_.maxCoeff() > 1.0 + kEntrySlack)
      throw InvariantError("StochasticMatrix: entry outside [0,1] beyond round-off");
    m_ = m_.cwiseMax(0.0).cwiseMin(1.0);
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      if (std::abs(m_.col(j).sum() - 1.0) > kSumTol)
        throw InvariantError("StochasticMatrix: column sum differs from 1");
      if (std::abs(m_.row(j).sum() - 1.0) > kSumTol)
        throw InvariantError("StochasticMatrix: row sum differs from 1");
    }
  }

  const RealMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  RealMatrix m_;
};

/// Unit-trace Hermitian positive-semidefinite matrix (up to round-off).
class DensityMatrix {
 public:
  static constexpr double kTraceTol = 1e-12;
  static constexpr double kHermTol = 1e-12;
  static constexpr double kEigFloor = -1e-10;

  explicit DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvariantError("DensityMatrix: not square");
    if (std::abs(m_.trace() - Complex(1.0)) > kTraceTol)
      throw InvariantError("DensityMatrix: trace differs from 1");
    if (detail::hermiticity_residual(m_) > kHermTol)
      throw InvariantError("DensityMatrix: not Hermitian");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw NumericalError("DensityMatrix: eigenvalue check failed");
    if (es.eigenvalues().minCoeff() < kEigFloor)
      throw InvariantError("DensityMatrix: negative eigenvalue beyond round-off");
  }

  /// Pure state |n><n|.
  static DensityMatrix site_excitation(Eigen::Index dim, Eigen::Index n) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m(n, n) = 1.0;
    return DensityMatrix(std::move(m));
  }

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

/// One-step map on row-major vectorized density matrices, dimension N^2.
/// Trace preservation (sum of the (n,n) rows reproducing the flat trace
/// functional) is verified at construction.
class SuperoperatorMatrix {
 public:
  static constexpr double kTraceTol = 1e-12;

  SuperoperatorMatrix(ComplexMatrix m, double q) : m_(std::move(m)), q_(q) {
    if (m_.rows() != m_.cols()) throw InvariantError("SuperoperatorMatrix: not square");
    const auto n2 = m_.rows();
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(n2))));
    if (n * n != n2) throw InvariantError("SuperoperatorMatrix: dimension is not a square");
    if (q < 0.0 || q > 1.0) throw InvariantError("SuperoperatorMatrix: q outside [0,1]");
    n_ = n;
    // trace functional must be a left fixed point: sum_n M[(n,n),(l,r)] = delta_{l,r}
    Eigen::RowVectorXcd tr = Eigen::RowVectorXcd::Zero(n2);
    for (Eigen::Index k = 0; k < n; ++k) tr += m_.row(k * n + k);
    for (Eigen::Index l = 0; l < n; ++l)
      for (Eigen::Index r = 0; r < n; ++r)
        if (std::abs(tr(l * n + r) - (l == r ? 1.0 : 0.0)) > kTraceTol)
          throw InvariantError("SuperoperatorMatrix: map is not trace preserving");
  }

  const ComplexMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  Eigen::Index state_dim() const { return n_; }
  double dephasing_q() const { return q_; }

 private:
  ComplexMatrix m_;
  Eigen::Index n_;
  double q_;
};

/// Normalized probability distribution; entries in [-1e-14, ...] are clamped to 0.
class ProbabilityVector {
 public:
  static constexpr double kEntrySlack = 1e-14;
  static constexpr double kSumTol = 1e-12;

  explicit ProbabilityVector(RealVector v) : v_(std::move(v)) {
    if (v_.minCoeff() < -kEntrySlack)
      throw InvariantError("ProbabilityVector: negative entry beyond round-off");
    v_ = v_.cwiseMax(0.0);
    if (std::abs(v_.sum() - 1.0) > kSumTol)
      throw InvariantError("ProbabilityVector: entries do not sum to 1");
  }

  static ProbabilityVector uniform(Eigen::Index dim) {
    return ProbabilityVector(RealVector::Constant(dim, 1.0 / double(dim)));
  }

  /// Delta distribution concentrated on entry n.
  static ProbabilityVector site(Eigen::Index dim, Eigen::Index n) {
    RealVector v = RealVector::Zero(dim);
    v(n) = 1.0;
    return ProbabilityVector(std::move(v));
  }

  const RealVector& vector() const { return v_; }
  Eigen::Index dim() const { return v_.size(); }
  double operator[](Eigen::Index i) const { return v_(i); }

 private:
  RealVector v_;
};

}  // namespace owalk
