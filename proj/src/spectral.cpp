#include "openwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace owalk::spectral {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCondLimit = 1e8;

// -Log(mu) on the principal branch, with Im wrapped to (-pi, pi] so mu = -1
// maps to +i pi deterministically. mu = 0 (fully damped coherence sector at
// q = 1) becomes Re = +inf.
Complex floquet_exponent(Complex mu) {
  if (std::abs(mu) == 0.0)
    return Complex(std::numeric_limits<double>::infinity(), 0.0);
  Complex lam = -std::log(mu);
  double im = lam.imag();
  if (im <= -kPi) im += 2.0 * kPi;
  if (im > kPi) im -= 2.0 * kPi;
  return Complex(lam.real(), im);
}

void fix_phase(Eigen::Ref<ComplexVector> v) {
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best + 1e-15) {
      best = a;
      imax = i;
    }
  }
  if (best <= 0.0) return;
  v *= std::conj(v(imax)) / best;
  v(imax) = Complex(v(imax).real(), 0.0);  // scrub the residual imaginary dust
}

}  // namespace

SpectralDecomposition full_spectrum(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InvariantError("full_spectrum: matrix not square");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const double cond =
        svd.singularValues()(0) / std::max(svd.singularValues().minCoeff(), 1e-300);
    throw NumericalError("full_spectrum: eigensolver failed to converge (cond ~ " +
                         std::to_string(cond) + ")");
  }

  const Eigen::Index n = m.rows();
  SpectralDecomposition d;
  ComplexVector mu = es.eigenvalues();
  ComplexVector lam(n);
  for (Eigen::Index i = 0; i < n; ++i) lam(i) = floquet_exponent(mu(i));

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (lam(a).real() != lam(b).real()) return lam(a).real() < lam(b).real();
    return lam(a).imag() < lam(b).imag();
  });

  d.eigenvalues.resize(n);
  d.floquet.resize(n);
  d.right.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index s = order[static_cast<size_t>(i)];
    d.eigenvalues(i) = mu(s);
    d.floquet(i) = lam(s);
    ComplexVector v = es.eigenvectors().col(s);
    const double nrm = v.norm();
    if (nrm == 0.0) throw NumericalError("full_spectrum: zero-norm eigenvector");
    v /= nrm;
    fix_phase(v);
    d.right.col(i) = v;
  }

  Eigen::JacobiSVD<ComplexMatrix> svd(d.right);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues()(0);
  if (smin <= 0.0 || smax / smin > kCondLimit) {
    d.near_ep = true;
    d.biorthonormal = false;
    d.left = d.right;  // placeholder; spectral expansions must not use it
    return d;
  }

  // Rows of V^{-1} are the (conjugated) left eigenvectors; with this choice
  // <l_s|r_t> = delta_{s,t} by construction.
  const ComplexMatrix inv = d.right.partialPivLu().solve(ComplexMatrix::Identity(n, n));
  d.left.resize(n, n);
  for (Eigen::Index s = 0; s < n; ++s) d.left.col(s) = inv.row(s).conjugate().transpose();
  d.biorthonormal = true;
  return d;
}

SpectralDecomposition full_spectrum(const StochasticMatrix& m) {
  return full_spectrum(ComplexMatrix(m.matrix().cast<Complex>()));
}

SpectralDecomposition full_spectrum(const SuperoperatorMatrix& m) {
  return full_spectrum(m.matrix());
}

double detailed_balance_residual(const StochasticMatrix& q) {
  return (q.matrix() - q.matrix().transpose()).cwiseAbs().maxCoeff();
}

double overlap_between(const SpectralDecomposition& d, Eigen::Index a, Eigen::Index b) {
  if (a < 0 || b < 0 || a >= d.dim() || b >= d.dim())
    throw InvariantError("overlap_between: mode index out of range");
  const double na = d.right.col(a).norm();
  const double nb = d.right.col(b).norm();
  if (na == 0.0 || nb == 0.0)
    throw NumericalError("overlap_between: zero-norm eigenvector");
  return std::abs(d.right.col(a).dot(d.right.col(b))) / (na * nb);
}

double overlap_g(const SpectralDecomposition& d) {
  if (d.dim() < 3) throw InvariantError("overlap_g: need at least three modes");
  return overlap_between(d, 1, 2);
}

double pairing_check(const StochasticMatrix& q, const SpectralDecomposition& d,
                     int L) {
  if (d.dim() != 2 * Eigen::Index(L))
    throw InvariantError("pairing_check: dimension is not 2L");
  if (q.dim() != d.dim())
    throw InvariantError("pairing_check: matrix/decomposition size mismatch");
  const Eigen::Index n = d.dim();
  const ComplexMatrix qc = q.matrix().cast<Complex>();

  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    // partner eigenvalue -mu must be in the spectrum
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < n; ++k)
      best = std::min(best, std::abs(d.eigenvalues(k) + d.eigenvalues(i)));
    worst = std::max(worst, best);

    // the transformed vector x'_l = (-1)^l x_l, y'_l = (-1)^{l+1} y_l must be
    // an eigenvector of Q with eigenvalue -mu. Checking the eigen-residual
    // against Q directly stays meaningful when -mu is degenerate (e.g. the
    // fully damped kernel), where any individual partner eigenvector is only
    // defined up to a basis choice.
    ComplexVector t(n);
    for (int l = 1; l <= L; ++l) {
      const double sx = (l % 2 == 0) ? 1.0 : -1.0;
      t(l - 1) = sx * d.right(l - 1, i);
      t(L + l - 1) = -sx * d.right(L + l - 1, i);
    }
    t /= t.norm();
    worst = std::max(worst, (qc * t + d.eigenvalues(i) * t).norm());
  }
  return worst;
}

TrackedBranches track_modes(const std::vector<SpectralDecomposition>& grid) {
  TrackedBranches out;
  if (grid.empty()) return out;
  const Eigen::Index n = grid.front().dim();
  for (const auto& d : grid)
    if (d.dim() != n) throw InvariantError("track_modes: inconsistent dimensions");

  out.labels.resize(grid.size());
  std::vector<int>& first = out.labels[0];
  first.resize(static_cast<size_t>(n));
  std::iota(first.begin(), first.end(), 0);

  for (size_t k = 1; k < grid.size(); ++k) {
    const SpectralDecomposition& prev = grid[k - 1];
    const SpectralDecomposition& cur = grid[k];
    std::vector<int> assigned(static_cast<size_t>(n), 0);
    std::vector<int>& labels = out.labels[k];
    labels.resize(static_cast<size_t>(n), -1);

    for (Eigen::Index b = 0; b < n; ++b) {
      const int pi = out.labels[k - 1][static_cast<size_t>(b)];
      double best = -1.0, second = -1.0;
      int jbest = -1;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (assigned[static_cast<size_t>(j)]) continue;
        const double ov = std::abs(cur.right.col(j).dot(prev.right.col(pi)));
        if (ov > best) {
          second = best;
          best = ov;
          jbest = int(j);
        } else if (ov > second) {
          second = ov;
        }
      }
      if (second >= 0.0 && best - second < 1e-6) {
        // two candidates are indistinguishable by overlap; fall back to
        // eigenvalue proximity among the tied set
        out.had_ambiguity = true;
        double bestd = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j) {
          if (assigned[static_cast<size_t>(j)]) continue;
          const double ov = std::abs(cur.right.col(j).dot(prev.right.col(pi)));
          if (best - ov >= 1e-6) continue;
          const double dist = std::abs(cur.eigenvalues(j) - prev.eigenvalues(pi));
          if (dist < bestd) {
            bestd = dist;
            jbest = int(j);
          }
        }
      }
      assigned[static_cast<size_t>(jbest)] = 1;
      labels[static_cast<size_t>(b)] = jbest;
    }
  }
  return out;
}

}  // namespace owalk::spectral
