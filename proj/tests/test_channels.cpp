#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "openwalk/channels.hpp"
#include "openwalk/models.hpp"

using namespace owalk;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent matrix-exponential oracle: scaling and squaring with a plain
// Taylor series, no eigendecomposition involved.
ComplexMatrix expm_oracle(const ComplexMatrix& a) {
  const double norm = a.cwiseAbs().maxCoeff() * double(a.rows());
  int s = 0;
  while (norm / std::pow(2.0, s) > 0.5) ++s;
  const ComplexMatrix b = a / std::pow(2.0, s);
  ComplexMatrix result = ComplexMatrix::Identity(a.rows(), a.cols());
  ComplexMatrix term = result;
  for (int k = 1; k <= 30; ++k) {
    term = term * b / double(k);
    result += term;
  }
  for (int k = 0; k < s; ++k) result = result * result;
  return result;
}

DensityMatrix random_density(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  ComplexMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint().eval());  // scrub round-off asymmetry
  return DensityMatrix(std::move(rho));
}

UnitaryMatrix fig2_propagator(double tau, double phi = 0.0) {
  return channels::propagator(
      models::ring_hamiltonian(models::RingModel(1, 1, 0.5, phi)), tau);
}

}  // namespace

TEST_CASE("propagator at tau = 0 is the identity") {
  const UnitaryMatrix u = fig2_propagator(0.0);
  CHECK((u.matrix() - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("propagator matches the scaling-and-squaring oracle") {
  for (double phi : {0.0, kPi / 3.0}) {
    for (double tau : {0.3, 0.8127, 1.0}) {
      const HermitianMatrix h =
          models::ring_hamiltonian(models::RingModel(1, 1, 0.5, phi));
      const UnitaryMatrix u = channels::propagator(h, tau);
      const ComplexMatrix ref = expm_oracle(Complex(0.0, -tau) * h.matrix());
      CHECK((u.matrix() - ref).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("propagator rejects negative tau") {
  const HermitianMatrix h = models::ring_hamiltonian(models::RingModel(1, 1, 0.5, 0));
  CHECK_THROWS_AS(channels::propagator(h, -0.1), InvariantError);
}

TEST_CASE("dephase_step limits and trace") {
  const UnitaryMatrix u = fig2_propagator(0.8127);
  const DensityMatrix rho = random_density(3, 11);

  const DensityMatrix full = channels::dephase_step(rho, u, 1.0);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(full.matrix()(i, j)) <= 1e-14);

  const DensityMatrix none = channels::dephase_step(rho, u, 0.0);
  const ComplexMatrix expect = u.matrix() * rho.matrix() * u.matrix().adjoint();
  CHECK((none.matrix() - expect).cwiseAbs().maxCoeff() <= 1e-13);

  for (double q : {0.0, 0.3, 0.7, 1.0}) {
    const DensityMatrix out = channels::dephase_step(rho, u, q);
    CHECK(std::abs(out.matrix().trace() - Complex(1.0)) <= 1e-12);
  }
  CHECK_THROWS_AS(channels::dephase_step(rho, u, 1.5), InvariantError);
}

TEST_CASE("classical markov basics") {
  const UnitaryMatrix id(ComplexMatrix::Identity(3, 3));
  CHECK((channels::classical_markov(id).matrix() - RealMatrix::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() <= 1e-15);

  // time-reversal symmetric ring: Q symmetric
  for (double beta : {0.5, 0.79, 1.1}) {
    const RealMatrix q = channels::classical_markov(fig2_propagator(beta)).matrix();
    CHECK((q - q.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("classical iteration converges to the uniform distribution") {
  const RealMatrix q = channels::classical_markov(fig2_propagator(0.79)).matrix();
  RealVector p(3);
  p << 1.0, 0.0, 0.0;
  for (int k = 0; k < 400; ++k) p = q * p;
  CHECK((p.array() - 1.0 / 3.0).abs().maxCoeff() <= 1e-8);
}

TEST_CASE("liouvillian q=1 diagonal block equals Q") {
  const UnitaryMatrix u = fig2_propagator(0.8127);
  const SuperoperatorMatrix m = channels::liouvillian(u, 1.0);
  const RealMatrix q = channels::classical_markov(u).matrix();
  for (Eigen::Index n = 0; n < 3; ++n)
    for (Eigen::Index l = 0; l < 3; ++l)
      CHECK(std::abs(m.matrix()(n * 3 + n, l * 3 + l) - Complex(q(n, l))) <= 1e-12);
}

TEST_CASE("liouvillian fixes the uniform diagonal state") {
  for (double q : {0.0, 0.3, 0.7, 1.0}) {
    const SuperoperatorMatrix m = channels::liouvillian(fig2_propagator(0.7), q);
    const ComplexVector v =
        channels::vectorize(ComplexMatrix::Identity(3, 3) / 3.0);
    CHECK(((m.matrix() * v) - v).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("liouvillian at q=0 is unitary conjugation") {
  const UnitaryMatrix u = fig2_propagator(0.6, kPi / 3.0);
  const SuperoperatorMatrix m = channels::liouvillian(u, 0.0);
  const DensityMatrix rho = random_density(3, 21);
  const ComplexMatrix via_super =
      channels::unvectorize(m.matrix() * channels::vectorize(rho.matrix()));
  const ComplexMatrix direct = u.matrix() * rho.matrix() * u.matrix().adjoint();
  CHECK((via_super - direct).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("dephase_step iteration equals superoperator application") {
  const UnitaryMatrix u = fig2_propagator(0.8, kPi / 3.0);
  for (double q : {0.0, 0.3, 0.7, 1.0}) {
    const SuperoperatorMatrix m = channels::liouvillian(u, q);
    DensityMatrix rho = random_density(3, 31);
    ComplexVector v = channels::vectorize(rho.matrix());
    for (int k = 0; k < 5; ++k) {
      rho = channels::dephase_step(rho, u, q);
      v = m.matrix() * v;
      CHECK((channels::unvectorize(v) - rho.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("dephase_step preserves positivity") {
  const UnitaryMatrix u = fig2_propagator(1.0);
  for (unsigned seed : {1u, 2u, 3u}) {
    DensityMatrix rho = random_density(3, seed);
    for (double q : {0.0, 0.5, 1.0}) {
      const DensityMatrix out = channels::dephase_step(rho, u, q);  // ctor checks
      CHECK(out.dim() == 3);
    }
  }
}

TEST_CASE("vectorization round-trips row-major") {
  const DensityMatrix rho = random_density(3, 41);
  const ComplexVector v = channels::vectorize(rho.matrix());
  CHECK(v(1) == rho.matrix()(0, 1));  // index (n,m) -> n*N + m
  CHECK((channels::unvectorize(v) - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(channels::unvectorize(ComplexVector::Zero(5)), InvariantError);
}
